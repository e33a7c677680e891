#include "rpsteer/io.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "rpsteer/errors.hpp"

namespace rpsteer {

namespace {

double param(const std::map<std::string, double>& params, const std::string& key, const std::string& family) {
  const auto it = params.find(key);
  if (it == params.end()) throw DomainError(family + " needs parameter " + key);
  return it->second;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

EllipseFamily make_family(const std::string& name, const std::map<std::string, double>& params,
                          const std::optional<TwoQubitRealState>& state) {
  if (name == "werner") return werner(param(params, "eta", name));
  if (name == "pure-mixed") return pure_mixed(param(params, "alpha", name), param(params, "eta", name));
  if (name == "depolarized")
    return depolarized(param(params, "alpha", name), param(params, "eta_a", name), param(params, "eta_b", name));
  if (name == "state") {
    if (!state) throw DomainError("family state needs an explicit matrix");
    return ellipse_from_state(*state);
  }
  throw DomainError("unknown family: " + name);
}

BlochOp parse_bloch(std::string_view text) {
  std::string s(text);
  for (char& c : s)
    if (c == ',') c = ' ';
  std::istringstream in(s);
  BlochOp y;
  std::string rest;
  if (!(in >> y.n >> y.r1 >> y.r3) || (in >> rest))
    throw DomainError("expected three numbers n,r1,r3, got '" + std::string(text) + "'");
  return y;
}

std::string certificate_json(const EllipseFamily& fam, const Verdict& v, const Quadrature& q,
                             const std::string& note) {
  nlohmann::ordered_json j;
  j["family"] = fam.name;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, val] : fam.params) params[k] = val;
  j["params"] = params;
  j["Y"] = {v.y.n, v.y.r1, v.y.r3};
  j["kind"] = to_string(v.kind);
  j["min_eig"] = v.min_eig;
  j["max_eig"] = v.max_eig;
  j["quadrature"] = {{"panels", v.panels}, {"tol", q.refine_until}, {"max_panels", q.max_panels}};
  j["tolerances"] = {{"psd", kTolPsd}, {"nonzero", kTolNonzero}, {"tilt", kTolTilt}};
  if (!note.empty()) j["note"] = note;
  return j.dump(2) + "\n";
}

std::string render_svg(const std::vector<BoundaryPoint>& rows, bool with_tilt_line) {
  if (rows.empty()) throw DomainError("render_svg: no rows");
  constexpr double left = 70, right = 770, top = 30, bottom = 540;
  const double alpha_max = kPi / 4;
  auto sx = [&](double a) { return fmt("%.2f", left + (right - left) * a / alpha_max); };
  auto sy = [&](double e) { return fmt("%.2f", bottom - (bottom - top) * e); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";

  // Certified-unsteerable region.
  out << "<polygon fill=\"#9ecae1\" stroke=\"none\" points=\"" << sx(rows.front().alpha) << ',' << sy(0);
  for (const auto& r : rows) out << ' ' << sx(r.alpha) << ',' << sy(r.valid ? r.eta_lower : 0.0);
  out << ' ' << sx(rows.back().alpha) << ',' << sy(0) << "\"/>\n";

  out << "<polyline fill=\"none\" stroke=\"#08519c\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < rows.size(); ++i)
    out << (i ? " " : "") << sx(rows[i].alpha) << ',' << sy(rows[i].eta_upper);
  out << "\"/>\n";

  if (with_tilt_line) {
    out << "<polyline fill=\"none\" stroke=\"purple\" stroke-width=\"2\" points=\"";
    for (int k = 0; k <= 100; ++k) {
      const double a = alpha_max * k / 100;
      out << (k ? " " : "") << sx(a) << ',' << sy(std::cos(2 * a));
    }
    out << "\"/>\n";
  }

  out << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << right - left << "\" height=\"" << bottom - top
      << "\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const std::string x = sx(alpha_max * k / 4), y = sy(0.25 * k);
    out << "<line x1=\"" << x << "\" y1=\"" << bottom << "\" x2=\"" << x << "\" y2=\"" << bottom + 6 << "\"/>\n";
    out << "<line x1=\"" << left - 6 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y << "\"/>\n";
  }
  out << "</g>\n";

  out << "<g font-family=\"sans-serif\" font-size=\"14\" fill=\"black\">\n";
  const char* alpha_ticks[] = {"0", "π/16", "π/8", "3π/16", "π/4"};
  for (int k = 0; k <= 4; ++k) {
    out << "<text x=\"" << sx(alpha_max * k / 4) << "\" y=\"" << bottom + 24 << "\" text-anchor=\"middle\">"
        << alpha_ticks[k] << "</text>\n";
    out << "<text x=\"" << left - 10 << "\" y=\"" << sy(0.25 * k) << "\" text-anchor=\"end\" dominant-baseline=\"middle\">"
        << fmt("%.2f", 0.25 * k) << "</text>\n";
  }
  out << "<text x=\"420\" y=\"585\" text-anchor=\"middle\">α</text>\n";
  out << "<text x=\"20\" y=\"285\" text-anchor=\"middle\">η</text>\n";
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace rpsteer
