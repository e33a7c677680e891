// rpsteer: command-line front end.
//
// Exit codes: verdict uses 0 = Unsteerable, 1 = Steerable, 2 = Inconclusive.
// Other commands use 0 = success and 1 = check failed.  Any command uses
// 3 for a computation error, 64 for usage errors and 74 for I/O errors.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "rpsteer/errors.hpp"
#include "rpsteer/io.hpp"
#include "rpsteer/keyring.hpp"
#include "rpsteer/search.hpp"
#include "rpsteer/zonotope.hpp"

using namespace rpsteer;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitError = 3;
constexpr int kExitUsage = 64;
constexpr int kExitIo = 74;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FamilyOptions {
  std::string family;
  std::optional<double> eta, alpha, eta_a, eta_b;
  std::string params;
  std::string state_path;
};

void add_family_options(CLI::App* cmd, FamilyOptions& o) {
  cmd->add_option("--family", o.family, "werner, pure-mixed, depolarized or state")
      ->check(CLI::IsMember({"werner", "pure-mixed", "depolarized", "state"}))
      ->required();
  cmd->add_option("--eta", o.eta, "noise parameter (werner, pure-mixed)");
  cmd->add_option("--alpha", o.alpha, "angle of the pure state");
  cmd->add_option("--eta-a", o.eta_a, "Alice's depolarizing parameter");
  cmd->add_option("--eta-b", o.eta_b, "Bob's depolarizing parameter");
  cmd->add_option("--params", o.params, "parameters as key=value pairs separated by commas");
  cmd->add_option("--state", o.state_path, "file with 16 matrix entries (family state)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw IoError("cannot write " + path);
}

std::map<std::string, double> collect_params(const FamilyOptions& o) {
  std::map<std::string, double> p;
  std::stringstream ss(o.params);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--params expects key=value, got '" + item + "'");
    std::string key = item.substr(0, eq);
    for (char& c : key)
      if (c == '-') c = '_';
    try {
      p[key] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("--params: bad number in '" + item + "'");
    }
  }
  if (o.eta) p["eta"] = *o.eta;
  if (o.alpha) p["alpha"] = *o.alpha;
  if (o.eta_a) p["eta_a"] = *o.eta_a;
  if (o.eta_b) p["eta_b"] = *o.eta_b;
  return p;
}

EllipseFamily build_family(const FamilyOptions& o) {
  std::optional<TwoQubitRealState> state;
  if (o.family == "state") {
    if (o.state_path.empty()) throw UsageError("--family state needs --state FILE");
    const std::string text = read_file(o.state_path);
    try {
      state = parse_state(text);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  try {
    return make_family(o.family, collect_params(o), state);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

Quadrature make_quadrature(double tol) {
  Quadrature q;
  q.refine_until = tol;
  try {
    q.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return q;
}

SearchConfig make_search_config(double tol, int bisect_iters, int threads) {
  SearchConfig cfg;
  cfg.quad = make_quadrature(tol);
  cfg.bisect_iters = bisect_iters;
  cfg.threads = threads;
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

int exit_code(VerdictKind k) {
  switch (k) {
    case VerdictKind::Unsteerable: return 0;
    case VerdictKind::Steerable: return 1;
    case VerdictKind::Inconclusive: return 2;
  }
  return 2;
}

bool is_product_family(const EllipseFamily& fam) {
  if (fam.name != "pure-mixed" && fam.name != "depolarized") return false;
  for (const auto& [k, v] : fam.params)
    if (k == "alpha") return std::abs(std::sin(2 * v)) < 1e-12;
  return false;
}

std::string note_json(const EllipseFamily& fam, const std::string& kind, const std::string& note) {
  nlohmann::ordered_json j;
  j["family"] = fam.name;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : fam.params) params[k] = v;
  j["params"] = params;
  j["kind"] = kind;
  j["tilt"] = std::isfinite(fam.tilt) ? nlohmann::ordered_json(fam.tilt) : nlohmann::ordered_json("infinite");
  j["note"] = note;
  return j.dump(2) + "\n";
}

// --- verdict ---------------------------------------------------------------

struct VerdictOptions {
  FamilyOptions fam;
  std::string y;
};

int cmd_verdict(const VerdictOptions& o, const SearchConfig& cfg) {
  const EllipseFamily fam = build_family(o.fam);

  if (!(fam.tilt < 1.0 - kTolTilt)) {
    if (is_product_family(fam)) {
      std::cout << note_json(fam, "Unsteerable",
                             "alpha = 0: the state is a mixture of product states, hence separable; "
                             "the criterion is not applied");
      return 0;
    }
    if (circumference(fam) < 1e-12) {
      std::cout << note_json(fam, "Unsteerable", "the steering ellipse is a single point; a constant hidden state "
                                                 "reproduces it");
      return 0;
    }
    std::cout << note_json(fam, "Inconclusive", "ellipse tilt is not below 1; the criterion does not apply");
    return 2;
  }

  if (!o.y.empty()) {
    BlochOp y;
    try {
      y = parse_bloch(o.y);
    } catch (const Error& e) {
      throw UsageError(std::string("--Y: ") + e.what());
    }
    const Verdict v = verdict_with(fam, y, cfg.quad);
    std::cout << certificate_json(fam, v, cfg.quad);
    return exit_code(v.kind);
  }

  std::optional<Verdict> best;
  std::string note;
  try {
    best = decide(fam, cfg.quad);
    note = "Y from the proportionality condition";
  } catch (const Error&) {
  }
  if (!best || best->kind == VerdictKind::Inconclusive) {
    const SearchResult up = maximize_min_eig(fam, cfg);
    if (up.verdict.kind == VerdictKind::Unsteerable) {
      best = up.verdict;
    } else {
      const SearchResult down = minimize_max_eig(fam, cfg);
      best = down.verdict.kind == VerdictKind::Steerable ? down.verdict : up.verdict;
    }
    note = "Y from eigenvalue search";
  }
  std::cout << certificate_json(fam, *best, cfg.quad, note);
  return exit_code(best->kind);
}

// --- sweeps ----------------------------------------------------------------

struct SweepOptions {
  std::string family = "pure-mixed";
  std::optional<double> alpha_min;
  double alpha_max = kPi / 4;
  int alpha_steps = 64;
  double eta_a = 1.0;
  std::string out;
};

std::vector<double> sweep_grid(const SweepOptions& o) {
  if (o.alpha_steps < 1) throw UsageError("--alpha-steps must be positive");
  if (!(o.alpha_max > 0.0) || o.alpha_max > kPi / 4 + 1e-12) throw UsageError("--alpha-max must lie in (0, pi/4]");
  if (!o.alpha_min) {
    std::vector<double> g(o.alpha_steps);
    for (int k = 1; k <= o.alpha_steps; ++k) g[k - 1] = o.alpha_max * k / o.alpha_steps;
    return g;
  }
  if (*o.alpha_min < 0.0 || *o.alpha_min > o.alpha_max) throw UsageError("--alpha-min must lie in [0, alpha-max]");
  return linear_grid(*o.alpha_min, o.alpha_max, o.alpha_steps);
}

int cmd_boundary(const SweepOptions& o, const SearchConfig& cfg) {
  if (o.family != "pure-mixed")
    throw UsageError("boundary sweeps the pure-mixed family (werner is its alpha = pi/4 row)");
  const auto rows = boundary_curve(sweep_grid(o), cfg);
  std::ostringstream csv;
  write_boundary_csv(csv, rows);
  write_output(o.out, csv.str());
  return 0;
}

int cmd_depolarize(const SweepOptions& o, const SearchConfig& cfg) {
  if (!(o.eta_a > 0.0) || o.eta_a > 1.0) throw UsageError("--eta-a must lie in (0, 1]");
  const auto rows = depolarizing_region(o.eta_a, sweep_grid(o), cfg);
  std::ostringstream csv;
  write_boundary_csv(csv, rows, true);
  write_output(o.out, csv.str());
  return 0;
}

// --- lhs -------------------------------------------------------------------

struct LhsOptions {
  std::string action;
  FamilyOptions fam;
  int grid_n = kDefaultGridN;
  std::string model_path;
  double tol = 1e-6;
  int n_theta = 36;
};

std::string error_json(double err, int grid_n, double tol) {
  nlohmann::ordered_json j;
  j["grid_n"] = grid_n;
  j["max_error"] = err;
  j["tol"] = tol;
  j["ok"] = err < tol;
  return j.dump(2) + "\n";
}

int cmd_lhs(const LhsOptions& o, const SearchConfig& cfg) {
  const EllipseFamily fam = build_family(o.fam);
  if (o.action == "build") {
    if (o.grid_n < 4) throw UsageError("--grid-n must be at least 4");
    KeyringModel model;
    try {
      model = build_model(fam, o.grid_n, cfg.quad);
    } catch (const PreconditionFailed& e) {
      std::cerr << "rpsteer: " << e.what() << '\n';
      return kExitError;
    }
    std::ostringstream js;
    write_model_json(js, model);
    write_output(o.model_path, js.str());
    const double err = verify_model(model, fam, o.n_theta);
    std::cout << error_json(err, model.grid_n, o.tol);
    return err < o.tol ? 0 : kExitCheckFailed;
  }
  std::istringstream in(read_file(o.model_path));
  KeyringModel model;
  try {
    model = read_model_json(in);
  } catch (const DomainError& e) {
    std::cerr << "rpsteer: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  const double err = verify_model(model, fam, o.n_theta);
  std::cout << error_json(err, model.grid_n, o.tol);
  return err < o.tol ? 0 : kExitCheckFailed;
}

// --- box -------------------------------------------------------------------

struct BoxOptions {
  std::string measure;
  std::string z;
  std::string slice_h;
  int slice_samples = 512;
};

int cmd_box(const BoxOptions& o) {
  std::istringstream in(read_file(o.measure));
  DiscreteMeasure mu = [&] {
    try {
      return read_measure_csv(in);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }();
  BlochOp z;
  try {
    z = parse_bloch(o.z);
  } catch (const Error& e) {
    throw UsageError(std::string("--z: ") + e.what());
  }
  nlohmann::ordered_json j;
  j["atoms"] = mu.size();
  j["z"] = {z.n, z.r1, z.r3};
  const bool inside = box_contains(mu, z);
  j["contained"] = inside;
  if (inside) {
    const TwoStepFunction f = two_step_decompose(mu, z);
    const BlochOp back = apply(mu, f);
    j["two_step"] = {{"x_phi", f.x.phi}, {"y_phi", f.y.phi}, {"q", f.q}, {"fx", f.fx}, {"fy", f.fy}, {"full", f.full}};
    j["reconstruction_error"] = trace_norm(back - z);
  }
  if (!o.slice_h.empty()) {
    BlochOp h;
    try {
      h = parse_bloch(o.slice_h);
    } catch (const Error& e) {
      throw UsageError(std::string("--slice-h: ") + e.what());
    }
    j["slice_length"] = boundary_slice_curve(mu, h, o.slice_samples).length;
  }
  std::cout << j.dump(2) << '\n';
  return inside ? 0 : kExitCheckFailed;
}

// --- plot ------------------------------------------------------------------

struct PlotOptions {
  std::string in;
  std::string out;
};

int cmd_plot(const PlotOptions& o) {
  const std::string text = read_file(o.in);
  const bool tilt = text.substr(0, text.find('\n')).find("tilt_line") != std::string::npos;
  std::istringstream in(text);
  std::vector<BoundaryPoint> rows;
  try {
    rows = read_boundary_csv(in);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (rows.empty()) throw UsageError(o.in + " has no rows");
  write_output(o.out, render_svg(rows, tilt));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steerability of real two-qubit states under real projective measurements"};
  app.set_config("--config", "", "TOML-style file overriding option defaults");
  app.require_subcommand(1);
  app.fallthrough();

  double quad_tol = 1e-10;
  int bisect_iters = 40;
  int threads = 0;
  app.add_option("--quad-tol", quad_tol, "quadrature refinement tolerance")->capture_default_str();
  app.add_option("--bisect-iters", bisect_iters, "bisection steps per threshold")->capture_default_str();
  app.add_option("--threads", threads, "sweep workers (0 = hardware concurrency)")->capture_default_str();

  VerdictOptions vo;
  auto* verdict = app.add_subcommand("verdict", "decide one state and print its certificate");
  add_family_options(verdict, vo.fam);
  verdict->add_option("--Y", vo.y, "evaluate the criterion at this Y, given as n,r1,r3");

  SweepOptions bo;
  auto* boundary = app.add_subcommand("boundary", "bracket the steering threshold in eta over an alpha grid");
  boundary->add_option("--family", bo.family, "swept family")->capture_default_str();
  boundary->add_option("--alpha-min", bo.alpha_min, "first grid angle (default: alpha-max / steps)");
  boundary->add_option("--alpha-max", bo.alpha_max, "last grid angle")->capture_default_str();
  boundary->add_option("--alpha-steps", bo.alpha_steps, "number of grid angles")->capture_default_str();
  boundary->add_option("--out", bo.out, "CSV output path (default stdout)");

  SweepOptions dop;
  auto* depolarize = app.add_subcommand("depolarize", "bracket the threshold in eta_B for fixed eta_A");
  depolarize->add_option("--eta-a", dop.eta_a, "Alice's depolarizing parameter")->required();
  depolarize->add_option("--alpha-min", dop.alpha_min, "first grid angle (default: alpha-max / steps)");
  depolarize->add_option("--alpha-max", dop.alpha_max, "last grid angle")->capture_default_str();
  depolarize->add_option("--alpha-steps", dop.alpha_steps, "number of grid angles")->capture_default_str();
  depolarize->add_option("--out", dop.out, "CSV output path (default stdout)");

  LhsOptions lo;
  auto* lhs = app.add_subcommand("lhs", "build or verify a keyring hidden-state model");
  lhs->add_option("action", lo.action, "build or verify")->check(CLI::IsMember({"build", "verify"}))->required();
  add_family_options(lhs, lo.fam);
  lhs->add_option("--grid-n", lo.grid_n, "hidden-variable grid size")->capture_default_str();
  lhs->add_option("--model-path", lo.model_path, "model JSON file")->required();
  lhs->add_option("--tol", lo.tol, "accepted reproduction error")->capture_default_str();
  lhs->add_option("--n-theta", lo.n_theta, "measurement angles checked")->capture_default_str();

  BoxOptions xo;
  auto* box = app.add_subcommand("box", "zonotope membership and two-step decomposition");
  box->add_option("--measure", xo.measure, "CSV with phi,weight rows")->required();
  box->add_option("--z", xo.z, "target operator n,r1,r3")->required();
  box->add_option("--slice-h", xo.slice_h, "positive definite H for the boundary slice length");
  box->add_option("--slice-samples", xo.slice_samples, "samples per atom for the slice curve")->capture_default_str();

  PlotOptions po;
  auto* plot = app.add_subcommand("plot", "render a sweep CSV as SVG");
  plot->add_option("--in", po.in, "sweep CSV")->required();
  plot->add_option("--out", po.out, "SVG output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const SearchConfig cfg = make_search_config(quad_tol, bisect_iters, threads);
    if (*verdict) return cmd_verdict(vo, cfg);
    if (*boundary) return cmd_boundary(bo, cfg);
    if (*depolarize) return cmd_depolarize(dop, cfg);
    if (*lhs) return cmd_lhs(lo, cfg);
    if (*box) return cmd_box(xo);
    if (*plot) return cmd_plot(po);
  } catch (const UsageError& e) {
    std::cerr << "rpsteer: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "rpsteer: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "rpsteer: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
