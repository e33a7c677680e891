#include "rpsteer/keyring.hpp"

#include <cmath>
#include <istream>
#include <json.hpp>
#include <optional>
#include <ostream>

#include "rpsteer/criterion.hpp"
#include "rpsteer/errors.hpp"
#include "rpsteer/search.hpp"

namespace rpsteer {

namespace {

std::vector<double> uniform_grid(int n) {
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = kTwoPi * j / n;
  return out;
}

// rho' = integral_0^pi |X| dtheta, without the tilt precondition of the criterion.
BlochOp half_period_abs_integral(const EllipseFamily& fam, const Quadrature& q) {
  return simpson_doubling([&](double t) { return abs_op(fam.derivative(t)); }, 0.0, kPi, q).value;
}

}  // namespace

double KeyringModel::response(double theta, double lambda) {
  return wrap_angle(lambda - theta) < kPi ? 0.0 : 1.0;
}

BlochOp KeyringModel::mass() const {
  BlochOp s = BlochOp::zero();
  for (const auto& v : sigma) s += v;
  return (kTwoPi / grid_n) * s;
}

BlochOp KeyringModel::reproduce(double theta) const {
  const double h = kTwoPi / grid_n;
  // Primitive of the periodic piecewise-linear interpolant, P(0) = 0.
  std::vector<BlochOp> cell(grid_n + 1, BlochOp::zero());
  for (int j = 0; j < grid_n; ++j) cell[j + 1] = cell[j] + (0.5 * h) * (sigma[j] + sigma[(j + 1) % grid_n]);
  const BlochOp total = cell[grid_n];
  auto primitive = [&](double x) {
    const double turns = std::floor(x / kTwoPi);
    const double r = x - turns * kTwoPi;
    int j = static_cast<int>(r / h);
    if (j >= grid_n) j = grid_n - 1;
    const double d = r - j * h;
    const BlochOp& a = sigma[j];
    const BlochOp& b = sigma[(j + 1) % grid_n];
    return turns * total + cell[j] + d * a + (d * d / (2.0 * h)) * (b - a);
  };
  const double start = theta + kPi;
  return primitive(start + kPi) - primitive(start);
}

KeyringModel construct_case1(const EllipseFamily& fam, int grid_n, const Quadrature& q) {
  if (grid_n < 4) throw DomainError("construct_case1: grid_n must be at least 4");
  const BlochOp rho_prime = half_period_abs_integral(fam, q);
  const BlochOp slack = fam.rho_b - rho_prime;
  if (eig_bounds(slack).min_eig < -kTolPsd)
    throw PreconditionFailed("construct_case1: rho_B - integral |X| is not positive semidefinite");
  const BlochOp noise = slack / kTwoPi;
  const auto derivative = fam.derivative;

  KeyringModel m;
  m.grid_n = grid_n;
  m.lambda = uniform_grid(grid_n);
  m.density = [derivative, noise](double l) { return pos_part(derivative(l)) + noise; };
  m.sigma.reserve(grid_n);
  for (double l : m.lambda) m.sigma.push_back(m.density(l));
  return m;
}

KeyringModel transform_model(const KeyringModel& model, const BlochOp& y) {
  if (!(eig_bounds(y).min_eig > 0.0) || std::abs(det(y)) <= kTolDet)
    throw SingularY("transform_model: Y must be positive definite");
  const BlochOp yinv = inverse(y);
  KeyringModel out;
  out.grid_n = model.grid_n;
  out.lambda = model.lambda;
  for (const auto& s : model.sigma) out.sigma.push_back(sandwich(yinv, s));
  const double scale = 1.0 / trace(out.mass());
  for (auto& s : out.sigma) s = scale * s;
  if (model.density) {
    const auto inner_density = model.density;
    out.density = [inner_density, yinv, scale](double l) { return scale * sandwich(yinv, inner_density(l)); };
  }
  return out;
}

KeyringModel build_model(const EllipseFamily& fam, int grid_n, const Quadrature& q) {
  try {
    return construct_case1(fam, grid_n, q);
  } catch (const PreconditionFailed&) {
  }
  if (!(fam.tilt < 1.0 - kTolTilt))
    throw PreconditionFailed("build_model: ellipse tilt is not below 1 and Y = I does not certify");
  std::optional<BlochOp> certificate;
  try {
    const BlochOp y = find_proportional_y(fam, q);
    if (verdict_with(fam, y, q).kind == VerdictKind::Unsteerable) certificate = y;
  } catch (const Error&) {
  }
  if (!certificate) {
    SearchConfig cfg;
    cfg.quad = q;
    const auto r = maximize_min_eig(fam, cfg);
    if (r.verdict.kind == VerdictKind::Unsteerable) certificate = r.y;
  }
  if (!certificate) throw PreconditionFailed("build_model: no unsteerability certificate found");
  return transform_model(construct_case1(conjugate(fam, *certificate), grid_n, q), *certificate);
}

double verify_model(const KeyringModel& model, const EllipseFamily& fam, const std::vector<double>& thetas) {
  double worst = 0.0;
  for (double t : thetas) worst = std::max(worst, trace_norm(model.reproduce(t) - fam.point(t)));
  return worst;
}

double verify_model(const KeyringModel& model, const EllipseFamily& fam, int n_theta) {
  std::vector<double> thetas(n_theta);
  // Offset so that the angles do not coincide with grid points.
  for (int k = 0; k < n_theta; ++k) thetas[k] = kTwoPi * (k + 0.37) / n_theta;
  return verify_model(model, fam, thetas);
}

double circumference(const EllipseFamily& fam, double tol) {
  return adaptive_simpson([&](double t) { return trace_norm(fam.derivative(t)); }, 0.0, kTwoPi, tol);
}

void write_model_json(std::ostream& os, const KeyringModel& model) {
  nlohmann::json j;
  j["grid_n"] = model.grid_n;
  j["lambda"] = model.lambda;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : model.sigma) rows.push_back({s.n, s.r1, s.r3});
  j["sigma_bloch"] = rows;
  j["theta_switch_convention"] = kSwitchConvention;
  os << j.dump(1) << '\n';
}

KeyringModel read_model_json(std::istream& is) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("model json: ") + e.what());
  }
  KeyringModel m;
  try {
    m.grid_n = j.at("grid_n").get<int>();
    m.lambda = j.at("lambda").get<std::vector<double>>();
    for (const auto& row : j.at("sigma_bloch")) {
      const auto v = row.get<std::vector<double>>();
      if (v.size() != 3) throw DomainError("model json: sigma rows need 3 entries");
      m.sigma.push_back({v[0], v[1], v[2]});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("model json: ") + e.what());
  }
  if (m.grid_n < 4 || static_cast<int>(m.lambda.size()) != m.grid_n ||
      static_cast<int>(m.sigma.size()) != m.grid_n)
    throw DomainError("model json: grid size mismatch");
  for (int k = 0; k < m.grid_n; ++k)
    if (std::abs(m.lambda[k] - kTwoPi * k / m.grid_n) > 1e-9) throw DomainError("model json: lambda grid is not uniform");
  return m;
}

}  // namespace rpsteer
