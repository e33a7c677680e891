#include "rpsteer/states.hpp"

#include <Eigen/Eigenvalues>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "rpsteer/errors.hpp"

namespace rpsteer {

namespace {

Eigen::Matrix2d to_eigen(const BlochOp& x) {
  const auto [a, b, d] = x.matrix();
  Eigen::Matrix2d m;
  m << a, b, b, d;
  return m;
}

Eigen::Matrix4d kron(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
  Eigen::Matrix4d out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Eigen::Matrix4d projector(const Eigen::Vector4d& v) { return v * v.transpose(); }

Eigen::Vector4d phi_alpha(double alpha) {
  return Eigen::Vector4d(std::cos(alpha), 0.0, 0.0, std::sin(alpha));
}

void check_unit(const char* what, double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= kPi / 4.0 + 1e-15))
    throw DomainError("alpha must lie in [0, pi/4]");
}

}  // namespace

TwoQubitRealState::TwoQubitRealState(const Eigen::Matrix4d& rho) : rho_(rho) {
  if (!rho.allFinite()) throw InvalidState("state has non-finite entries");
  if (std::abs(rho.trace() - 1.0) > 1e-12) throw InvalidState("state trace differs from 1");
  if ((rho - rho.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw InvalidState("state is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(0.5 * (rho + rho.transpose()),
                                                    Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) throw InvalidState("state is not positive semidefinite");
}

BlochOp TwoQubitRealState::conditional_b(const BlochOp& alice_op) const {
  const auto [a00, a01, a11] = alice_op.matrix();
  const double am[2][2] = {{a00, a01}, {a01, a11}};
  double out[2][2] = {{0, 0}, {0, 0}};
  for (int b = 0; b < 2; ++b)
    for (int bp = 0; bp < 2; ++bp)
      for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap) out[b][bp] += am[a][ap] * rho_(2 * ap + b, 2 * a + bp);
  return BlochOp::from_matrix(out[0][0], 0.5 * (out[0][1] + out[1][0]), out[1][1]);
}

BlochOp TwoQubitRealState::marginal_b() const { return conditional_b(BlochOp::identity()); }

TwoQubitRealState parse_state(std::string_view text) {
  std::vector<double> values;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != ',')
      ++j;
    const std::string token(text.substr(i, j - i));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw InvalidState("cannot parse state entry '" + token + "'");
    values.push_back(v);
    i = j;
  }
  if (values.size() != 16)
    throw InvalidState("expected 16 state entries, got " + std::to_string(values.size()));
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = values[4 * r + c];
  return TwoQubitRealState(m);
}

TwoQubitRealState werner_state(double eta) {
  check_unit("eta", eta);
  return pure_mixed_state(kPi / 4.0, eta);
}

TwoQubitRealState pure_mixed_state(double alpha, double eta) {
  check_alpha(alpha);
  check_unit("eta", eta);
  Eigen::Matrix4d rho = eta * projector(phi_alpha(alpha)) +
                        (1.0 - eta) * 0.25 * Eigen::Matrix4d::Identity();
  return TwoQubitRealState(rho);
}

TwoQubitRealState depolarized_state(double alpha, double eta_a, double eta_b) {
  check_alpha(alpha);
  check_unit("eta_a", eta_a);
  check_unit("eta_b", eta_b);
  const Eigen::Matrix4d psi = projector(phi_alpha(alpha));
  // Marginals of |phi_a><phi_a| are both diag(cos^2 a, sin^2 a).
  Eigen::Matrix2d marg = Eigen::Matrix2d::Zero();
  marg(0, 0) = std::cos(alpha) * std::cos(alpha);
  marg(1, 1) = std::sin(alpha) * std::sin(alpha);
  const Eigen::Matrix2d half_id = 0.5 * Eigen::Matrix2d::Identity();
  Eigen::Matrix4d rho = eta_a * eta_b * psi + eta_a * (1.0 - eta_b) * kron(marg, half_id) +
                        (1.0 - eta_a) * eta_b * kron(half_id, marg) +
                        (1.0 - eta_a) * (1.0 - eta_b) * kron(half_id, half_id);
  return TwoQubitRealState(rho);
}

TwoQubitRealState conjugate_state(const TwoQubitRealState& rho, const BlochOp& y) {
  if (std::abs(det(y)) <= kTolDet) throw SingularY("conjugate_state: singular Y");
  const Eigen::Matrix4d k = kron(Eigen::Matrix2d::Identity(), to_eigen(y));
  Eigen::Matrix4d out = k * rho.matrix() * k;
  out /= out.trace();
  out = 0.5 * (out + out.transpose()).eval();
  return TwoQubitRealState(out);
}

BlochOp alice_projector_derivative(double theta) {
  return {0.0, std::cos(theta), -std::sin(theta)};
}

std::pair<double, std::optional<BlochOp>> plane_tilt(const BlochOp& p0, const BlochOp& p1,
                                                     const BlochOp& p2) {
  const BlochOp u = p1 - p0;
  const BlochOp v = p2 - p0;
  const BlochOp normal{u.r1 * v.r3 - u.r3 * v.r1, u.r3 * v.n - u.n * v.r3, u.n * v.r1 - u.r1 * v.n};
  const double size = std::sqrt(normal.n * normal.n + normal.r1 * normal.r1 + normal.r3 * normal.r3);
  if (size < 1e-10) return {std::numeric_limits<double>::infinity(), std::nullopt};
  return {tilt(normal), normal};
}

EllipseFamily werner(double eta) {
  check_unit("eta", eta);
  EllipseFamily f;
  f.name = "werner";
  f.params = {{"eta", eta}};
  f.point = [eta](double t) { return BlochOp{0.5, 0.5 * eta * std::sin(t), 0.5 * eta * std::cos(t)}; };
  f.derivative = [eta](double t) {
    return BlochOp{0.0, 0.5 * eta * std::cos(t), -0.5 * eta * std::sin(t)};
  };
  f.rho_b = BlochOp{1.0, 0.0, 0.0};
  f.tilt = 0.0;
  f.normal = BlochOp::identity();
  f.state = werner_state(eta);
  return f;
}

EllipseFamily pure_mixed(double alpha, double eta) {
  check_alpha(alpha);
  check_unit("eta", eta);
  const double c2 = std::cos(alpha) * std::cos(alpha);
  const double s2 = std::sin(alpha) * std::sin(alpha);
  const double cs = std::cos(alpha) * std::sin(alpha);
  EllipseFamily f;
  f.name = "pure-mixed";
  f.params = {{"alpha", alpha}, {"eta", eta}};
  f.point = [=](double t) {
    const double ch = std::cos(0.5 * t);
    const double sh = std::sin(0.5 * t);
    const double a = eta * c2 * ch * ch - 0.25 * eta + 0.25;
    const double d = eta * s2 * sh * sh - 0.25 * eta + 0.25;
    const double b = 0.5 * eta * cs * std::sin(t);
    return BlochOp::from_matrix(a, b, d);
  };
  f.derivative = [=](double t) {
    const double st = std::sin(t);
    return BlochOp::from_matrix(-0.5 * eta * c2 * st, 0.5 * eta * cs * std::cos(t),
                                0.5 * eta * s2 * st);
  };
  f.rho_b = BlochOp{1.0, 0.0, eta * std::cos(2.0 * alpha)};
  f.tilt = std::cos(2.0 * alpha);
  f.normal = BlochOp::from_matrix(s2, 0.0, c2);
  f.state = pure_mixed_state(alpha, eta);
  return f;
}

EllipseFamily depolarized(double alpha, double eta_a, double eta_b) {
  check_alpha(alpha);
  check_unit("eta_a", eta_a);
  check_unit("eta_b", eta_b);
  const double c = std::cos(2.0 * alpha);
  const double s = std::sin(2.0 * alpha);
  EllipseFamily f;
  f.name = "depolarized";
  f.params = {{"alpha", alpha}, {"eta_a", eta_a}, {"eta_b", eta_b}};
  f.point = [=](double t) {
    const double ct = std::cos(t);
    return BlochOp{0.5 * (1.0 + eta_a * c * ct), 0.5 * eta_a * eta_b * s * std::sin(t),
                   0.5 * eta_b * (eta_a * ct + c)};
  };
  f.derivative = [=](double t) {
    const double st = std::sin(t);
    return BlochOp{-0.5 * eta_a * c * st, 0.5 * eta_a * eta_b * s * std::cos(t),
                   -0.5 * eta_a * eta_b * st};
  };
  f.rho_b = BlochOp{1.0, 0.0, eta_b * c};
  if (eta_b > 0.0) {
    f.normal = BlochOp::from_matrix((eta_b - c) / (2.0 * eta_b), 0.0, (eta_b + c) / (2.0 * eta_b));
    f.tilt = c / eta_b;
  } else {
    f.tilt = std::numeric_limits<double>::infinity();
  }
  f.state = depolarized_state(alpha, eta_a, eta_b);
  return f;
}

EllipseFamily ellipse_from_state(const TwoQubitRealState& rho) {
  EllipseFamily f;
  f.name = "state";
  f.state = rho;
  const TwoQubitRealState st = rho;
  f.point = [st](double t) { return st.conditional_b(RP1Point(t).op()); };
  f.derivative = [st](double t) { return st.conditional_b(alice_projector_derivative(t)); };
  f.rho_b = rho.marginal_b();
  auto [t, normal] =
      plane_tilt(f.point(0.0), f.point(kTwoPi / 3.0), f.point(2.0 * kTwoPi / 3.0));
  f.tilt = t;
  f.normal = normal;
  return f;
}

EllipseFamily conjugate(const EllipseFamily& fam, const BlochOp& y) {
  if (std::abs(det(y)) <= kTolDet) throw SingularY("conjugate: singular Y");
  const double z = trace(sandwich(y, fam.rho_b));
  EllipseFamily f;
  f.name = fam.name;
  f.params = fam.params;
  f.params.emplace_back("Y_n", y.n);
  f.params.emplace_back("Y_r1", y.r1);
  f.params.emplace_back("Y_r3", y.r3);
  auto point = fam.point;
  auto deriv = fam.derivative;
  f.point = [point, y, z](double t) { return sandwich(y, point(t)) / z; };
  f.derivative = [deriv, y, z](double t) { return sandwich(y, deriv(t)) / z; };
  f.rho_b = sandwich(y, fam.rho_b) / z;
  if (fam.normal) {
    f.normal = sandwich(inverse(y), *fam.normal);
    f.tilt = tilt(*f.normal);
  } else {
    auto [t, normal] =
        plane_tilt(f.point(0.0), f.point(kTwoPi / 3.0), f.point(2.0 * kTwoPi / 3.0));
    f.tilt = t;
    f.normal = normal;
  }
  if (fam.state) f.state = conjugate_state(*fam.state, y);
  return f;
}

}  // namespace rpsteer
