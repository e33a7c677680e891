#include "rpsteer/criterion.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "rpsteer/errors.hpp"

namespace rpsteer {

std::string to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Unsteerable:
      return "Unsteerable";
    case VerdictKind::Steerable:
      return "Steerable";
    case VerdictKind::Inconclusive:
      break;
  }
  return "Inconclusive";
}

Verdict classify(const BlochOp& criterion, const BlochOp& y) {
  Verdict v;
  v.y = y;
  v.criterion_matrix = criterion;
  const EigenPair e = eig_bounds(criterion);
  v.min_eig = e.min_eig;
  v.max_eig = e.max_eig;
  if (e.min_eig >= -kTolPsd)
    v.kind = VerdictKind::Unsteerable;
  else if (e.max_eig <= kTolPsd && trace_norm(criterion) > kTolNonzero)
    v.kind = VerdictKind::Steerable;
  else
    v.kind = VerdictKind::Inconclusive;
  return v;
}

void check_criterion_preconditions(const EllipseFamily& fam, const BlochOp& y) {
  if (!(fam.tilt < 1.0 - kTolTilt)) throw TiltTooLarge("ellipse tilt is not below 1");
  const EigenPair e = eig_bounds(y);
  if (std::abs(det(y)) <= kTolDet || e.min_eig <= 0.0)
    throw SingularY("Y must be positive definite");
}

QuadResult steering_operator_detailed(const EllipseFamily& fam, const BlochOp& y,
                                      const Quadrature& q) {
  check_criterion_preconditions(fam, y);
  const auto& deriv = fam.derivative;
  return simpson_doubling([&](double t) { return abs_op(sandwich(y, deriv(t))); }, 0.0, kPi, q);
}

BlochOp steering_operator(const EllipseFamily& fam, const BlochOp& y, const Quadrature& q) {
  return steering_operator_detailed(fam, y, q).value;
}

BlochOp steering_operator_full(const EllipseFamily& fam, const BlochOp& y, const Quadrature& q) {
  check_criterion_preconditions(fam, y);
  const auto& deriv = fam.derivative;
  return simpson_doubling([&](double t) { return abs_op(sandwich(y, deriv(t))); }, 0.0, kTwoPi, q)
      .value;
}

BlochOp criterion_matrix(const EllipseFamily& fam, const BlochOp& y, const Quadrature& q) {
  return sandwich(y, fam.rho_b) - steering_operator(fam, y, q);
}

Verdict verdict_with(const EllipseFamily& fam, const BlochOp& y, const Quadrature& q) {
  const QuadResult s = steering_operator_detailed(fam, y, q);
  Verdict v = classify(sandwich(y, fam.rho_b) - s.value, y);
  v.panels = s.panels;
  return v;
}

BlochOp boundary_limit_probe(const EllipseFamily& fam, const RP1Point& p, double eps,
                             const Quadrature& q) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("probe: eps must lie in (0, 1)");
  const double shrink = 1.0 - 2.0 * eps;
  const BlochOp y{1.0, shrink * std::sin(p.phi), shrink * std::cos(p.phi)};
  check_criterion_preconditions(fam, y);
  const auto& deriv = fam.derivative;
  // |X(theta + pi)|_Y = |X(theta)|_Y, so [0, pi] carries half of the full integral.
  const BlochOp half = adaptive_simpson([&](double t) { return abs_op_conj(deriv(t), y); }, 0.0,
                                        kPi, q.refine_until, 64);
  return normalized(half);
}

namespace {

using Vec2 = std::array<double, 2>;

double norm2(const Vec2& v) { return std::hypot(v[0], v[1]); }

Vec2 direction_mismatch(const EllipseFamily& fam, const BlochOp& y, const Quadrature& q) {
  const BlochOp s = steering_operator(fam, y, q);
  const BlochOp b = sandwich(y, fam.rho_b);
  return {s.r1 / s.n - b.r1 / b.n, s.r3 / s.n - b.r3 / b.n};
}

constexpr double kDiscLimit = 1.0 - 1e-7;
constexpr double kNewtonTol = 1e-9;

struct NewtonOutcome {
  bool ok = false;
  Vec2 r{};
  double residual = 0.0;
  int iterations = 0;
};

// Damped Newton on G(r) - offset with a central-difference Jacobian.
template <typename G>
NewtonOutcome newton(const G& g, Vec2 r, const Vec2& offset, int max_iter) {
  auto shifted = [&](const Vec2& x) {
    const Vec2 v = g(x);
    return Vec2{v[0] - offset[0], v[1] - offset[1]};
  };
  NewtonOutcome out;
  Vec2 val = shifted(r);
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it;
    if (norm2(val) < kNewtonTol) {
      out.ok = true;
      out.r = r;
      out.residual = norm2(val);
      return out;
    }
    const double h = 1e-5;
    double jac[2][2];
    for (int k = 0; k < 2; ++k) {
      Vec2 rp = r;
      Vec2 rm = r;
      rp[k] += h;
      rm[k] -= h;
      const Vec2 gp = shifted(rp);
      const Vec2 gm = shifted(rm);
      jac[0][k] = (gp[0] - gm[0]) / (2.0 * h);
      jac[1][k] = (gp[1] - gm[1]) / (2.0 * h);
    }
    const double dj = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    if (!std::isfinite(dj) || std::abs(dj) < 1e-14) break;
    const Vec2 step{-(jac[1][1] * val[0] - jac[0][1] * val[1]) / dj,
                    -(-jac[1][0] * val[0] + jac[0][0] * val[1]) / dj};
    double damping = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls, damping *= 0.5) {
      const Vec2 trial{r[0] + damping * step[0], r[1] + damping * step[1]};
      if (norm2(trial) >= kDiscLimit) continue;
      const Vec2 tv = shifted(trial);
      if (norm2(tv) < norm2(val)) {
        r = trial;
        val = tv;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  out.r = r;
  out.residual = norm2(val);
  out.ok = out.residual < kNewtonTol;
  return out;
}

}  // namespace

double proportionality_residual(const EllipseFamily& fam, const BlochOp& y, const Quadrature& q) {
  return norm2(direction_mismatch(fam, y, q));
}

ProportionalY find_proportional_y_detailed(const EllipseFamily& fam, const Quadrature& q) {
  check_criterion_preconditions(fam, BlochOp::identity());
  auto g = [&](const Vec2& r) {
    try {
      return direction_mismatch(fam, BlochOp{1.0, r[0], r[1]}, q);
    } catch (const Error&) {
      // Unresolvable integrand or stencil outside the disc: reject the point.
      const double inf = std::numeric_limits<double>::infinity();
      return Vec2{inf, inf};
    }
  };

  // Direct Newton from the maximally mixed Y first.
  NewtonOutcome direct = newton(g, Vec2{0.0, 0.0}, Vec2{0.0, 0.0}, 60);
  if (direct.ok) return {BlochOp{1.0, direct.r[0], direct.r[1]}, direct.residual, direct.iterations};

  // Continuation between r -> -r and the normalized map
  //     M(r) = < integral_0^{2 pi} |X|_Y dtheta >,
  // whose continuous extension sends each boundary point of the disc to its
  // antipode.  The two agree on the boundary, so solutions of
  // t M(r) - (1 - t) r = <rho_B> stay inside the disc for all t.
  const double inf = std::numeric_limits<double>::infinity();
  const Vec2 target{fam.rho_b.r1 / fam.rho_b.n, fam.rho_b.r3 / fam.rho_b.n};
  auto m_map = [&](const Vec2& r) {
    try {
      const BlochOp y{1.0, r[0], r[1]};
      const BlochOp m = sandwich(inverse(y), steering_operator(fam, y, q));
      return Vec2{m.r1 / m.n, m.r3 / m.n};
    } catch (const Error&) {
      return Vec2{inf, inf};
    }
  };
  Vec2 r{-target[0], -target[1]};
  double t = 0.0;
  double dt = 0.25;
  int total = direct.iterations;
  while (t < 1.0) {
    const double next = std::min(1.0, t + dt);
    auto h = [&](const Vec2& x) {
      const Vec2 m = m_map(x);
      return Vec2{next * m[0] - (1.0 - next) * x[0], next * m[1] - (1.0 - next) * x[1]};
    };
    const NewtonOutcome step = newton(h, r, target, 40);
    total += step.iterations;
    if (step.ok) {
      r = step.r;
      t = next;
      dt = std::min(0.5, 1.5 * dt);
    } else {
      dt *= 0.5;
      if (dt < 1e-6) throw NoConvergence("find_proportional_y: continuation stalled");
    }
  }
  // Polish on the proportionality residual itself.
  const NewtonOutcome polish = newton(g, r, Vec2{0.0, 0.0}, 20);
  total += polish.iterations;
  if (polish.ok) r = polish.r;
  const double res = norm2(g(r));
  return {BlochOp{1.0, r[0], r[1]}, res, total};
}

BlochOp find_proportional_y(const EllipseFamily& fam, const Quadrature& q) {
  return find_proportional_y_detailed(fam, q).y;
}

Verdict decide(const EllipseFamily& fam, const Quadrature& q) {
  return verdict_with(fam, find_proportional_y(fam, q), q);
}

}  // namespace rpsteer
