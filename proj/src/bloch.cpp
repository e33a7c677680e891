#include "rpsteer/bloch.hpp"

#include <algorithm>
#include <ostream>

#include "rpsteer/errors.hpp"

namespace rpsteer {

namespace {

// Applies a scalar function to the eigenvalues of x.  With eigenvalues
// (n +/- rho)/2 and unit direction u = r/rho, f(X) has Bloch coordinates
// (f+ + f-, (f+ - f-) u).
template <typename F>
BlochOp spectral_map(const BlochOp& x, F&& f) {
  const double rho = x.radius();
  const double fp = f(0.5 * (x.n + rho));
  const double fm = f(0.5 * (x.n - rho));
  if (rho == 0.0) return {fp + fm, 0.0, 0.0};
  const double s = (fp - fm) / rho;
  return {fp + fm, s * x.r1, s * x.r3};
}

}  // namespace

std::ostream& operator<<(std::ostream& os, const BlochOp& x) {
  return os << "(" << x.n << ", " << x.r1 << ", " << x.r3 << ")";
}

EigenPair eig_bounds(const BlochOp& x) {
  const double rho = x.radius();
  return {0.5 * (x.n - rho), 0.5 * (x.n + rho)};
}

double tilt(const BlochOp& x) {
  if (x.n == 0.0) return std::numeric_limits<double>::infinity();
  return x.radius() / std::abs(x.n);
}

double trace_norm(const BlochOp& x) { return std::max(std::abs(x.n), x.radius()); }

bool is_indefinite(const BlochOp& x) { return x.radius() > std::abs(x.n); }

BlochOp abs_op(const BlochOp& x) {
  const double rho = x.radius();
  if (rho <= std::abs(x.n)) return x.n >= 0.0 ? x : -x;
  // (X^2 - X adj(X)) / ||X||_1 with ||X||_1 = rho for indefinite X.
  if (rho < 1e-14) return spectral_map(x, [](double v) { return std::abs(v); });
  return {rho, x.n * x.r1 / rho, x.n * x.r3 / rho};
}

BlochOp abs_op_conj(const BlochOp& x, const BlochOp& y) {
  const double dy = det(y);
  if (std::abs(dy) <= kTolDet) throw SingularY("abs_op_conj: |det Y| below tolerance");
  const BlochOp yxy = sandwich(y, x);
  if (is_indefinite(x)) {
    const double denom = trace_norm(yxy);
    if (denom >= 1e-14) {
      const BlochOp yh = adjugate(y);
      return (sandwich(x, square(y)) - det(x) * square(yh)) / denom;
    }
  }
  return sandwich(adjugate(y) / dy, abs_op(yxy));
}

BlochOp pos_part(const BlochOp& x) { return 0.5 * (abs_op(x) + x); }

BlochOp neg_part(const BlochOp& x) { return 0.5 * (abs_op(x) - x); }

BlochOp inverse(const BlochOp& x) {
  const double d = det(x);
  if (std::abs(d) <= kTolDet) throw SingularY("inverse: |det| below tolerance");
  return adjugate(x) / d;
}

BlochOp sqrt_psd(const BlochOp& x) {
  return spectral_map(x, [](double v) { return std::sqrt(std::max(v, 0.0)); });
}

bool is_psd(const BlochOp& x, double tol) { return eig_bounds(x).min_eig >= -tol; }

BlochOp normalized(const BlochOp& x) { return x / x.n; }

double max_abs_diff(const BlochOp& a, const BlochOp& b) {
  return std::max({std::abs(a.n - b.n), std::abs(a.r1 - b.r1), std::abs(a.r3 - b.r3)});
}

bool approx_equal(const BlochOp& a, const BlochOp& b, double tol) {
  return max_abs_diff(a, b) <= tol;
}

double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

RP1Point::RP1Point(double angle) : phi(wrap_angle(angle)) {}

double clockwise_distance(const RP1Point& a, const RP1Point& b) { return wrap_angle(b.phi - a.phi); }

bool in_open_arc(const RP1Point& x, const RP1Point& y, const RP1Point& z) {
  const double span = clockwise_distance(x, y);
  const double d = clockwise_distance(x, z);
  return d > 0.0 && d < span;
}

}  // namespace rpsteer
