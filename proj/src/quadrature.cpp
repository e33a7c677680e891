#include "rpsteer/quadrature.hpp"

#include <cmath>
#include <string>

#include "rpsteer/errors.hpp"

namespace rpsteer {

void Quadrature::validate() const {
  if (n_panels < 2 || n_panels % 2 != 0) throw DomainError("quadrature: n_panels must be even and >= 2");
  if (!(refine_until > 0.0)) throw DomainError("quadrature: refine_until must be positive");
  if (max_panels < n_panels) throw DomainError("quadrature: max_panels below n_panels");
}

QuadResult simpson_doubling(const OpIntegrand& f, double a, double b, const Quadrature& q) {
  q.validate();
  int n = q.n_panels;
  double h = (b - a) / n;
  const BlochOp ends = f(a) + f(b);
  BlochOp odd;
  BlochOp even;
  for (int i = 1; i < n; ++i) {
    if (i % 2 == 1)
      odd += f(a + i * h);
    else
      even += f(a + i * h);
  }
  BlochOp prev = (h / 3.0) * (ends + 4.0 * odd + 2.0 * even);
  BlochOp interior = odd + even;
  while (true) {
    const int next = 2 * n;
    if (next > q.max_panels)
      throw QuadratureDiverged("simpson: no convergence within " + std::to_string(q.max_panels) +
                               " panels");
    const double hn = 0.5 * h;
    BlochOp mids;
    for (int i = 0; i < n; ++i) mids += f(a + (2 * i + 1) * hn);
    const BlochOp cur = (hn / 3.0) * (ends + 2.0 * interior + 4.0 * mids);
    interior += mids;
    n = next;
    h = hn;
    if (trace_norm(cur - prev) < q.refine_until) return {cur, n};
    prev = cur;
  }
}

namespace {

double size_of(double v) { return std::abs(v); }
double size_of(const BlochOp& v) { return trace_norm(v); }

template <typename T, typename F>
T adaptive_step(const F& f, double a, double b, const T& fa, const T& fm, const T& fb, const T& whole,
                double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const T flm = f(lm);
  const T frm = f(rm);
  const T left = ((m - a) / 6.0) * (fa + 4.0 * flm + fm);
  const T right = ((b - m) / 6.0) * (fm + 4.0 * frm + fb);
  const T diff = left + right - whole;
  if (depth <= 0 || size_of(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return adaptive_step<T>(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step<T>(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename T, typename F>
T adaptive(const F& f, double a, double b, double tol, int segments, int max_depth) {
  if (segments < 1) segments = 1;
  const double w = (b - a) / segments;
  T total{};
  T fa = f(a);
  for (int s = 0; s < segments; ++s) {
    const double lo = a + s * w;
    const double hi = (s + 1 == segments) ? b : a + (s + 1) * w;
    const double mid = 0.5 * (lo + hi);
    const T fm = f(mid);
    const T fb = f(hi);
    const T whole = ((hi - lo) / 6.0) * (fa + 4.0 * fm + fb);
    total = total + adaptive_step<T>(f, lo, hi, fa, fm, fb, whole, tol / segments, max_depth);
    fa = fb;
  }
  return total;
}

}  // namespace

BlochOp adaptive_simpson(const OpIntegrand& f, double a, double b, double tol, int segments,
                         int max_depth) {
  return adaptive<BlochOp>(f, a, b, tol, segments, max_depth);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int segments, int max_depth) {
  return adaptive<double>(f, a, b, tol, segments, max_depth);
}

}  // namespace rpsteer
