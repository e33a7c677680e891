#include "rpsteer/zonotope.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>
#include <string>

#include "rpsteer/errors.hpp"

namespace rpsteer {

namespace {

using Vec3 = std::array<double, 3>;

constexpr double kSamePoint = 1e-12;
constexpr double kBoxTol = 1e-12;

Vec3 vec(const BlochOp& x) { return {x.n, x.r1, x.r3}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
Vec3 scaled(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

bool same_point(const RP1Point& a, const RP1Point& b) {
  return std::min(clockwise_distance(a, b), clockwise_distance(b, a)) < kSamePoint;
}

// Outward normals covering every facet of the zonotope.  Lower-dimensional
// boxes get the normals of their affine hull as well.
std::vector<Vec3> facet_normals(const std::vector<Vec3>& gens) {
  std::vector<Vec3> out;
  auto push = [&](const Vec3& u) {
    const double l = norm(u);
    if (l < 1e-14) return;
    out.push_back(scaled(u, 1.0 / l));
    out.push_back(scaled(u, -1.0 / l));
  };
  const std::size_t n = gens.size();
  if (n >= 3) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) push(cross(gens[i], gens[j]));
  } else if (n == 2) {
    const Vec3 p = cross(gens[0], gens[1]);
    push(p);
    push(cross(p, gens[0]));
    push(cross(p, gens[1]));
  } else if (n == 1) {
    const Vec3& d = gens[0];
    const Vec3 e = std::abs(d[0]) < 0.9 * norm(d) ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 e1 = cross(d, e);
    push(e1);
    push(cross(d, e1));
    push(d);
  }
  return out;
}

double support(const std::vector<Vec3>& gens, const Vec3& u) {
  double h = 0.0;
  for (const auto& g : gens) h += std::max(0.0, dot(u, g));
  return h;
}

std::vector<Vec3> generator_vecs(const DiscreteMeasure& mu) {
  std::vector<Vec3> out;
  for (const auto& g : mu.generators()) out.push_back(vec(g));
  return out;
}

// Smallest support slack h(u) - <u, z> and the normal attaining it.
std::pair<double, Vec3> tightest_facet(const std::vector<Vec3>& gens, const std::vector<Vec3>& normals,
                                       const Vec3& z) {
  double best = std::numeric_limits<double>::infinity();
  Vec3 arg{0, 0, 0};
  for (const auto& u : normals) {
    const double slack = support(gens, u) - dot(u, z);
    if (slack < best) {
      best = slack;
      arg = u;
    }
  }
  return {best, arg};
}

// Least-squares coefficients of r in the span of one or two generators, clamped to [0,1].
std::vector<double> fit_coefficients(const std::vector<Vec3>& basis, const Vec3& r) {
  if (basis.empty()) return {};
  if (basis.size() == 1) {
    const double a = dot(basis[0], r) / dot(basis[0], basis[0]);
    return {std::clamp(a, 0.0, 1.0)};
  }
  const double g00 = dot(basis[0], basis[0]);
  const double g01 = dot(basis[0], basis[1]);
  const double g11 = dot(basis[1], basis[1]);
  const double b0 = dot(basis[0], r);
  const double b1 = dot(basis[1], r);
  const double d = g00 * g11 - g01 * g01;
  double a0 = (g11 * b0 - g01 * b1) / d;
  double a1 = (g00 * b1 - g01 * b0) / d;
  return {std::clamp(a0, 0.0, 1.0), std::clamp(a1, 0.0, 1.0)};
}

// Zero-bias two-step function computing a boundary point b with supporting
// functional u: 1 where <s, u> > 0, 0 where < 0, fitted values at the zeros.
TwoStepFunction decompose_boundary(const DiscreteMeasure& mu, const std::vector<Vec3>& gens,
                                   const Vec3& u, const Vec3& b) {
  const auto& atoms = mu.atoms();
  Vec3 rest = b;
  std::vector<std::size_t> zeros;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double s = dot(u, gens[i]);
    if (std::abs(s) <= 1e-12 * norm(gens[i])) {
      zeros.push_back(i);
    } else if (s > 0) {
      for (int k = 0; k < 3; ++k) rest[k] -= gens[i][k];
    }
  }
  std::vector<Vec3> basis;
  for (auto i : zeros) basis.push_back(gens[i]);
  const std::vector<double> coef = fit_coefficients(basis, rest);

  TwoStepFunction f;
  f.q = 0.0;
  // <s(phi), u> = u_n + u_1 sin(phi) + u_3 cos(phi) = u_n + R sin(phi + delta).
  const double radius = std::hypot(u[1], u[2]);
  const double delta = std::atan2(u[2], u[1]);
  if (std::abs(u[0]) >= radius * (1.0 - 1e-12)) {
    // Semidefinite functional: at most one zero on the circle.
    f.full = u[0] > 0.0;
    const RP1Point p = zeros.empty() ? RP1Point(0.5 * kPi * (u[0] > 0 ? -1.0 : 1.0) - delta)
                                     : atoms[zeros[0]].point;
    f.x = f.y = p;
    f.fx = f.fy = zeros.empty() ? (f.full ? 1.0 : 0.0) : coef[0];
    return f;
  }
  const double base = std::asin(std::clamp(-u[0] / radius, -1.0, 1.0));
  RP1Point z1(base - delta);
  RP1Point z2(kPi - base - delta);
  const double mid = z1.phi + 0.5 * clockwise_distance(z1, z2);
  if (u[0] + radius * std::sin(mid + delta) < 0.0) std::swap(z1, z2);
  f.x = z1;
  f.y = z2;
  f.fx = 1.0;
  f.fy = 1.0;
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    const RP1Point& p = atoms[zeros[k]].point;
    const double dx = std::min(clockwise_distance(p, f.x), clockwise_distance(f.x, p));
    const double dy = std::min(clockwise_distance(p, f.y), clockwise_distance(f.y, p));
    if (dx <= dy) {
      f.x = p;
      f.fx = coef[k];
    } else {
      f.y = p;
      f.fy = coef[k];
    }
  }
  return f;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms, bool normalize) {
  double total = 0.0;
  for (const auto& a : atoms) {
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw DomainError("measure: weights must be positive and finite");
    total += a.weight;
  }
  if (atoms.empty()) throw DomainError("measure: no atoms");
  if (normalize) {
    for (auto& a : atoms) a.weight /= total;
  } else if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("measure: weights must sum to 1");
  }
  const RP1Point origin(0.0);
  std::sort(atoms.begin(), atoms.end(), [&](const Atom& a, const Atom& b) {
    return clockwise_distance(origin, a.point) < clockwise_distance(origin, b.point);
  });
  for (const auto& a : atoms) {
    if (!atoms_.empty() && same_point(atoms_.back().point, a.point)) {
      atoms_.back().weight += a.weight;
    } else {
      atoms_.push_back(a);
    }
  }
  if (atoms_.size() > 1 && same_point(atoms_.front().point, atoms_.back().point)) {
    atoms_.front().weight += atoms_.back().weight;
    atoms_.pop_back();
  }
}

std::vector<BlochOp> DiscreteMeasure::generators() const {
  std::vector<BlochOp> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back(a.weight * a.point.op());
  return out;
}

BlochOp DiscreteMeasure::mean() const {
  BlochOp s = BlochOp::zero();
  for (const auto& g : generators()) s += g;
  return s;
}

DiscreteMeasure read_measure_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DomainError("measure csv: empty input");
  std::vector<Atom> atoms;
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("measure csv: row " + std::to_string(row) + " needs phi,weight");
    try {
      atoms.push_back({RP1Point(std::stod(line.substr(0, comma))), std::stod(line.substr(comma + 1))});
    } catch (const std::logic_error&) {
      throw DomainError("measure csv: bad number on row " + std::to_string(row));
    }
  }
  return DiscreteMeasure(std::move(atoms), true);
}

double TwoStepFunction::operator()(const RP1Point& z) const {
  if (same_point(z, x)) return fx;
  if (same_point(z, y)) return fy;
  if (same_point(x, y)) return full ? 1.0 - q : q;
  return in_open_arc(x, y, z) ? 1.0 - q : q;
}

TwoStepFunction constant_function(double value) {
  TwoStepFunction f;
  f.q = std::min(value, 1.0 - value);
  f.full = value >= 0.5;
  f.fx = f.fy = value;
  return f;
}

BlochOp apply(const DiscreteMeasure& mu, const TwoStepFunction& f) {
  BlochOp s = BlochOp::zero();
  for (const auto& a : mu.atoms()) s += f(a.point) * a.weight * a.point.op();
  return s;
}

bool box_contains(const DiscreteMeasure& mu, const BlochOp& z) {
  const auto gens = generator_vecs(mu);
  const Vec3 zv = vec(z);
  for (const auto& u : facet_normals(gens))
    if (dot(u, zv) > support(gens, u) + kBoxTol) return false;
  return true;
}

TwoStepFunction two_step_decompose(const DiscreteMeasure& mu, const BlochOp& z) {
  if (!box_contains(mu, z)) throw NotInBox("two_step_decompose: point outside Box(mu)");
  const auto gens = generator_vecs(mu);
  const auto& atoms = mu.atoms();
  const BlochOp full = mu.mean();

  if (atoms.size() <= 2) {
    std::vector<Vec3> basis(gens.begin(), gens.end());
    const auto coef = fit_coefficients(basis, vec(z));
    TwoStepFunction f;
    f.x = atoms[0].point;
    f.y = atoms.back().point;
    f.fx = coef[0];
    f.fy = coef.back();
    return f;
  }
  if (max_abs_diff(z, full) < 1e-15) return constant_function(1.0);
  if (max_abs_diff(z, BlochOp::zero()) < 1e-15) return constant_function(0.0);

  const BlochOp centre = 0.5 * full;
  const BlochOp d = z - centre;
  if (max_abs_diff(d, BlochOp::zero()) < 1e-15) return constant_function(0.5);

  const auto normals = facet_normals(gens);
  const auto [slack, u] = tightest_facet(gens, normals, vec(z));
  if (slack <= kBoxTol) return decompose_boundary(mu, gens, u, vec(z));

  // Interior: shoot a ray from the centre through z to the boundary.
  double lo = 1.0;
  double hi = 2.0;
  while (box_contains(mu, centre + hi * d)) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (box_contains(mu, centre + mid * d))
      lo = mid;
    else
      hi = mid;
  }
  const BlochOp b = centre + lo * d;
  const auto [bslack, bu] = tightest_facet(gens, normals, vec(b));
  (void)bslack;
  const TwoStepFunction gb = decompose_boundary(mu, gens, bu, vec(b));
  // z = t c + (1 - t) b, computed by t/2 + (1 - t) g_b.
  const double t = 1.0 - 1.0 / lo;
  TwoStepFunction f = gb;
  f.q = 0.5 * t;
  f.fx = 0.5 * t + (1.0 - t) * gb.fx;
  f.fy = 0.5 * t + (1.0 - t) * gb.fy;
  return f;
}

SliceCurve boundary_slice_curve(const DiscreteMeasure& mu, const BlochOp& h, int n_samples) {
  if (eig_bounds(h).min_eig <= 0.0) throw DomainError("boundary_slice_curve: H must be positive definite");
  if (n_samples < 1) throw DomainError("boundary_slice_curve: need at least one sample");
  const auto& atoms = mu.atoms();
  const std::size_t n = atoms.size();
  // cum[i] = <rho_i, H> with atoms taken clockwise from |0><0|.
  std::vector<double> mass(n);
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    mass[i] = atoms[i].weight * inner(atoms[i].point.op(), h);
    cum[i + 1] = cum[i] + mass[i];
  }
  const double total = cum[n];
  const double half = 0.5 * total;

  auto fill = [&](double t, std::size_t i) { return std::clamp((t - cum[i]) / mass[i], 0.0, 1.0); };
  auto g = [&](double t) {
    BlochOp s = BlochOp::zero();
    for (std::size_t i = 0; i < n; ++i) {
      const double v = t < half ? fill(t + half, i) - fill(t, i) : 1.0 - fill(t, i) + fill(t - half, i);
      s += v * atoms[i].weight * atoms[i].point.op();
    }
    return s;
  };

  std::vector<double> ts;
  for (int k = 0; k <= n_samples; ++k) ts.push_back(total * k / n_samples);
  for (std::size_t i = 0; i <= n; ++i) {
    for (double shift : {0.0, half, -half}) {
      const double t = cum[i] + shift;
      if (t > 0.0 && t < total) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  SliceCurve out;
  for (double t : ts) out.points.push_back(g(std::min(t, std::nextafter(total, 0.0))));
  out.points.back() = out.points.front();
  for (std::size_t k = 1; k < out.points.size(); ++k)
    out.length += trace_norm(out.points[k] - out.points[k - 1]);
  return out;
}

}  // namespace rpsteer
