#include "rpsteer/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "rpsteer/errors.hpp"

namespace rpsteer {

namespace {

constexpr double kDiscEdge = 1.0 - 1e-9;
constexpr double kReplayOffset = 1e-4;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

enum class Goal { Unsteerable, Steerable };

struct Objective {
  const EllipseFamily& fam;
  const SearchConfig& cfg;
  Goal goal;
  int evaluations = 0;

  // Eigenvalue of Y^-1 C(Y) Y^-1 to maximize.  It has the signature of C(Y)
  // but does not collapse to zero as Y approaches the edge of the disc.
  // Returns -inf outside the open disc.
  double operator()(double r1, double r3, Verdict* out = nullptr) {
    if (r1 * r1 + r3 * r3 >= kDiscEdge * kDiscEdge) return kNegInf;
    ++evaluations;
    const BlochOp y{1.0, r1, r3};
    Verdict v;
    try {
      v = verdict_with(fam, y, cfg.quad);
    } catch (const QuadratureDiverged&) {
      // Nearly singular Y: the integrand is too sharp to resolve, skip the point.
      return kNegInf;
    }
    const EigenPair e = eig_bounds(sandwich(inverse(y), v.criterion_matrix));
    const double value = goal == Goal::Unsteerable ? e.min_eig : -e.max_eig;
    if (value < -kTolPsd) {
      // The raw verdict can pass its tolerance only because C(Y) is small.
      if (v.kind != VerdictKind::Inconclusive) v.kind = VerdictKind::Inconclusive;
    }
    if (out) *out = std::move(v);
    return value;
  }

  bool certified(const Verdict& v) const {
    return v.kind == (goal == Goal::Unsteerable ? VerdictKind::Unsteerable : VerdictKind::Steerable);
  }
};

SearchResult run_search(const EllipseFamily& fam, const SearchConfig& cfg, Goal goal,
                        const std::vector<BlochOp>& extra_starts) {
  cfg.validate();
  check_criterion_preconditions(fam, BlochOp::identity());
  Objective obj{fam, cfg, goal};

  std::vector<BlochOp> starts;
  for (const auto& s : extra_starts) {
    if (s.n <= 0.0) continue;
    const BlochOp u = s / s.n;
    if (u.radius() < kDiscEdge) starts.push_back(u);
  }
  const std::size_t n_extra = starts.size();
  const std::vector<BlochOp> probes = probe_starts(cfg.probe_grid);

  SearchResult best;
  best.value = kNegInf;
  const double h = cfg.fd_step;
  const std::size_t total = n_extra + (cfg.proportional_start ? 1 : 0) + probes.size();
  for (std::size_t k = 0; k < total; ++k) {
    BlochOp start;
    if (k < n_extra) {
      start = starts[k];
    } else if (cfg.proportional_start && k == n_extra) {
      // Solved only when the cheaper warm starts did not already certify.
      try {
        start = find_proportional_y(fam, cfg.quad);
      } catch (const Error&) {
        continue;
      }
      start = start / start.n;
    } else {
      start = probes[k - n_extra - (cfg.proportional_start ? 1 : 0)];
    }
    double r1 = start.r1;
    double r3 = start.r3;
    Verdict v;
    double f = obj(r1, r3, &v);
    if (f == kNegInf) continue;
    double step = cfg.initial_step;
    while (!obj.certified(v) && step >= cfg.min_step) {
      double g1 = (obj(r1 + h, r3) - obj(r1 - h, r3)) / (2 * h);
      double g3 = (obj(r1, r3 + h) - obj(r1, r3 - h)) / (2 * h);
      // Near the disc edge one side of the stencil is unavailable.
      if (!std::isfinite(g1) || !std::isfinite(g3)) {
        g1 = -r1;
        g3 = -r3;
      }
      const double gn = std::hypot(g1, g3);
      if (gn == 0.0) break;
      bool moved = false;
      while (step >= cfg.min_step) {
        Verdict cv;
        const double c1 = r1 + step * g1 / gn;
        const double c3 = r3 + step * g3 / gn;
        const double fc = obj(c1, c3, &cv);
        if (fc > f) {
          r1 = c1;
          r3 = c3;
          f = fc;
          v = std::move(cv);
          moved = true;
          break;
        }
        step *= cfg.step_decay;
      }
      if (!moved) break;
    }
    if (f > best.value) {
      best.value = f;
      best.y = BlochOp{1.0, r1, r3};
      best.verdict = v;
    }
    if (obj.certified(v)) break;
  }
  best.evaluations = obj.evaluations;
  if (goal == Goal::Steerable) best.value = -best.value;
  return best;
}

bool certifies(const EllipseFamily& fam, const BlochOp& y, const Quadrature& q, VerdictKind kind) {
  try {
    return verdict_with(fam, y, q).kind == kind;
  } catch (const Error&) {
    return false;
  }
}

EllipseFamily pure_mixed_at(double alpha, double eta) { return pure_mixed(alpha, eta); }

// Picks the stored certificate for a sweep row: the first candidate that
// replays on both sides of the bracket, else the lower certificate.
BlochOp pick_certificate(const FamilyAt& fam_at, double lower, double upper, bool upper_certified,
                         const std::vector<BlochOp>& candidates, const Quadrature& q) {
  const double below = std::max(0.0, lower - kReplayOffset);
  const double above = std::min(1.0, upper + kReplayOffset);
  for (const auto& y : candidates) {
    bool ok = certifies(fam_at(below), y, q, VerdictKind::Unsteerable);
    if (ok && upper_certified) ok = certifies(fam_at(above), y, q, VerdictKind::Steerable);
    if (ok) return y;
  }
  return candidates.empty() ? BlochOp::identity() : candidates.front();
}

BoundaryPoint bracket(const FamilyAt& fam_at, double lo, double hi, const SearchConfig& cfg) {
  BoundaryPoint p;
  const Threshold low = eta_lower(fam_at, lo, hi, cfg);
  const Threshold up = eta_upper(fam_at, low.eta, hi, cfg);
  p.eta_lower = low.eta;
  p.eta_upper = up.eta;
  p.valid = true;

  std::vector<BlochOp> candidates;
  if (up.y && low.eta < up.eta) {
    try {
      candidates.push_back(find_proportional_y(fam_at(0.5 * (low.eta + up.eta)), cfg.quad));
    } catch (const Error&) {
    }
  }
  if (low.y) candidates.push_back(*low.y);
  if (up.y) candidates.push_back(*up.y);
  p.y = pick_certificate(fam_at, p.eta_lower, p.eta_upper, up.y.has_value(), candidates, cfg.quad);
  return p;
}

}  // namespace

void SearchConfig::validate() const {
  if (!(min_step > 0.0 && min_step < initial_step))
    throw DomainError("search: need 0 < min_step < initial_step");
  if (!(step_decay > 0.0 && step_decay < 1.0)) throw DomainError("search: step_decay must lie in (0,1)");
  if (bisect_iters < 1) throw DomainError("search: bisect_iters must be positive");
  if (probe_grid < 1) throw DomainError("search: probe_grid must be positive");
  if (!(fd_step > 0.0)) throw DomainError("search: fd_step must be positive");
  quad.validate();
}

std::vector<BlochOp> probe_starts(int count) {
  std::vector<BlochOp> out{BlochOp{1.0, 0.0, 0.0}};
  const int ring = count - 1;
  for (int k = 0; k < ring; ++k) {
    const double a = kTwoPi * k / ring;
    out.push_back(BlochOp{1.0, 0.5 * std::sin(a), 0.5 * std::cos(a)});
  }
  return out;
}

SearchResult maximize_min_eig(const EllipseFamily& fam, const SearchConfig& cfg,
                              const std::vector<BlochOp>& extra_starts) {
  return run_search(fam, cfg, Goal::Unsteerable, extra_starts);
}

SearchResult minimize_max_eig(const EllipseFamily& fam, const SearchConfig& cfg,
                              const std::vector<BlochOp>& extra_starts) {
  return run_search(fam, cfg, Goal::Steerable, extra_starts);
}

Threshold eta_lower(const FamilyAt& fam_at, double lo, double hi, const SearchConfig& cfg) {
  std::vector<BlochOp> warm;
  const auto at_hi = maximize_min_eig(fam_at(hi), cfg);
  if (at_hi.verdict.kind == VerdictKind::Unsteerable) return {hi, at_hi.y};
  const auto at_lo = maximize_min_eig(fam_at(lo), cfg);
  if (at_lo.verdict.kind != VerdictKind::Unsteerable) return {lo, std::nullopt};
  Threshold out{lo, at_lo.y};
  for (int i = 0; i < cfg.bisect_iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cfg.warm_start) warm = {*out.y};
    const auto r = maximize_min_eig(fam_at(mid), cfg, warm);
    if (r.verdict.kind == VerdictKind::Unsteerable) {
      lo = mid;
      out = {mid, r.y};
    } else {
      hi = mid;
    }
  }
  return out;
}

Threshold eta_upper(const FamilyAt& fam_at, double lo, double hi, const SearchConfig& cfg) {
  std::vector<BlochOp> warm;
  const auto at_lo = minimize_max_eig(fam_at(lo), cfg);
  if (at_lo.verdict.kind == VerdictKind::Steerable) return {lo, at_lo.y};
  const auto at_hi = minimize_max_eig(fam_at(hi), cfg);
  if (at_hi.verdict.kind != VerdictKind::Steerable) return {hi, std::nullopt};
  Threshold out{hi, at_hi.y};
  for (int i = 0; i < cfg.bisect_iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cfg.warm_start) warm = {*out.y};
    const auto r = minimize_max_eig(fam_at(mid), cfg, warm);
    if (r.verdict.kind == VerdictKind::Steerable) {
      hi = mid;
      out = {mid, r.y};
    } else {
      lo = mid;
    }
  }
  return out;
}

Threshold eta_lower(double alpha, const SearchConfig& cfg) {
  return eta_lower([alpha](double eta) { return pure_mixed_at(alpha, eta); }, 0.0, 1.0, cfg);
}

Threshold eta_upper(double alpha, const SearchConfig& cfg) {
  return eta_upper([alpha](double eta) { return pure_mixed_at(alpha, eta); }, 0.0, 1.0, cfg);
}

BoundaryPoint boundary_point(double alpha, const SearchConfig& cfg) {
  cfg.validate();
  BoundaryPoint p;
  p.alpha = alpha;
  // Product state plus noise: separable for every eta, criterion not applicable.
  if (std::cos(2.0 * alpha) >= 1.0 - kTolTilt) {
    p.eta_lower = 1.0;
    p.eta_upper = 1.0;
    p.valid = false;
    return p;
  }
  const FamilyAt fam_at = [alpha](double eta) { return pure_mixed_at(alpha, eta); };
  BoundaryPoint b = bracket(fam_at, 0.0, 1.0, cfg);
  b.alpha = alpha;
  return b;
}

BoundaryPoint depolarizing_point(double eta_a, double alpha, const SearchConfig& cfg) {
  cfg.validate();
  if (!(eta_a > 0.0 && eta_a <= 1.0)) throw DomainError("depolarizing_point: eta_a must lie in (0,1]");
  BoundaryPoint p;
  p.alpha = alpha;
  const double c = std::cos(2.0 * alpha);
  p.tilt_line = c;
  if (c >= 1.0 - kTolTilt) {
    p.eta_lower = 1.0;
    p.eta_upper = 1.0;
    p.valid = false;
    return p;
  }
  const FamilyAt fam_at = [alpha, eta_a](double eta_b) { return depolarized(alpha, eta_a, eta_b); };
  // Smallest eta_B at which the ellipse tilt c / eta_B is safely below 1.
  const double lo = std::max(c * (1.0 + 1e-6) + 1e-9, 1e-9);

  const auto at_lo = maximize_min_eig(fam_at(lo), cfg);
  if (at_lo.verdict.kind != VerdictKind::Unsteerable) {
    // No certificate at the edge of validity: the region below stays undecided.
    const Threshold up = eta_upper(fam_at, lo, 1.0, cfg);
    p.eta_lower = 0.0;
    p.eta_upper = up.eta;
    p.valid = false;
    if (up.y) p.y = *up.y;
    return p;
  }
  BoundaryPoint b = bracket(fam_at, lo, 1.0, cfg);
  b.alpha = alpha;
  b.tilt_line = c;
  return b;
}

namespace {

template <class F>
std::vector<BoundaryPoint> sweep(const std::vector<double>& alphas, const SearchConfig& cfg, F point) {
  std::vector<BoundaryPoint> out(alphas.size());
  int workers = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max<int>(1, static_cast<int>(alphas.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i = next++; i < alphas.size(); i = next++) {
      if (failed) return;
      try {
        out[i] = point(alphas[i]);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace

std::vector<BoundaryPoint> boundary_curve(const std::vector<double>& alphas, const SearchConfig& cfg) {
  return sweep(alphas, cfg, [&](double a) { return boundary_point(a, cfg); });
}

std::vector<BoundaryPoint> depolarizing_region(double eta_a, const std::vector<double>& alphas,
                                               const SearchConfig& cfg) {
  return sweep(alphas, cfg, [&](double a) { return depolarizing_point(eta_a, a, cfg); });
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 1) throw DomainError("linear_grid: need at least one point");
  if (n == 1) return {hi};
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  out.back() = hi;
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void write_boundary_csv(std::ostream& os, const std::vector<BoundaryPoint>& rows, bool with_tilt_line) {
  os << "alpha,eta_lower,eta_upper,valid,Y_n,Y_r1,Y_r3";
  if (with_tilt_line) os << ",tilt_line";
  os << '\n';
  for (const auto& r : rows) {
    os << fmt(r.alpha) << ',' << fmt(r.eta_lower) << ',' << fmt(r.eta_upper) << ',' << (r.valid ? 1 : 0)
       << ',' << fmt(r.y.n) << ',' << fmt(r.y.r1) << ',' << fmt(r.y.r3);
    if (with_tilt_line) os << ',' << fmt(r.tilt_line);
    os << '\n';
  }
}

std::vector<BoundaryPoint> read_boundary_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) return {};
  const bool tilt = line.find("tilt_line") != std::string::npos;
  std::vector<BoundaryPoint> rows;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        f.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw DomainError("boundary csv: bad number '" + cell + "'");
      }
    }
    if (f.size() < 7 || (tilt && f.size() < 8)) throw DomainError("boundary csv: short row");
    BoundaryPoint p;
    p.alpha = f[0];
    p.eta_lower = f[1];
    p.eta_upper = f[2];
    p.valid = f[3] != 0.0;
    p.y = BlochOp{f[4], f[5], f[6]};
    if (tilt) p.tilt_line = f[7];
    rows.push_back(p);
  }
  return rows;
}

}  // namespace rpsteer
