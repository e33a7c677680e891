#pragma once

// Searches over Y for criterion certificates and bisection over the noise
// parameter for the steering boundary.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rpsteer/criterion.hpp"

namespace rpsteer {

struct SearchConfig {
  double initial_step = 0.1;
  double min_step = 1e-7;
  double step_decay = 0.5;
  int bisect_iters = 40;
  int probe_grid = 9;     ///< deterministic starts: centre plus a ring at radius 0.5
  double fd_step = 1e-6;  ///< central-difference step for the eigenvalue gradient
  bool warm_start = true; ///< also start from the previous certificate during bisection
  bool proportional_start = true;  ///< also start from the Y solving the proportionality condition
  int threads = 0;        ///< sweep workers; 0 picks hardware concurrency
  Quadrature quad;

  void validate() const;
};

/// Family at a given value of the swept noise parameter.
using FamilyAt = std::function<EllipseFamily(double)>;

struct SearchResult {
  BlochOp y{1.0, 0.0, 0.0};          ///< unit trace
  double value = 0.0;                ///< best min_eig (ascent) or max_eig (descent)
  Verdict verdict;                   ///< verdict at y
  int evaluations = 0;
};

/// Gradient ascent of min_eig C(Y) over unit-trace Y = (1, r1, r3), |r| < 1.
/// Stops early once the value is nonnegative (an unsteerability certificate).
SearchResult maximize_min_eig(const EllipseFamily& fam, const SearchConfig& cfg,
                              const std::vector<BlochOp>& extra_starts = {});

/// Mirror image: descent of max_eig, stopping once C(Y) certifies steering.
SearchResult minimize_max_eig(const EllipseFamily& fam, const SearchConfig& cfg,
                              const std::vector<BlochOp>& extra_starts = {});

/// Starting points on the Y disc, centre first.
std::vector<BlochOp> probe_starts(int count);

struct Threshold {
  double eta = 0.0;
  std::optional<BlochOp> y;  ///< certificate at eta, when one was found
};

/// Largest eta in [lo, hi] (to 2^-bisect_iters of the range) with an
/// unsteerability certificate.  Assumes lo is certified.
Threshold eta_lower(const FamilyAt& fam_at, double lo, double hi, const SearchConfig& cfg);

/// Smallest eta in [lo, hi] with a steering certificate; hi when none is found at hi.
Threshold eta_upper(const FamilyAt& fam_at, double lo, double hi, const SearchConfig& cfg);

/// Pure-state-plus-noise family at fixed alpha, swept over eta in [0, 1].
Threshold eta_lower(double alpha, const SearchConfig& cfg);
Threshold eta_upper(double alpha, const SearchConfig& cfg);

struct BoundaryPoint {
  double alpha = 0.0;
  double eta_lower = 0.0;
  double eta_upper = 1.0;
  bool valid = false;
  BlochOp y = BlochOp::identity();  ///< replays as Unsteerable below eta_lower and Steerable above eta_upper
  double tilt_line = 0.0;           ///< swept-parameter value below which the ellipse tilt is >= 1
};

/// One sweep point for the pure-state-plus-noise family.
BoundaryPoint boundary_point(double alpha, const SearchConfig& cfg);

/// One sweep point over eta_B for the locally depolarized family.
BoundaryPoint depolarizing_point(double eta_a, double alpha, const SearchConfig& cfg);

std::vector<BoundaryPoint> boundary_curve(const std::vector<double>& alphas, const SearchConfig& cfg);
std::vector<BoundaryPoint> depolarizing_region(double eta_a, const std::vector<double>& alphas,
                                               const SearchConfig& cfg);

/// n equally spaced values on [lo, hi] (a single point gives hi).
std::vector<double> linear_grid(double lo, double hi, int n);

void write_boundary_csv(std::ostream& os, const std::vector<BoundaryPoint>& rows,
                        bool with_tilt_line = false);
std::vector<BoundaryPoint> read_boundary_csv(std::istream& is);

}  // namespace rpsteer
