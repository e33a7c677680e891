#pragma once

// Finitely supported measures on RP^1, the zonotope Box(mu) of operators
// sum_i f_i w_i s_i with f_i in [0,1], and two-step response functions.

#include <iosfwd>
#include <utility>
#include <vector>

#include "rpsteer/bloch.hpp"

namespace rpsteer {

struct Atom {
  RP1Point point;
  double weight = 0.0;
};

class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;

  /// Validates positive weights summing to 1 (to 1e-12), merges coincident
  /// points and sorts clockwise starting from |0><0|.  With normalize set,
  /// the weights are rescaled to unit sum first.
  explicit DiscreteMeasure(std::vector<Atom> atoms, bool normalize = false);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  /// w_i s_i in Bloch coordinates, in atom order.
  std::vector<BlochOp> generators() const;

  /// sum_i w_i s_i.
  BlochOp mean() const;

 private:
  std::vector<Atom> atoms_;
};

/// Reads `phi,weight` rows (header required), normalizing the weights.
DiscreteMeasure read_measure_csv(std::istream& is);

/// Response function taking 1 - q on the open clockwise arc from x to y and
/// q on the complementary open arc, with prescribed values at x and y.  When
/// x == y both arcs are empty and `full` selects 1 - q (true) or q (false)
/// away from the endpoint.
struct TwoStepFunction {
  RP1Point x;
  RP1Point y;
  double q = 0.0;
  double fx = 0.0;
  double fy = 0.0;
  bool full = false;

  double operator()(const RP1Point& z) const;
};

TwoStepFunction constant_function(double value);

/// sum_i f(s_i) w_i s_i.
BlochOp apply(const DiscreteMeasure& mu, const TwoStepFunction& f);

/// Exact membership test via the facet description of the zonotope.
bool box_contains(const DiscreteMeasure& mu, const BlochOp& z);

/// Two-step function g with sum_i g(s_i) w_i s_i = z.  Boundary points get
/// bias 0, interior points are split between the centre and a boundary point.
/// Throws NotInBox when z is outside Box(mu).
TwoStepFunction two_step_decompose(const DiscreteMeasure& mu, const BlochOp& z);

struct SliceCurve {
  std::vector<BlochOp> points;  ///< closed polyline, first point repeated at the end
  double length = 0.0;          ///< trace-norm length
};

/// Boundary of the slice {M in Box(mu) : <M, H> = <rho, H> / 2}, traced by
/// zero-bias two-step functions.  Breakpoints of the piecewise-linear curve
/// are always included, so the length is exact.  H must be positive definite.
SliceCurve boundary_slice_curve(const DiscreteMeasure& mu, const BlochOp& h, int n_samples);

}  // namespace rpsteer
