#pragma once

// Operator criterion for steerability under real projective measurements.
//
// For an ellipse of tilt < 1 and a positive definite Y, the criterion matrix
//
//     C(Y) = Y rho_B Y - integral_0^pi |Y X(theta) Y| dtheta,   X = d rho~/dtheta,
//
// certifies an LHS model when C(Y) >= 0 and certifies steering when
// C(Y) <= 0 with C(Y) != 0.  The steering operator is the integral term.

#include <string>

#include "rpsteer/bloch.hpp"
#include "rpsteer/quadrature.hpp"
#include "rpsteer/states.hpp"

namespace rpsteer {

inline constexpr double kTolPsd = 1e-8;
inline constexpr double kTolNonzero = 1e-8;
inline constexpr double kTolTilt = 1e-9;

enum class VerdictKind { Unsteerable, Steerable, Inconclusive };

std::string to_string(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  BlochOp y;
  double min_eig = 0.0;
  double max_eig = 0.0;
  BlochOp criterion_matrix;
  int panels = 0;  ///< Simpson panels used for the steering operator
};

/// Verdict semantics for a given criterion matrix: Unsteerable when
/// min_eig >= -kTolPsd, else Steerable when max_eig <= kTolPsd and the
/// matrix is nonzero, else Inconclusive.
Verdict classify(const BlochOp& criterion, const BlochOp& y);

/// Throws TiltTooLarge unless fam.tilt < 1 - kTolTilt, SingularY unless Y > 0.
void check_criterion_preconditions(const EllipseFamily& fam, const BlochOp& y);

/// integral_0^pi |Y X(theta) Y| dtheta by composite Simpson with doubling.
QuadResult steering_operator_detailed(const EllipseFamily& fam, const BlochOp& y,
                                      const Quadrature& q);
BlochOp steering_operator(const EllipseFamily& fam, const BlochOp& y, const Quadrature& q);

/// Same integrand over [0, 2 pi).
BlochOp steering_operator_full(const EllipseFamily& fam, const BlochOp& y, const Quadrature& q);

BlochOp criterion_matrix(const EllipseFamily& fam, const BlochOp& y, const Quadrature& q);

Verdict verdict_with(const EllipseFamily& fam, const BlochOp& y, const Quadrature& q);

/// Trace-normalized integral_0^{2 pi} |X(theta)|_Y dtheta for
/// Y = (1 - eps) P + eps (I - P).  As eps -> 0 this approaches I - P.
BlochOp boundary_limit_probe(const EllipseFamily& fam, const RP1Point& p, double eps,
                             const Quadrature& q);

struct ProportionalY {
  BlochOp y;          ///< unit trace, positive definite
  double residual = 0.0;
  int iterations = 0;
};

/// Finds a unit-trace Y > 0 for which the steering operator is a scalar
/// multiple of Y rho_B Y.  Throws NoConvergence on failure.
ProportionalY find_proportional_y_detailed(const EllipseFamily& fam, const Quadrature& q);
BlochOp find_proportional_y(const EllipseFamily& fam, const Quadrature& q);

/// Distance between the trace-normalized Bloch directions of the steering
/// operator and Y rho_B Y.
double proportionality_residual(const EllipseFamily& fam, const BlochOp& y, const Quadrature& q);

/// Decisive verdict using the proportional Y.
Verdict decide(const EllipseFamily& fam, const Quadrature& q);

}  // namespace rpsteer
