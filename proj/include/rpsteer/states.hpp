#pragma once

// Real two-qubit states and their steering ellipses.
//
// The steering ellipse of rho_AB is theta -> Tr_A[(|theta><theta| x I) rho_AB],
// Bob's subnormalized conditional state when Alice measures the real
// projector at angle theta.  Every family exposes the ellipse point, its
// theta-derivative, Bob's marginal and the tilt of the ellipse plane.

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rpsteer/bloch.hpp"

namespace rpsteer {

/// 4x4 real density matrix in the basis |00>, |01>, |10>, |11> (Alice first).
class TwoQubitRealState {
 public:
  /// Validates trace, symmetry and positivity; throws InvalidState.
  explicit TwoQubitRealState(const Eigen::Matrix4d& rho);

  const Eigen::Matrix4d& matrix() const { return rho_; }

  /// Bob's marginal Tr_A(rho).
  BlochOp marginal_b() const;

  /// Tr_A[(A x I) rho] for a real symmetric operator A on Alice's side.
  BlochOp conditional_b(const BlochOp& alice_op) const;

 private:
  Eigen::Matrix4d rho_;
};

/// Parses 16 numbers (row-major, separated by whitespace and/or commas).
TwoQubitRealState parse_state(std::string_view text);

TwoQubitRealState werner_state(double eta);
TwoQubitRealState pure_mixed_state(double alpha, double eta);
TwoQubitRealState depolarized_state(double alpha, double eta_a, double eta_b);

/// (I x Y) rho (I x Y), renormalized to unit trace.
TwoQubitRealState conjugate_state(const TwoQubitRealState& rho, const BlochOp& y);

struct EllipseFamily {
  std::string name;
  std::vector<std::pair<std::string, double>> params;

  std::function<BlochOp(double)> point;
  std::function<BlochOp(double)> derivative;
  BlochOp rho_b;
  /// Tilt of the ellipse plane; infinity for degenerate ellipses.
  double tilt = 0.0;
  /// An operator H with <H, point(theta)> independent of theta, if known.
  std::optional<BlochOp> normal;
  std::optional<TwoQubitRealState> state;
};

/// eta |Phi+><Phi+| + (1 - eta) I/4.
EllipseFamily werner(double eta);

/// eta |phi_a><phi_a| + (1 - eta) I/4 with |phi_a> = cos a |00> + sin a |11>.
EllipseFamily pure_mixed(double alpha, double eta);

/// |phi_a> sent through depolarizing channels eta_a (Alice) and eta_b (Bob).
EllipseFamily depolarized(double alpha, double eta_a, double eta_b);

/// Generic ellipse of an arbitrary real state; tilt from three sample points.
EllipseFamily ellipse_from_state(const TwoQubitRealState& rho);

/// Normalized ellipse of (I x Y) rho (I x Y), built directly from a family.
EllipseFamily conjugate(const EllipseFamily& fam, const BlochOp& y);

/// Alice's projector-derivative D(theta) = d/dtheta |theta><theta|.
BlochOp alice_projector_derivative(double theta);

/// Tilt of the plane through three ellipse points (infinity if degenerate),
/// together with the plane normal.
std::pair<double, std::optional<BlochOp>> plane_tilt(const BlochOp& p0, const BlochOp& p1,
                                                     const BlochOp& p2);

}  // namespace rpsteer
