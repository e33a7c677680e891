#pragma once

// Explicit keyring local-hidden-state models for steering ellipses.
//
// The hidden variable lambda lives on [0, 2 pi) with operator-valued density
// sigma(lambda); the response to the measurement |theta><theta| is
//
//     g_theta(lambda) = 0 for lambda in [theta, theta + pi), 1 otherwise,
//
// so that g_{theta + pi} = 1 - g_theta.  A model reproduces an ellipse when
// integral g_theta(lambda) sigma(lambda) dlambda = rho~(theta) for all theta.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rpsteer/bloch.hpp"
#include "rpsteer/quadrature.hpp"
#include "rpsteer/states.hpp"

namespace rpsteer {

inline constexpr int kDefaultGridN = 4096;
inline constexpr const char* kSwitchConvention =
    "g(theta, lambda) = 0 for lambda in [theta, theta + pi) mod 2 pi, 1 otherwise";

struct KeyringModel {
  int grid_n = 0;
  std::vector<double> lambda;   ///< uniform grid 2 pi j / grid_n
  std::vector<BlochOp> sigma;   ///< density samples on the grid
  std::function<BlochOp(double)> density;  ///< closed form when available, else empty

  static double response(double theta, double lambda);

  /// Grid integral of sigma over [0, 2 pi).
  BlochOp mass() const;

  /// integral g_theta(lambda) sigma(lambda) dlambda with sigma interpolated
  /// linearly between grid points and the switch points handled exactly.
  BlochOp reproduce(double theta) const;
};

/// Builds the model sigma = |X|_+ + (rho_B - rho') / (2 pi), X = d rho~/dlambda,
/// rho' = integral_0^pi |X|.  Throws PreconditionFailed unless rho_B >= rho'.
KeyringModel construct_case1(const EllipseFamily& fam, int grid_n = kDefaultGridN,
                             const Quadrature& q = {});

/// Maps a model for the Y-conjugated ellipse back: sigma -> Y^-1 sigma Y^-1,
/// rescaled to unit total trace.  Throws SingularY unless Y > 0.
KeyringModel transform_model(const KeyringModel& model, const BlochOp& y);

/// Builds a model for any ellipse certified unsteerable by some Y: directly
/// when Y = I works, otherwise through the conjugated ellipse.  Throws
/// PreconditionFailed when no certificate is found.
KeyringModel build_model(const EllipseFamily& fam, int grid_n = kDefaultGridN, const Quadrature& q = {});

/// Largest trace-norm error of the reproduced ellipse over the given angles.
double verify_model(const KeyringModel& model, const EllipseFamily& fam, const std::vector<double>& thetas);
double verify_model(const KeyringModel& model, const EllipseFamily& fam, int n_theta = 36);

/// Trace-norm length of the ellipse, integral_0^{2 pi} ||X(theta)||_1 dtheta.
double circumference(const EllipseFamily& fam, double tol = 1e-12);

void write_model_json(std::ostream& os, const KeyringModel& model);
/// Throws DomainError on malformed input.
KeyringModel read_model_json(std::istream& is);

}  // namespace rpsteer
