#pragma once

#include <functional>

#include "rpsteer/bloch.hpp"

namespace rpsteer {

/// Composite Simpson rule with panel doubling.
struct Quadrature {
  int n_panels = 64;          ///< starting panel count (even)
  double refine_until = 1e-10;  ///< stop when successive values differ by less (trace norm)
  int max_panels = 1 << 16;

  /// Throws DomainError on an invalid configuration.
  void validate() const;
};

struct QuadResult {
  BlochOp value;
  int panels = 0;
};

using OpIntegrand = std::function<BlochOp(double)>;

/// Integrates f over [a, b], doubling the panel count until two successive
/// Simpson values agree to q.refine_until.  Throws QuadratureDiverged when
/// q.max_panels is exceeded.
QuadResult simpson_doubling(const OpIntegrand& f, double a, double b, const Quadrature& q);

/// Recursive adaptive Simpson on [a, b] for an operator-valued integrand.
/// The range is first split into `segments` equal pieces so that narrow
/// features are not stepped over.
BlochOp adaptive_simpson(const OpIntegrand& f, double a, double b, double tol, int segments = 16,
                         int max_depth = 48);

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int segments = 16, int max_depth = 48);

}  // namespace rpsteer
