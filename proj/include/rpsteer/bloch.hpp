#pragma once

// Real symmetric 2x2 operators in Bloch coordinates.
//
// An operator X is stored as (n, r1, r3) with X = (n I + r1 s1 + r3 s3) / 2,
// where s1, s3 are the real Pauli matrices.  Every routine here is closed
// form; matrices only appear for display and for test oracles.

#include <array>
#include <cmath>
#include <iosfwd>
#include <limits>

namespace rpsteer {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Singularity threshold for |det Y|.
inline constexpr double kTolDet = 1e-12;
/// Componentwise equality tolerance for Bloch coordinates.
inline constexpr double kTolBloch = 1e-12;

struct BlochOp {
  double n = 0.0;
  double r1 = 0.0;
  double r3 = 0.0;

  constexpr BlochOp() = default;
  constexpr BlochOp(double n_, double r1_, double r3_) : n(n_), r1(r1_), r3(r3_) {}

  static constexpr BlochOp identity() { return {2.0, 0.0, 0.0}; }
  static constexpr BlochOp zero() { return {0.0, 0.0, 0.0}; }

  /// Builds the operator [[a, b], [b, d]].
  static constexpr BlochOp from_matrix(double a, double b, double d) {
    return {a + d, 2.0 * b, a - d};
  }

  /// Entries (a, b, d) of [[a, b], [b, d]].
  constexpr std::array<double, 3> matrix() const {
    return {0.5 * (n + r3), 0.5 * r1, 0.5 * (n - r3)};
  }

  /// Euclidean length of the traceless part, sqrt(r1^2 + r3^2).
  double radius() const { return std::hypot(r1, r3); }

  constexpr BlochOp& operator+=(const BlochOp& o) {
    n += o.n;
    r1 += o.r1;
    r3 += o.r3;
    return *this;
  }
  constexpr BlochOp& operator-=(const BlochOp& o) {
    n -= o.n;
    r1 -= o.r1;
    r3 -= o.r3;
    return *this;
  }
  constexpr BlochOp& operator*=(double s) {
    n *= s;
    r1 *= s;
    r3 *= s;
    return *this;
  }
  constexpr BlochOp& operator/=(double s) { return *this *= (1.0 / s); }

  friend constexpr BlochOp operator+(BlochOp a, const BlochOp& b) { return a += b; }
  friend constexpr BlochOp operator-(BlochOp a, const BlochOp& b) { return a -= b; }
  friend constexpr BlochOp operator-(const BlochOp& a) { return {-a.n, -a.r1, -a.r3}; }
  friend constexpr BlochOp operator*(BlochOp a, double s) { return a *= s; }
  friend constexpr BlochOp operator*(double s, BlochOp a) { return a *= s; }
  friend constexpr BlochOp operator/(BlochOp a, double s) { return a /= s; }
  friend constexpr bool operator==(const BlochOp&, const BlochOp&) = default;
};

std::ostream& operator<<(std::ostream& os, const BlochOp& x);

struct EigenPair {
  double min_eig;
  double max_eig;
};

constexpr double trace(const BlochOp& x) { return x.n; }
constexpr double det(const BlochOp& x) { return 0.25 * (x.n * x.n - x.r1 * x.r1 - x.r3 * x.r3); }

/// Hilbert-Schmidt inner product Tr(XY).
constexpr double inner(const BlochOp& x, const BlochOp& y) {
  return 0.5 * (x.n * y.n + x.r1 * y.r1 + x.r3 * y.r3);
}

/// Adjugate: same eigenvectors, eigenvalues swapped, X adj(X) = det(X) I.
constexpr BlochOp adjugate(const BlochOp& x) { return {x.n, -x.r1, -x.r3}; }

/// Jordan product (XY + YX) / 2.
constexpr BlochOp jordan(const BlochOp& x, const BlochOp& y) {
  return {0.5 * (x.n * y.n + x.r1 * y.r1 + x.r3 * y.r3), 0.5 * (x.n * y.r1 + y.n * x.r1),
          0.5 * (x.n * y.r3 + y.n * x.r3)};
}

constexpr BlochOp square(const BlochOp& x) { return jordan(x, x); }

/// A B A, which is symmetric whenever A and B are.
constexpr BlochOp sandwich(const BlochOp& a, const BlochOp& b) {
  return 2.0 * jordan(a, jordan(a, b)) - jordan(square(a), b);
}

EigenPair eig_bounds(const BlochOp& x);

/// sqrt(r1^2 + r3^2) / |n|; infinity when n == 0.
double tilt(const BlochOp& x);

/// Sum of absolute eigenvalues.
double trace_norm(const BlochOp& x);

/// Operator absolute value sqrt(X^T X).
BlochOp abs_op(const BlochOp& x);

/// |X|_Y = Y^-1 |Y X Y| Y^-1.  Throws SingularY when |det Y| <= kTolDet.
BlochOp abs_op_conj(const BlochOp& x, const BlochOp& y);

BlochOp pos_part(const BlochOp& x);
BlochOp neg_part(const BlochOp& x);

/// Throws SingularY when |det X| <= kTolDet.
BlochOp inverse(const BlochOp& x);

/// Unique positive semidefinite square root of a PSD operator.
BlochOp sqrt_psd(const BlochOp& x);

bool is_psd(const BlochOp& x, double tol = kTolBloch);
bool is_indefinite(const BlochOp& x);

/// X / Tr(X).
BlochOp normalized(const BlochOp& x);

bool approx_equal(const BlochOp& a, const BlochOp& b, double tol = kTolBloch);
double max_abs_diff(const BlochOp& a, const BlochOp& b);

/// A point of RP^1: the projector (I + sin(phi) s1 + cos(phi) s3) / 2.
///
/// The measurement projector |theta><theta| is RP1Point{theta}.  With r1 as
/// the horizontal and r3 as the vertical axis, clockwise means increasing phi.
struct RP1Point {
  double phi = 0.0;

  constexpr RP1Point() = default;
  explicit RP1Point(double angle);

  BlochOp op() const { return {1.0, std::sin(phi), std::cos(phi)}; }

  friend bool operator==(const RP1Point&, const RP1Point&) = default;
};

/// Wraps an angle into [0, 2 pi).
double wrap_angle(double a);

/// Clockwise angular distance from a to b, in [0, 2 pi).
double clockwise_distance(const RP1Point& a, const RP1Point& b);

/// True when z lies strictly inside the arc travelled clockwise from x to y.
/// For x == y the arc is empty.
bool in_open_arc(const RP1Point& x, const RP1Point& y, const RP1Point& z);

}  // namespace rpsteer
