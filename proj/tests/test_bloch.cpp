#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rpsteer/bloch.hpp"
#include "rpsteer/errors.hpp"

using namespace rpsteer;

namespace {

void check_close(const BlochOp& a, const BlochOp& b, double tol) {
  INFO("a = " << a << ", b = " << b);
  CHECK(max_abs_diff(a, b) <= tol);
}

}  // namespace

TEST_CASE("adjugate swaps eigenvalues") {
  // diag(2, 3) -> diag(3, 2)
  check_close(adjugate(BlochOp{5, 0, -1}), BlochOp{5, 0, 1}, 0.0);
  check_close(adjugate(BlochOp::identity()), BlochOp::identity(), 0.0);
  // projector |0><0| -> I - P
  const BlochOp p{1, 0, 1};
  check_close(adjugate(p), BlochOp::identity() - p, 0.0);
}

TEST_CASE("trace norm, tilt and eigenvalues on fixed operators") {
  CHECK(trace_norm(BlochOp{0, 2, 0}) == doctest::Approx(2.0));
  CHECK(trace_norm(BlochOp::identity()) == doctest::Approx(2.0));
  CHECK(tilt(BlochOp::identity()) == 0.0);
  CHECK(tilt(BlochOp{1, 0, 1}) == doctest::Approx(1.0));
  CHECK(std::isinf(tilt(BlochOp{0, 1, 0})));

  auto e = eig_bounds(BlochOp::identity());
  CHECK(e.min_eig == 1.0);
  CHECK(e.max_eig == 1.0);
  e = eig_bounds(BlochOp{0, 0, 2});
  CHECK(e.min_eig == -1.0);
  CHECK(e.max_eig == 1.0);
  e = eig_bounds(BlochOp{1, 0, 1});
  CHECK(e.min_eig == 0.0);
  CHECK(e.max_eig == 1.0);
}

TEST_CASE("absolute value and positive/negative parts on fixed operators") {
  check_close(abs_op(BlochOp{0, 2, 0}), BlochOp::identity(), 1e-15);
  const BlochOp psd{1.5, 0.3, -0.4};
  check_close(abs_op(psd), psd, 0.0);
  check_close(abs_op(-psd), psd, 0.0);

  const BlochOp s3{0, 0, 2};
  check_close(pos_part(s3), BlochOp{1, 0, 1}, 1e-15);
  check_close(neg_part(s3), BlochOp{1, 0, -1}, 1e-15);
  check_close(pos_part(psd), psd, 0.0);
  check_close(neg_part(psd), BlochOp::zero(), 0.0);
}

TEST_CASE("conjugated absolute value") {
  const BlochOp s1{0, 2, 0};
  check_close(abs_op_conj(s1, BlochOp::identity()), abs_op(s1), 1e-15);

  // Y = diag(1, 2); X = s1 has det -1.
  const BlochOp y = BlochOp::from_matrix(1, 0, 2);
  const BlochOp closed = (sandwich(s1, square(y)) - det(s1) * square(adjugate(y))) /
                         trace_norm(sandwich(y, s1));
  check_close(abs_op_conj(s1, y), closed, 1e-14);
  check_close(abs_op_conj(s1, y), oracle::abs_conj(s1, y), 1e-12);

  CHECK_THROWS_AS(abs_op_conj(s1, BlochOp{1, 0, 1}), SingularY);
  // Semidefinite X goes through the direct route.
  const BlochOp psd{1.0, 0.2, 0.1};
  check_close(abs_op_conj(psd, y), psd, 1e-12);
}

TEST_CASE("sandwich and jordan products match dense products") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const BlochOp a = oracle::random_op(rng);
    const BlochOp b = oracle::random_op(rng);
    const Eigen::Matrix2d am = oracle::mat(a);
    const Eigen::Matrix2d bm = oracle::mat(b);
    check_close(sandwich(a, b), oracle::bloch(am * bm * am), 1e-14);
    check_close(jordan(a, b), oracle::bloch(0.5 * (am * bm + bm * am)), 1e-14);
    CHECK(inner(a, b) == doctest::Approx((am * bm).trace()).epsilon(1e-14));
  }
}

TEST_CASE("property: algebraic identities on random operators") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const BlochOp x = oracle::random_op(rng, 2.0);
    // X adj(X) = det(X) I, i.e. the Jordan product is det * I (they commute).
    check_close(jordan(x, adjugate(x)), det(x) * BlochOp::identity(), 1e-12);
    CHECK(trace_norm(x) == doctest::Approx(oracle::trace_norm(x)).epsilon(1e-12));
    const auto e = eig_bounds(x);
    CHECK(std::abs(std::abs(e.min_eig) + std::abs(e.max_eig) - trace_norm(x)) <= 1e-12);
    check_close(abs_op(x), oracle::abs(x), 1e-10);

    const BlochOp p = pos_part(x);
    const BlochOp m = neg_part(x);
    CHECK(eig_bounds(p).min_eig >= -1e-12);
    CHECK(eig_bounds(m).min_eig >= -1e-12);
    check_close(p - m, x, 1e-12);
    check_close(p + m, abs_op(x), 1e-12);
    check_close(p, oracle::pos(x), 1e-10);
    check_close(m, oracle::neg(x), 1e-10);
  }
}

TEST_CASE("property: |X|_Y matches the conjugation oracle") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 2000; ++i) {
    const BlochOp x = oracle::random_indefinite(rng);
    const BlochOp y = oracle::random_pd(rng);
    check_close(abs_op_conj(x, y), oracle::abs_conj(x, y), 1e-9);
  }
}

TEST_CASE("property: operators orthogonal to a low-tilt operator have tilt above 1") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    BlochOp mu = oracle::random_op(rng);
    mu.n = (std::abs(mu.n) + 1e-3) * (1.0 + mu.radius());  // ensures tilt < 1
    if (!(tilt(mu) < 1.0)) continue;
    // lambda with <lambda, mu> = 0: pick r freely, solve for n.
    BlochOp lambda{0.0, u(rng), u(rng)};
    if (lambda.radius() < 1e-6) continue;
    lambda.n = -(lambda.r1 * mu.r1 + lambda.r3 * mu.r3) / mu.n;
    CHECK(inner(lambda, mu) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(tilt(lambda) > 1.0);
  }
}

TEST_CASE("RP1 points and clockwise arcs") {
  const RP1Point p(0.3);
  const BlochOp op = p.op();
  CHECK(op.n == 1.0);
  CHECK(op.radius() == doctest::Approx(1.0));
  CHECK(RP1Point(kTwoPi + 0.5).phi == doctest::Approx(0.5));
  CHECK(RP1Point(-0.5).phi == doctest::Approx(kTwoPi - 0.5));

  // In the (r1, r3) plane the point (sin phi, cos phi) moves clockwise as phi grows.
  CHECK(in_open_arc(RP1Point(0.2), RP1Point(1.0), RP1Point(0.5)));
  CHECK_FALSE(in_open_arc(RP1Point(0.2), RP1Point(1.0), RP1Point(1.5)));
  CHECK(in_open_arc(RP1Point(1.0), RP1Point(0.2), RP1Point(1.5)));
  CHECK(clockwise_distance(RP1Point(6.0), RP1Point(0.1)) == doctest::Approx(0.1 + kTwoPi - 6.0));
  CHECK_FALSE(in_open_arc(RP1Point(0.2), RP1Point(1.0), RP1Point(1.0)));
  CHECK_FALSE(in_open_arc(RP1Point(1.0), RP1Point(1.0), RP1Point(0.5)));
}
