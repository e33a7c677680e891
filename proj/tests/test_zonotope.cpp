#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "rpsteer/errors.hpp"
#include "rpsteer/zonotope.hpp"

using namespace rpsteer;

namespace {

DiscreteMeasure random_measure(std::mt19937_64& rng, int max_atoms) {
  std::uniform_int_distribution<int> count(1, max_atoms);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::vector<Atom> atoms;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) atoms.push_back({RP1Point(angle(rng)), w(rng)});
  return DiscreteMeasure(atoms, true);
}

DiscreteMeasure uniform_measure(int n) {
  std::vector<Atom> atoms;
  for (int i = 0; i < n; ++i) atoms.push_back({RP1Point(kTwoPi * i / n), 1.0 / n});
  return DiscreteMeasure(atoms, true);
}

// Dense oracle for sum_i f_i w_i s_i.
BlochOp combine(const DiscreteMeasure& mu, const std::vector<double>& f) {
  BlochOp s = BlochOp::zero();
  const auto gens = mu.generators();
  for (std::size_t i = 0; i < gens.size(); ++i) s += f[i] * gens[i];
  return s;
}

}  // namespace

TEST_CASE("measure construction") {
  const DiscreteMeasure mu({{RP1Point(1.0), 0.25}, {RP1Point(0.2), 0.5}, {RP1Point(1.0), 0.25}});
  REQUIRE(mu.size() == 2);
  CHECK(mu.atoms()[0].point.phi == doctest::Approx(0.2));
  CHECK(mu.atoms()[1].weight == doctest::Approx(0.5));
  CHECK_THROWS_AS(DiscreteMeasure({{RP1Point(0.0), 0.5}}), DomainError);
  CHECK_THROWS_AS(DiscreteMeasure({{RP1Point(0.0), -1.0}}, true), DomainError);
  std::istringstream csv("phi,weight\n0.5,2\n3.0,2\n");
  const auto m = read_measure_csv(csv);
  CHECK(m.size() == 2);
  CHECK(m.atoms()[0].weight == doctest::Approx(0.5));
}

TEST_CASE("two-step function evaluation") {
  TwoStepFunction f;
  f.x = RP1Point(0.5);
  f.y = RP1Point(2.0);
  f.q = 0.1;
  f.fx = 0.3;
  f.fy = 0.7;
  CHECK(f(RP1Point(1.0)) == doctest::Approx(0.9));
  CHECK(f(RP1Point(4.0)) == doctest::Approx(0.1));
  CHECK(f(RP1Point(0.5)) == doctest::Approx(0.3));
  CHECK(f(RP1Point(2.0)) == doctest::Approx(0.7));
  CHECK(constant_function(0.5)(RP1Point(3.0)) == 0.5);
  CHECK(constant_function(1.0)(RP1Point(3.0)) == 1.0);
}

TEST_CASE("box membership") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto mu = random_measure(rng, 12);
    CHECK(box_contains(mu, mu.mean()));
    CHECK(box_contains(mu, BlochOp::zero()));
    std::vector<double> f(mu.size());
    for (auto& v : f) v = u(rng);
    const BlochOp z = combine(mu, f);
    CHECK(box_contains(mu, z));
    // Push past the boundary along the direction from the centre.
    const BlochOp c = 0.5 * mu.mean();
    double t = 1.0;
    while (box_contains(mu, c + t * (z - c))) t *= 1.5;
    CHECK_FALSE(box_contains(mu, c + t * 1.01 * (z - c)));
  }
  const auto mu = uniform_measure(8);
  CHECK_FALSE(box_contains(mu, 1.01 * mu.mean()));
  CHECK_FALSE(box_contains(mu, BlochOp{-0.01, 0.0, 0.0}));
}

TEST_CASE("two-step decompositions") {
  const auto mu = uniform_measure(12);
  const auto one = two_step_decompose(mu, mu.mean());
  for (const auto& a : mu.atoms()) CHECK(one(a.point) == 1.0);
  const auto half = two_step_decompose(mu, 0.5 * mu.mean());
  for (const auto& a : mu.atoms()) CHECK(half(a.point) == doctest::Approx(0.5));
  CHECK_THROWS_AS(two_step_decompose(mu, 1.1 * mu.mean()), NotInBox);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = random_measure(rng, 12);
    std::vector<double> f(m.size());
    for (auto& v : f) v = u(rng);
    const BlochOp z = combine(m, f);
    const auto g = two_step_decompose(m, z);
    CHECK(max_abs_diff(apply(m, g), z) < 1e-9);
    CHECK(g.q >= 0.0);
    CHECK(g.q <= 0.5);
    CHECK(g.fx >= g.q - 1e-15);
    CHECK(g.fx <= 1.0 - g.q + 1e-15);
    CHECK(g.fy >= g.q - 1e-15);
    CHECK(g.fy <= 1.0 - g.q + 1e-15);
  }
}

TEST_CASE("boundary points decompose with zero bias") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = random_measure(rng, 12);
    // A zero-bias two-step function built from random endpoints lands on the boundary.
    TwoStepFunction f;
    f.x = RP1Point(u(rng) * kTwoPi);
    f.y = RP1Point(u(rng) * kTwoPi);
    const BlochOp z = apply(m, f);
    const auto g = two_step_decompose(m, z);
    CHECK(g.q == 0.0);
    CHECK(max_abs_diff(apply(m, g), z) < 1e-9);
  }
}

TEST_CASE("slice curve lengths") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = random_measure(rng, 12);
    BlochOp h{1.0, u(rng), u(rng)};
    h = h / std::max(1.0, 1.01 * h.radius());
    h.n = 1.0;
    if (h.radius() >= 0.999) continue;
    const auto c = boundary_slice_curve(m, h, 64);
    CHECK(c.length <= 2.0 + 1e-9);
    // The curve lies on the slice <M, H> = <rho, H> / 2.
    for (const auto& p : c.points) CHECK(inner(p, h) == doctest::Approx(0.5 * inner(m.mean(), h)));
  }
  // Uniform measures, H = I.  Even n: every atom has an orthogonal partner, so
  // dG/dt = I - 2 s_i throughout and the length is exactly 2.  Odd n: the
  // fill front sits between atoms and the length is 2 cos(pi / 2n).
  double prev = 0.0;
  for (int n : {3, 5, 9, 17, 33, 65}) {
    const double len = boundary_slice_curve(uniform_measure(n), BlochOp::identity(), 16).length;
    CHECK(len == doctest::Approx(2.0 * std::cos(kPi / (2 * n))).epsilon(1e-12));
    CHECK(len > prev);
    prev = len;
  }
  for (int n : {8, 16, 64}) CHECK(boundary_slice_curve(uniform_measure(n), BlochOp::identity(), 16).length == doctest::Approx(2.0));
  // Two atoms: the slice is a segment of length sin(d/2), traversed twice.
  for (double d : {0.3, 1.0, kPi - 0.1}) {
    const DiscreteMeasure two({{RP1Point(0.0), 0.5}, {RP1Point(d), 0.5}});
    CHECK(boundary_slice_curve(two, BlochOp::identity(), 32).length == doctest::Approx(2.0 * std::sin(0.5 * d)));
  }
  const DiscreteMeasure two({{RP1Point(0.0), 0.5}, {RP1Point(1.0), 0.5}});
  CHECK_THROWS_AS(boundary_slice_curve(two, BlochOp{1.0, 1.0, 0.0}, 8), DomainError);
}
