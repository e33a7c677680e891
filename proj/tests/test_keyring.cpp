#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "rpsteer/errors.hpp"
#include "rpsteer/keyring.hpp"
#include "rpsteer/search.hpp"

using namespace rpsteer;

namespace {

const Quadrature kQuad{};

}  // namespace

TEST_CASE("response function") {
  CHECK(KeyringModel::response(0.3, 0.3) == 0.0);
  CHECK(KeyringModel::response(0.3, 0.3 + kPi - 1e-9) == 0.0);
  CHECK(KeyringModel::response(0.3, 0.3 + kPi) == 1.0);
  CHECK(KeyringModel::response(0.3, 0.2) == 1.0);
  CHECK(KeyringModel::response(5.0, 0.1) == 0.0);  // wraps past 2 pi
  for (double t : {0.0, 0.7, 2.5, 4.0})
    for (double l : {0.05, 1.3, 3.3, 6.1})
      CHECK(KeyringModel::response(t + kPi, l) == 1.0 - KeyringModel::response(t, l));
}

TEST_CASE("werner density matches its closed form") {
  const double eta = 0.6;
  const auto fam = werner(eta);
  const KeyringModel m = construct_case1(fam, 256);
  // integral_0^pi |X| = (pi eta / 4) I for the werner family.
  const BlochOp noise = ((0.5 - kPi * eta / 4.0) / kTwoPi) * BlochOp::identity();
  for (int j = 0; j < m.grid_n; j += 17) {
    const BlochOp expected = oracle::pos(fam.derivative(m.lambda[j])) + noise;
    CHECK(max_abs_diff(m.sigma[j], expected) < 1e-9);
    CHECK(eig_bounds(m.sigma[j]).min_eig >= -1e-12);
  }
  CHECK(max_abs_diff(m.mass(), fam.rho_b) < 1e-8);
}

TEST_CASE("werner model reproduces the ellipse") {
  const auto fam = werner(0.6);
  const KeyringModel m = construct_case1(fam);
  CHECK(m.grid_n == kDefaultGridN);
  CHECK(verify_model(m, fam) < 1e-6);
  CHECK(trace(m.mass()) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("threshold and noiseless cases") {
  // At eta = 2/pi the noise term vanishes and the model is pure |X|_+.
  const auto edge = werner(2.0 / kPi);
  CHECK(verify_model(construct_case1(edge), edge) < 1e-6);
  // eta = 0: the ellipse is the point I/4 and the model is constant.
  const auto flat = werner(0.0);
  CHECK(verify_model(construct_case1(flat, 64), flat) < 1e-12);
}

TEST_CASE("steerable states have no direct model") {
  CHECK_THROWS_AS(construct_case1(werner(0.7)), PreconditionFailed);
  CHECK_THROWS_AS(build_model(werner(0.7)), PreconditionFailed);
  CHECK_THROWS_AS(construct_case1(werner(0.6), 2), DomainError);
}

TEST_CASE("corrupted models fail verification") {
  const auto fam = werner(0.6);
  KeyringModel m = construct_case1(fam, 512);
  for (int j = 100; j < 140; ++j) m.sigma[j] += BlochOp{0.05, 0.02, 0.0};
  CHECK(verify_model(m, fam) > 1e-3);
}

TEST_CASE("reproduction error is second order in the grid") {
  const auto fam = pure_mixed(0.6, 0.5);
  double prev = 0.0;
  for (int n : {256, 512, 1024}) {
    const double err = verify_model(construct_case1(fam, n), fam);
    if (prev > 0.0) CHECK(prev / err >= 3.5);
    prev = err;
  }
}

TEST_CASE("transform_model") {
  const auto fam = werner(0.6);
  const KeyringModel m = construct_case1(fam, 128);
  for (const BlochOp& y : {BlochOp::identity(), BlochOp{1.0, 0.0, 0.0}}) {
    const KeyringModel t = transform_model(m, y);
    for (int j = 0; j < m.grid_n; ++j) CHECK(max_abs_diff(t.sigma[j], m.sigma[j]) < 1e-14);
  }
  CHECK_THROWS_AS(transform_model(m, BlochOp{1.0, 1.0, 0.0}), SingularY);
  CHECK_THROWS_AS(transform_model(m, BlochOp{-1.0, 0.0, 0.0}), SingularY);
}

TEST_CASE("model through a certifying Y") {
  const auto fam = pure_mixed(0.35, 0.6);
  const auto cert = maximize_min_eig(fam, SearchConfig{});
  REQUIRE(cert.verdict.kind == VerdictKind::Unsteerable);
  const KeyringModel conj = construct_case1(conjugate(fam, cert.y));
  const KeyringModel m = transform_model(conj, cert.y);
  CHECK(verify_model(m, fam) < 1e-6);
  CHECK(trace(m.mass()) == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& s : m.sigma) CHECK(eig_bounds(s).min_eig >= -1e-12);

  // Close to the threshold Y = I no longer suffices on its own.
  const auto near = pure_mixed(0.35, 0.75);
  CHECK_THROWS_AS(construct_case1(near), PreconditionFailed);
  CHECK(verify_model(build_model(near), near) < 1e-6);
}

TEST_CASE("model JSON round trip") {
  const auto fam = depolarized(0.5, 0.8, 0.8);
  const KeyringModel m = build_model(fam, 256);
  std::stringstream ss;
  write_model_json(ss, m);
  const KeyringModel back = read_model_json(ss);
  REQUIRE(back.grid_n == m.grid_n);
  for (int j = 0; j < m.grid_n; ++j) {
    CHECK(back.lambda[j] == m.lambda[j]);
    CHECK(max_abs_diff(back.sigma[j], m.sigma[j]) == 0.0);
  }
  CHECK(verify_model(back, fam) == verify_model(m, fam));

  std::istringstream broken("{\"grid_n\": 8, \"lambda\": [0, 1]");
  CHECK_THROWS_AS(read_model_json(broken), DomainError);
  std::istringstream short_grid(R"({"grid_n": 4, "lambda": [0, 1, 2, 3], "sigma_bloch": [[1, 0, 0]]})");
  CHECK_THROWS_AS(read_model_json(short_grid), DomainError);
}

TEST_CASE("circumference") {
  for (double eta : {0.0, 0.3, 0.6, 1.0}) CHECK(std::abs(circumference(werner(eta)) - kPi * eta) < 1e-9);
  CHECK(circumference(werner(2.0 / kPi)) == doctest::Approx(2.0).epsilon(1e-12));
  // Euclidean length of the (r1, r3) projection of the ellipse, by polygon.
  const auto fam = pure_mixed(0.4, 0.7);
  const int n = 200000;
  double len = 0.0;
  for (int k = 0; k < n; ++k) {
    const BlochOp a = fam.point(kTwoPi * k / n);
    const BlochOp b = fam.point(kTwoPi * (k + 1) / n);
    len += std::hypot(b.r1 - a.r1, b.r3 - a.r3);
  }
  CHECK(circumference(fam) == doctest::Approx(len).epsilon(1e-9));
}
