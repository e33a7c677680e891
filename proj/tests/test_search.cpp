#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rpsteer/errors.hpp"
#include "rpsteer/search.hpp"

using namespace rpsteer;

namespace {

const double kTwoOverPi = 2.0 / kPi;

double werner_margin(double eta) { return 0.5 - kPi * eta / 4.0; }

}  // namespace

TEST_CASE("maximize_min_eig on werner states") {
  const SearchConfig cfg;
  const auto r = maximize_min_eig(werner(0.6), cfg);
  CHECK(r.verdict.kind == VerdictKind::Unsteerable);
  CHECK(r.value == doctest::Approx(werner_margin(0.6)).epsilon(1e-8));
  CHECK(max_abs_diff(r.y, BlochOp{1.0, 0.0, 0.0}) < 1e-6);

  // Steerable: no probe gives a nonnegative minimum eigenvalue.
  const auto fam = werner(0.7);
  for (const auto& y : probe_starts(cfg.probe_grid)) CHECK(verdict_with(fam, y, cfg.quad).min_eig < 0.0);
  CHECK(maximize_min_eig(fam, cfg).verdict.kind != VerdictKind::Unsteerable);
}

TEST_CASE("minimize_max_eig on werner states") {
  const SearchConfig cfg;
  const auto r = minimize_max_eig(werner(0.7), cfg);
  CHECK(r.verdict.kind == VerdictKind::Steerable);
  CHECK(r.value == doctest::Approx(werner_margin(0.7)).epsilon(1e-8));
  CHECK(max_abs_diff(r.y, BlochOp{1.0, 0.0, 0.0}) < 1e-6);

  const auto fam = werner(0.6);
  for (const auto& y : probe_starts(cfg.probe_grid)) CHECK(verdict_with(fam, y, cfg.quad).max_eig > 0.0);
  CHECK(minimize_max_eig(fam, cfg).verdict.kind != VerdictKind::Steerable);
}

TEST_CASE("equivalent families give the same search results") {
  const SearchConfig cfg;
  for (double eta : {0.6, 0.7}) {
    const auto a = maximize_min_eig(werner(eta), cfg);
    const auto b = maximize_min_eig(pure_mixed(kPi / 4.0, eta), cfg);
    CHECK(a.verdict.kind == b.verdict.kind);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-9));
  }
  const auto w = minimize_max_eig(werner(0.7), cfg);
  const auto d = minimize_max_eig(depolarized(kPi / 4.0, 1.0, 0.7), cfg);
  CHECK(d.verdict.kind == VerdictKind::Steerable);
  CHECK(d.value == doctest::Approx(w.value).epsilon(1e-9));
}

TEST_CASE("search rejects tilted ellipses and bad configs") {
  CHECK_THROWS_AS(maximize_min_eig(pure_mixed(0.0, 0.5), SearchConfig{}), TiltTooLarge);
  SearchConfig bad;
  bad.step_decay = 1.5;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = SearchConfig{};
  bad.bisect_iters = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("probe starts") {
  const auto p = probe_starts(9);
  REQUIRE(p.size() == 9);
  CHECK(max_abs_diff(p[0], BlochOp{1.0, 0.0, 0.0}) == 0.0);
  for (const auto& y : p) {
    CHECK(y.n == 1.0);
    CHECK(y.radius() < 1.0);
  }
}

TEST_CASE("thresholds at the maximally entangled angle") {
  const SearchConfig cfg;
  const auto lo = eta_lower(kPi / 4.0, cfg);
  const auto hi = eta_upper(kPi / 4.0, cfg);
  CHECK(std::abs(lo.eta - kTwoOverPi) < 1e-4);
  CHECK(std::abs(hi.eta - kTwoOverPi) < 1e-4);
  // The PSD tolerance lets certificates pass up to ~1e-8 beyond the exact threshold.
  CHECK(lo.eta <= kTwoOverPi + 1e-7);
  CHECK(hi.eta >= kTwoOverPi - 1e-7);

  SearchConfig coarse;
  coarse.bisect_iters = 1;
  const auto c_lo = eta_lower(kPi / 4.0, coarse);
  const auto c_hi = eta_upper(kPi / 4.0, coarse);
  CHECK(c_lo.eta <= kTwoOverPi);
  CHECK(c_hi.eta >= kTwoOverPi);
  CHECK(c_hi.eta - c_lo.eta <= 0.5 + 1e-12);
}

TEST_CASE("boundary point replays its certificate") {
  const SearchConfig cfg;
  for (double alpha : {0.35, 0.6}) {
    const auto p = boundary_point(alpha, cfg);
    REQUIRE(p.valid);
    CHECK(p.eta_upper >= p.eta_lower);
    CHECK(p.eta_upper - p.eta_lower < 1e-3);
    CHECK(verdict_with(pure_mixed(alpha, p.eta_lower - 1e-4), p.y, cfg.quad).kind == VerdictKind::Unsteerable);
    CHECK(verdict_with(pure_mixed(alpha, p.eta_upper + 1e-4), p.y, cfg.quad).kind == VerdictKind::Steerable);
    // Convexity of the unsteerable set: certified everywhere below.
    for (double f : {0.25, 0.5, 0.9})
      CHECK(verdict_with(pure_mixed(alpha, f * p.eta_lower), p.y, cfg.quad).kind == VerdictKind::Unsteerable);
  }
}

TEST_CASE("product-state angle is reported unsteerable to 1") {
  const auto p = boundary_point(0.0, SearchConfig{});
  CHECK(p.eta_lower == 1.0);
  CHECK(p.eta_upper == 1.0);
  CHECK_FALSE(p.valid);
}

TEST_CASE("depolarized sweep points") {
  const SearchConfig cfg;
  const auto p = depolarizing_point(0.8, kPi / 4.0, cfg);
  CHECK(p.valid);
  CHECK(p.eta_lower <= kTwoOverPi / 0.8 + 1e-7);
  CHECK(p.eta_upper >= kTwoOverPi / 0.8 - 1e-7);
  CHECK(p.eta_upper - p.eta_lower < 5e-4);

  // Below 2/pi on Alice's side everything is unsteerable.
  const auto q = depolarizing_point(kTwoOverPi, 0.5, cfg);
  CHECK(q.valid);
  CHECK(q.eta_lower == 1.0);
  CHECK(q.eta_upper == 1.0);
  CHECK(verdict_with(depolarized(0.5, kTwoOverPi, 1.0), q.y, cfg.quad).kind == VerdictKind::Unsteerable);

  // Small angle with a noiseless Alice: the certified region does not reach
  // down to the tilt line, so the row is flagged.
  const auto r = depolarizing_point(1.0, 0.30, cfg);
  CHECK_FALSE(r.valid);
  CHECK(r.tilt_line == doctest::Approx(std::cos(0.60)));
}

TEST_CASE("linear grid") {
  CHECK(linear_grid(0.1, 0.5, 1) == std::vector<double>{0.5});
  const auto g = linear_grid(0.0, 1.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[2] == doctest::Approx(0.5));
}

TEST_CASE("sweep CSV is deterministic and round trips") {
  SearchConfig cfg;
  cfg.bisect_iters = 12;
  const std::vector<double> alphas{0.5, kPi / 4.0};
  std::ostringstream a, b;
  write_boundary_csv(a, boundary_curve(alphas, cfg));
  cfg.threads = 1;
  write_boundary_csv(b, boundary_curve(alphas, cfg));
  CHECK(a.str() == b.str());

  std::istringstream in(a.str());
  const auto rows = read_boundary_csv(in);
  REQUIRE(rows.size() == 2);
  std::ostringstream c;
  write_boundary_csv(c, rows);
  CHECK(c.str() == a.str());
  CHECK(a.str().rfind("alpha,eta_lower,eta_upper,valid,Y_n,Y_r1,Y_r3\n", 0) == 0);

  std::ostringstream d;
  write_boundary_csv(d, rows, true);
  CHECK(d.str().rfind("alpha,eta_lower,eta_upper,valid,Y_n,Y_r1,Y_r3,tilt_line\n", 0) == 0);

  std::istringstream bad("alpha,eta_lower\n0.1,zz\n");
  CHECK_THROWS_AS(read_boundary_csv(bad), DomainError);
}
