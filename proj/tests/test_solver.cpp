#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <span>

#include <laacoex/rng.hpp>
#include <laacoex/solver.hpp>

using namespace laacoex;

namespace {

RateParams table_rates(double lambda_l) {
  RateParams r;
  r.lambda_l = lambda_l;
  r.lambda_w = 5;
  r.mu_lu = 25;
  r.mu_w = 40;
  r.mu_s = 1;
  r.mu_on = 0.1;
  r.mu_off = 0.1;
  return r;
}

// Frozen stationary dropping probabilities for the reference operating
// point (mu_w=40, mu_lu=25, mu_on=mu_off=0.1, mu_s=1, lambda_w=5, Q=2),
// computed with an independent dense linear solve of the same chain.
struct Frozen {
  double lambda_l, p_bl, p_bw;
};
constexpr Frozen kUfa[] = {{25, 0.254816552, 0.745183448},
                           {37, 0.412706360, 0.869194587},
                           {50, 0.534964029, 0.930071942},
                           {62.5, 0.616698030, 0.958254924},
                           {120, 0.793288241, 0.992216445}};
constexpr Frozen kUta[] = {{25, 0.415031868, 0.584727621},
                           {37, 0.535499265, 0.687300082},
                           {50, 0.631052917, 0.737787726},
                           {62.5, 0.695504994, 0.761162778},
                           {120, 0.835559788, 0.789290037}};

}  // namespace

TEST_CASE("direct solve reproduces frozen reference-chain values") {
  for (const auto& [scheme, rows] :
       {std::pair{Scheme::UFA, std::span(kUfa)},
        std::pair{Scheme::UTA, std::span(kUta)}}) {
    const SchemeConfig c{scheme, 1, 2, 1, false};
    for (const Frozen& f : rows) {
      const DirectResult d = solve_direct(c, table_rates(f.lambda_l));
      const DroppingProbabilities p = dropping_probabilities(d.dist, c);
      CHECK(p.p_bl == Catch::Approx(f.p_bl).margin(1e-9));
      CHECK(p.p_bw == Catch::Approx(f.p_bw).margin(1e-9));
    }
  }
}

TEST_CASE("iterative solve agrees with the direct oracle") {
  Rng rng(123);
  auto logu = [&](double lo, double hi) {
    return lo * std::exp(rng.uniform01() * std::log(hi / lo));
  };
  for (Scheme s : {Scheme::UFA, Scheme::UTA, Scheme::UFAB, Scheme::UTAB}) {
    for (int Q : {1, 2, 4}) {
      if (scheme_has_threshold(s) && Q < 2) continue;
      const SchemeConfig c{s, 1, Q, Q > 2 ? 2 : 1, false};
      for (int k = 0; k < 5; ++k) {
        RateParams r;
        r.lambda_l = logu(0.2, 8);
        r.lambda_w = logu(0.2, 8);
        r.mu_lu = logu(0.2, 8);
        r.mu_w = logu(0.2, 8);
        r.mu_s = logu(0.2, 8);
        r.mu_on = logu(0.2, 8);
        r.mu_off = logu(0.2, 8);
        const DirectResult d = solve_direct(c, r);
        SolverSettings settings;
        settings.alpha = 1e-10;
        settings.max_iterations = 10'000'000;
        const IterativeResult it = solve_iterative(c, r, settings);
        REQUIRE(it.dist.pi.size() == d.dist.pi.size());
        for (std::size_t i = 0; i < d.dist.pi.size(); ++i)
          CHECK(it.dist.pi[i] == Catch::Approx(d.dist.pi[i]).margin(1e-6));
      }
    }
  }
}

TEST_CASE("stationary distributions are normalized and non-negative") {
  const SchemeConfig c{Scheme::UTAB, 1, 4, 2, false};
  const RateParams r = table_rates(37);
  for (const std::vector<double>& pi :
       {solve_direct(c, r).dist.pi, solve_iterative(c, r).dist.pi}) {
    double total = 0;
    for (double p : pi) {
      CHECK(p >= 0.0);
      total += p;
    }
    CHECK(total == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("UFA with no Wi-Fi arrivals reduces to M/M/1/(Q+1)") {
  // Blocking of M/M/1/K with K = Q + 1 waiting+service positions:
  //   B = (1 - rho) rho^K / (1 - rho^{K+1}),   B = 1/(K+1) at rho = 1.
  for (double rho : {0.25, 0.5, 1.0, 2.0}) {
    for (int Q = 1; Q <= 5; ++Q) {
      const SchemeConfig c{Scheme::UFA, 1, Q, 1, false};
      RateParams r;
      r.lambda_l = rho;
      r.lambda_w = 0;
      r.mu_lu = 1;
      const int K = Q + 1;
      const double expected =
          rho == 1.0 ? 1.0 / (K + 1)
                     : (1 - rho) * std::pow(rho, K) /
                           (1 - std::pow(rho, K + 1));
      const DroppingProbabilities pd =
          dropping_probabilities(solve_direct(c, r).dist, c);
      CHECK(pd.p_bl == Catch::Approx(expected).margin(1e-12));
      SolverSettings settings;
      settings.alpha = 1e-12;
      const DroppingProbabilities pi =
          dropping_probabilities(solve_iterative(c, r, settings).dist, c);
      CHECK(pi.p_bl == Catch::Approx(expected).margin(1e-9));
    }
  }
  // The symmetric case is exact in the direct solve.
  const SchemeConfig c{Scheme::UFA, 1, 2, 1, false};
  RateParams r;
  r.lambda_l = 1;
  r.lambda_w = 0;
  r.mu_lu = 1;
  CHECK(dropping_probabilities(solve_direct(c, r).dist, c).p_bl == 0.25);
}

TEST_CASE("unreachable and transient states are pruned with zero mass") {
  SECTION("UFA cannot hold queued packets on an empty channel") {
    const SchemeConfig c{Scheme::UFA, 1, 2, 1, false};
    const DirectResult d = solve_direct(c, table_rates(25));
    for (int z : {1, 2}) {
      CHECK(d.dist.at({2, 0, 0, z}) == 0.0);
      CHECK(std::find(d.pruned.begin(), d.pruned.end(),
                      SystemState{2, 0, 0, z}) != d.pruned.end());
    }
  }
  SECTION("no LAA arrivals leaves the LAA-busy states transient") {
    const SchemeConfig c{Scheme::UFA, 1, 2, 1, false};
    RateParams r = table_rates(25);
    r.lambda_l = 0;
    const DirectResult d = solve_direct(c, r);
    CHECK(d.dist.at({2, 1, 0, 0}) == 0.0);
    CHECK(d.dist.at({2, 0, 0, 0}) + d.dist.at({2, 0, 1, 0}) ==
          Catch::Approx(1.0).margin(1e-12));
    // Classic M/M/1/1: blocking = rho / (1 + rho) with rho = 5/40.
    CHECK(d.dist.at({2, 0, 1, 0}) == Catch::Approx(0.125 / 1.125).margin(1e-12));
  }
}

TEST_CASE("solver settings are validated") {
  const SchemeConfig c{Scheme::UFA, 1, 2, 1, false};
  const RateParams r = table_rates(25);
  SolverSettings s;
  s.alpha = 0;
  CHECK_THROWS_AS(solve_iterative(c, r, s), ConfigError);
  s.alpha = 1e-6;
  s.init = std::vector<double>(3, 1.0);  // wrong length: space has 9 states
  CHECK_THROWS_AS(solve_iterative(c, r, s), ConfigError);
}

TEST_CASE("iteration cap raises NonConvergence") {
  const SchemeConfig c{Scheme::UTA, 1, 2, 1, false};
  SolverSettings s;
  s.max_iterations = 1;
  CHECK_THROWS_AS(solve_iterative(c, table_rates(25), s), NonConvergence);
}

TEST_CASE("iteration count is reported") {
  const SchemeConfig c{Scheme::UFA, 1, 2, 1, false};
  const IterativeResult it = solve_iterative(c, table_rates(25));
  CHECK(it.iterations >= 2);
  CHECK(it.iterations < 100'000);
}
