#include <catch2/catch_amalgamated.hpp>

#include <laacoex/rng.hpp>
#include <laacoex/transitions.hpp>

using namespace laacoex;

namespace {

RateParams table_rates(double lambda_l = 25) {
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

}  // namespace

TEST_CASE("transition targets are legal and rates positive") {
  for (Scheme s : {Scheme::UFA, Scheme::UTA, Scheme::UFAB, Scheme::UTAB}) {
    const SchemeConfig c{s, 1, 3, 2, false};
    const RateParams r = table_rates();
    for (const SystemState& n : enumerate_states(c).states) {
      for (const Transition& t : transition_list(n, c, r)) {
        CHECK(c.state_legal(t.target));
        CHECK(t.rate > 0);
        CHECK(t.target != n);
      }
    }
  }
}

TEST_CASE("transition rates follow the indicator roles") {
  const SchemeConfig c{Scheme::UTA, 1, 2, 1, false};
  const RateParams r = table_rates();

  // On, idle, one queued packet: Wi-Fi arrival, queued-packet pickup at
  // rate mu_on' = 10 * mu_on, and phase expiry. LAA arrivals are dropped
  // here (direct service needs an empty queue, buffering a full channel).
  const SystemState n{2, 0, 0, 1};
  auto ts = transition_list(n, c, r);
  REQUIRE(ts.size() == 3);
  double pickup = 0, expiry = 0;
  for (const Transition& t : ts) {
    if (t.target == SystemState{2, 1, 0, 0}) pickup = t.rate;
    if (t.target == SystemState{1, 0, 0, 1}) expiry = t.rate;
  }
  CHECK(pickup == Catch::Approx(r.mu_on_prime()));
  CHECK(expiry == Catch::Approx(r.mu_on));

  // Handover carries the y * mu_w rate and moves three coordinates at once.
  auto hs = transition_list({2, 0, 1, 1}, c, r);
  bool found = false;
  for (const Transition& t : hs)
    if (t.target == SystemState{2, 1, 0, 0}) {
      found = true;
      CHECK(t.rate == Catch::Approx(1 * r.mu_w));
    }
  CHECK(found);
}

TEST_CASE("zero-rate arrivals are omitted from the list") {
  const SchemeConfig c{Scheme::UFA, 1, 2, 1, false};
  RateParams r = table_rates();
  r.lambda_w = 0;
  for (const Transition& t : transition_list({2, 0, 0, 0}, c, r))
    CHECK(t.target != SystemState{2, 0, 1, 0});
}

TEST_CASE("eps_B equals the summed outgoing rates") {
  for (Scheme s : {Scheme::UFA, Scheme::UTA, Scheme::UFAB, Scheme::UTAB}) {
    const SchemeConfig c{s, 1, 3, 2, false};
    const RateParams r = table_rates();
    const StateSpace sp = enumerate_states(c);
    std::vector<double> pi(sp.size(), 1.0 / double(sp.size()));
    const PiView view{sp, pi};
    for (const SystemState& n : sp.states) {
      double total = 0;
      for (const Transition& t : transition_list(n, c, r)) total += t.rate;
      const BalanceTerms b = balance_terms(n, view, c, r);
      CHECK(b.eps_B == Catch::Approx(total).margin(1e-12));
    }
  }
}

TEST_CASE("eps_A agrees with the reverse of the transition lists") {
  // The inflow side of the balance equation (mirror indicators with their
  // explicit neighbor states) must match brute-force reversal of all
  // outgoing transitions, for an arbitrary positive pi.
  Rng rng(7);
  for (Scheme s : {Scheme::UFA, Scheme::UTA, Scheme::UFAB, Scheme::UTAB}) {
    const SchemeConfig c{s, 1, 4, 2, false};
    const RateParams r = table_rates(31.0);
    const StateSpace sp = enumerate_states(c);
    std::vector<double> pi(sp.size());
    for (double& p : pi) p = 0.1 + rng.uniform01();
    const PiView view{sp, pi};

    std::vector<double> inflow(sp.size(), 0.0);
    for (std::size_t i = 0; i < sp.size(); ++i)
      for (const Transition& t : transition_list(sp.states[i], c, r))
        inflow[sp.index(t.target)] += t.rate * pi[i];

    for (std::size_t i = 0; i < sp.size(); ++i) {
      const BalanceTerms b = balance_terms(sp.states[i], view, c, r);
      CHECK(b.eps_A == Catch::Approx(inflow[i]).margin(1e-9));
    }
  }
}

TEST_CASE("structurally isolated states are detected") {
  // UFA cannot reach (2,0,0,z) with z > 0: an empty channel with a
  // non-empty queue has neither inflow nor outflow.
  const SchemeConfig c{Scheme::UFA, 1, 2, 1, false};
  const RateParams r = table_rates();
  const StateSpace sp = enumerate_states(c);
  std::vector<double> pi(sp.size(), 1.0 / double(sp.size()));
  const PiView view{sp, pi};
  for (int z : {1, 2}) {
    const BalanceTerms b = balance_terms({2, 0, 0, z}, view, c, r);
    CHECK(b.eps_B == 0.0);
    CHECK(b.eps_A == 0.0);
    CHECK(b.structurally_isolated);
  }
  CHECK_FALSE(balance_terms({2, 0, 0, 0}, view, c, r).structurally_isolated);
}
