#include <catch2/catch_amalgamated.hpp>

#include <laacoex/model.hpp>

using namespace laacoex;

TEST_CASE("scheme names round-trip") {
  for (Scheme s :
       {Scheme::UFA, Scheme::UTA, Scheme::UFAB, Scheme::UTAB})
    CHECK(parse_scheme(scheme_name(s)) == s);
  CHECK_THROWS_AS(parse_scheme("foo"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scheme("UFA"), std::invalid_argument);  // lowercase only
}

TEST_CASE("scheme classification") {
  CHECK_FALSE(scheme_has_phases(Scheme::UFA));
  CHECK(scheme_has_phases(Scheme::UTA));
  CHECK_FALSE(scheme_has_phases(Scheme::UFAB));
  CHECK(scheme_has_phases(Scheme::UTAB));
  CHECK_FALSE(scheme_has_threshold(Scheme::UFA));
  CHECK_FALSE(scheme_has_threshold(Scheme::UTA));
  CHECK(scheme_has_threshold(Scheme::UFAB));
  CHECK(scheme_has_threshold(Scheme::UTAB));
}

TEST_CASE("scheme config validation") {
  SchemeConfig c{Scheme::UFA, 1, 2, 1, false};
  CHECK_NOTHROW(c.validate());
  c.D = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.D = 1;
  c.Q = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);

  SECTION("threshold bounds") {
    SchemeConfig t{Scheme::UFAB, 1, 3, 2, false};
    CHECK_NOTHROW(t.validate());
    t.q_theta = 3;  // == Q, needs the relaxed bound
    CHECK_THROWS_AS(t.validate(), ConfigError);
    t.relax_threshold = true;
    CHECK_NOTHROW(t.validate());
    t.q_theta = 4;
    CHECK_THROWS_AS(t.validate(), ConfigError);
    t.q_theta = 0;
    CHECK_THROWS_AS(t.validate(), ConfigError);
  }

  SECTION("Q=1 threshold scheme has no strict threshold") {
    SchemeConfig t{Scheme::UTAB, 1, 1, 1, false};
    CHECK_THROWS_AS(t.validate(), ConfigError);
    t.relax_threshold = true;
    CHECK_NOTHROW(t.validate());
  }

  SECTION("analytic solving requires D = 1") {
    SchemeConfig t{Scheme::UFA, 2, 2, 1, false};
    CHECK_NOTHROW(t.validate());
    CHECK_THROWS_AS(t.validate_analytic(), ConfigError);
  }
}

TEST_CASE("state legality") {
  const SchemeConfig ufa{Scheme::UFA, 1, 2, 1, false};
  const SchemeConfig uta{Scheme::UTA, 1, 2, 1, false};
  CHECK(ufa.state_legal({2, 0, 0, 0}));
  CHECK(ufa.state_legal({2, 1, 0, 2}));
  CHECK_FALSE(ufa.state_legal({2, 1, 1, 0}));  // x + y > D
  CHECK_FALSE(ufa.state_legal({2, 0, 0, 3}));  // z > Q
  CHECK_FALSE(ufa.state_legal({1, 0, 0, 0}));  // UFA phase frozen at On
  CHECK(uta.state_legal({0, 0, 0, 0}));
  CHECK(uta.state_legal({1, 0, 1, 2}));
  CHECK_FALSE(uta.state_legal({3, 0, 0, 0}));
  CHECK_FALSE(uta.state_legal({2, -1, 0, 0}));
}

TEST_CASE("rate params validation and derived pickup rate") {
  RateParams r;
  r.lambda_l = 25;
  r.lambda_w = 5;
  r.mu_lu = 25;
  r.mu_w = 40;
  r.mu_s = 1;
  r.mu_on = 0.1;
  r.mu_off = 0.1;
  CHECK_NOTHROW(r.validate());
  CHECK(r.mu_on_prime() == Catch::Approx(1.0));  // always 10 * mu_on

  SECTION("zero arrivals are allowed, zero services are not") {
    r.lambda_l = 0;
    r.lambda_w = 0;
    CHECK_NOTHROW(r.validate());
    r.mu_w = 0;
    CHECK_THROWS_AS(r.validate(), ConfigError);
  }
  SECTION("negative arrival rejected") {
    r.lambda_l = -1;
    CHECK_THROWS_AS(r.validate(), ConfigError);
  }
}

TEST_CASE("state helpers") {
  SystemState n{2, 1, 0, 1};
  CHECK(n.free_channels(2) == 1);
  CHECK(n.free_queue_slots(3) == 2);
  CHECK(n.to_string() == "(2,1,0,1)");
  CHECK(SystemState{2, 0, 0, 0} < SystemState{2, 0, 0, 1});
}
