#include <doctest.h>

#include "tripleforge/audit.hpp"

using namespace tripleforge;

TEST_SUITE_BEGIN("audit");

TEST_CASE("residual stabilizer with all honest outcomes zero") {
  std::array<int, 12> m{};
  auto rs = residual_stabilizer(Party::A, m);
  CHECK(rs.generators[0].str() == "+ZIIIIIIIIIII");
  CHECK(rs.generators[1].str() == "+IIIIXIIIIIII");
  CHECK(rs.generators[2].str() == "+IIIIIIIIIXXI");
  CHECK(rs.generators[3].str() == "+IIIIIIIIIZZI");
  for (const auto& g : rs.generators) {
    CHECK(g.hermitian());
    for (const auto& h : rs.generators) CHECK(commutes(g, h));
  }
}

TEST_CASE("residual stabilizer conditional axes for R") {
  std::array<int, 12> m{};
  m[7] = 1;  // s = 1: the last generator rotates from X12 to Y12
  auto rs0 = residual_stabilizer(Party::R, std::array<int, 12>{});
  auto rs1 = residual_stabilizer(Party::R, m);
  CHECK(rs0.generators[3].str() == "+IIIIIIIIIIIX");
  CHECK(rs1.generators[3].str() == "+IIIIIIIIIIIY");
  CHECK(rs1.generators[2].str() == "-IIIIIIXIIIII");
}

TEST_CASE("two-party corruption is out of theorem scope") {
  std::array<int, 12> m{};
  CHECK_THROWS_AS((void)residual_stabilizer(std::set<Party>{Party::A, Party::B}, m),
                  unsupported_by_theorem);
  CHECK_NOTHROW((void)residual_stabilizer(std::set<Party>{Party::R}, m));
}

TEST_CASE("honest-pair runs leave exactly the residual stabilizer, both backends") {
  auto spec = build_g_and_spec();
  for (Party corrupted : {Party::A, Party::B, Party::R}) {
    for_each_branch([&](ScriptedCoin& coin) {
      ScriptedCoin replay(coin.bits);
      TableauBackend tab{GraphBasisState(spec.graph, 0)};
      auto m = run_honest_pair(tab, corrupted, coin);
      DenseBackend den{GraphBasisState(spec.graph, 0)};
      run_honest_pair(den, corrupted, replay);
      auto rs = residual_stabilizer(corrupted, m);
      for (const auto& g : rs.generators) {
        CHECK(tab.state.contains(g) == Sign::Plus);
        CHECK(den.state.expectation(g) == doctest::Approx(1.0).epsilon(1e-8));
      }
    });
  }
}

TEST_CASE("joint X10 X11 attack reads q^s without disturbing the honest parties") {
  Distribution<std::array<int, 8>> honest, attacked;
  // honest-party outcome vector: everything B and R measure
  auto honest_key = [](const std::array<int, 12>& m) {
    return std::array<int, 8>{m[1], m[2], m[3], m[5], m[6], m[7], m[8], m[11]};
  };
  std::map<std::array<int, 2>, uint64_t> qs_counts;
  for_each_branch([&](ScriptedCoin& coin) {
    TableauBackend backend{build_g_and_state()};
    auto r = run_pi_and(backend, coin);
    honest.add(honest_key(r.outcomes), (int)coin.bits.size());
  });
  for_each_branch([&](ScriptedCoin& coin) {
    TableauBackend backend{build_g_and_state()};
    auto ar = astar_joint_attack(backend, coin);
    CHECK(ar.attack_deterministic);
    int q = ar.outcomes[3], s = ar.outcomes[6];
    CHECK(ar.attack_outcome == (q ^ s));
    attacked.add(honest_key(ar.outcomes), (int)coin.bits.size());
    qs_counts[{q, ar.attack_outcome}]++;
  });
  CHECK(honest == attacked);
  // P(q=0 | q^s) = 1/2: both values of q equally likely for each outcome
  for (int out = 0; out < 2; out++) {
    CHECK(qs_counts[{0, out}] == qs_counts[{1, out}]);
  }
}

TEST_CASE("cq marginal of every corrupted role is I/16") {
  auto spec = build_g_and_spec();
  for (Party x : {Party::A, Party::B, Party::R}) {
    auto rep = cq_marginal(x, spec);
    CHECK(rep.maximally_mixed);
  }
}

TEST_CASE("simulator substitution example") {
  TripleShares ideal;
  ideal.p = 1;
  ideal.share_a = 1;
  ScriptedCoin coin({0, 1});  // x=0, y=1
  auto out = simulator_S(Party::A, ideal, coin);
  CHECK(out.phases == std::array<int, 4>{1, 0, 1, 0});
  CHECK(out.view == std::array<int, 4>{1, 0, 1, 1});
}

TEST_CASE("degenerate simulator inputs give the all-plus stabilizer phases") {
  TripleShares ideal{};
  for (Party x : {Party::A, Party::B, Party::R}) {
    ScriptedCoin coin;
    auto out = simulator_S(x, ideal, coin);
    CHECK(out.phases == std::array<int, 4>{0, 0, 0, 0});
  }
}

TEST_CASE("real and simulated worlds are identical for every corrupted role") {
  auto spec = build_g_and_spec();
  for (Party x : {Party::A, Party::B, Party::R}) {
    auto rep = indistinguishability_test(x, spec);
    CHECK(rep.tv_zero);
    CHECK(rep.tv_numerator == 0);
    CHECK(rep.conditionals_half);
  }
}

TEST_CASE("sabotaged simulator is detected") {
  auto rep = indistinguishability_test(Party::A, build_g_and_spec(), true);
  CHECK(!rep.tv_zero);
  CHECK(rep.tv_numerator > 0);
  CHECK(!rep.witness.empty());
}

TEST_SUITE_END();
