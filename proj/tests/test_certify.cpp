#include <doctest.h>

#include "tripleforge/certify.hpp"

using namespace tripleforge;

TEST_SUITE_BEGIN("certify");

TEST_CASE("the shipped resource passes every check family") {
  auto rep = verify_g_and(build_g_and_spec());
  CHECK(rep.passed());
  CHECK(rep.failures() == 0);
  // every expected record is present
  for (const char* name :
       {"backend.branch-agreement", "eq8.outcome-identities.tableau",
        "eq8.outcome-identities.dense", "eq9.total-xor.tableau", "eq9.total-xor.dense",
        "table1.post-arm-form", "table1.row(0,0).bases", "table1.row(0,0).xor",
        "table1.row(1,1).bases", "table1.row(1,1).xor", "eq7.residual.A.dense",
        "eq7.residual.A.tableau", "eq7.residual.B.dense", "eq7.residual.B.tableau",
        "eq7.residual.R.dense", "eq7.residual.R.tableau", "ownership.no-early-pq"}) {
    const CertCheck* c = rep.find(name);
    REQUIRE(c != nullptr);
    CHECK(c->pass);
  }
  auto j = rep.to_json();
  CHECK(j.at("passed") == true);
  CHECK(j.at("checks").size() == rep.checks.size());
}

TEST_CASE("dropping edge {9,12} breaks the first conditional test row") {
  auto rep = verify_g_and(mutate_drop_edge(build_g_and_spec(), 9, 12));
  CHECK(!rep.passed());
  const CertCheck* row = rep.find("table1.row(0,0).bases");
  REQUIRE(row != nullptr);
  CHECK(!row->pass);
  CHECK(!row->witness.empty());
}

TEST_CASE("adding edge {9,10} is caught as a row (0,1) basis mismatch") {
  auto rep = verify_g_and(mutate_add_edge(build_g_and_spec(), 9, 10));
  CHECK(!rep.passed());
  const CertCheck* row = rep.find("table1.row(0,1).bases");
  REQUIRE(row != nullptr);
  CHECK(!row->pass);
  // the first row's operator is untouched by that edge
  const CertCheck* row00 = rep.find("table1.row(0,0).bases");
  REQUIRE(row00 != nullptr);
  CHECK(row00->pass);
}

TEST_CASE("mutation helpers validate their input") {
  CHECK_THROWS_AS((void)mutate_drop_edge(build_g_and_spec(), 9, 10), std::invalid_argument);
  CHECK_THROWS_AS((void)mutate_add_edge(build_g_and_spec(), 9, 12), std::invalid_argument);
}

TEST_SUITE_END();
