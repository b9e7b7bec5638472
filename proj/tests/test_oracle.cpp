#include <catch2/catch_amalgamated.hpp>

#include "balex/oracle.hpp"
#include "balex/solvers.hpp"
#include "helpers.hpp"

using namespace balex;

TEST_CASE("brute force on two isolated nodes") {
  const auto inst = testutil::isolated_pair_instance(2);
  const OracleResult best = brute_force_solve(inst, ObjectiveId::phi());
  CHECK_THAT(best.value, Catch::Matchers::WithinAbs(2.0, 1e-12));
  CHECK(best.best == SolutionProfile(PairList{{0, 2}}));
}

TEST_CASE("zero budget leaves only the empty profile") {
  const auto star = testutil::star_instance();
  const auto table = enumerate_values(star, ObjectiveId::phi(), 0);
  REQUIRE(table.size() == 1);
  CHECK(table.front().first.size() == 0);
  CHECK_THAT(table.front().second,
             Catch::Matchers::WithinAbs(exact_value(star, ObjectiveId::phi(), {}), 1e-12));
}

TEST_CASE("brute force on the correlated star finds the center") {
  const auto star = testutil::star_instance(2);
  const OracleResult best = brute_force_solve(star, ObjectiveId::phi());
  CHECK_THAT(best.value, Catch::Matchers::WithinAbs(3.0, 1e-12));
}

TEST_CASE("value tables are complete and consistent") {
  const auto inst = testutil::make_instance(2, 2, 2, 2, Setting::heterogeneous, {{}, {}}, {});
  const auto table = enumerate_values(inst, ObjectiveId::phi(), 2);
  // subsets of 4 pairs with size <= 2: 1 + 4 + 6
  CHECK(table.size() == 11);
  CHECK(table.front().first.size() == 0);
  CHECK_THAT(table.front().second,
             Catch::Matchers::WithinAbs(exact_value(inst, ObjectiveId::phi(), {}), 1e-12));

  double max_value = table.front().second;
  for (const auto& [s, value] : table) max_value = std::max(max_value, value);
  const OracleResult best = brute_force_solve(inst, ObjectiveId::phi());
  CHECK_THAT(max_value, Catch::Matchers::WithinAbs(best.value, 1e-12));
}

TEST_CASE("table for a single node enumerates the campaign subsets") {
  // psi domain on a correlated instance has one pair per node
  const auto star = testutil::star_instance(2);
  const auto table = enumerate_values(star, ObjectiveId::psi(), 2);
  CHECK(table.size() == 1 + 3 + 3);
  for (const auto& [s, value] : table)
    for (const Pair& p : s.pairs) CHECK(p.campaign == 0);
}

TEST_CASE("oracle dominates the solvers") {
  rng::Stream stream(71);
  for (int trial = 0; trial < 3; ++trial) {
    const auto inst = testutil::random_instance(rng::Stream(stream.next()), 4, 2, 2, 2,
                                                Setting::correlated, 4, 3);
    const OracleResult best = brute_force_solve(inst, ObjectiveId::phi());
    SolverConfig cfg;
    cfg.epsilon = 0.3;
    cfg.delta = 0.2;
    cfg.master_seed = trial;
    cfg.sample_cap = 400;
    const SolverReport report = solve_correlated(inst, cfg);
    const double achieved = exact_value(inst, ObjectiveId::phi(), report.chosen);
    CHECK(achieved <= best.value + 1e-9);
  }
}

TEST_CASE("oracle enforces its evaluation ceiling") {
  const auto inst = testutil::make_instance(20, 2, 2, 10, Setting::heterogeneous,
                                            {{}, {}}, {});
  CHECK_THROWS_AS(brute_force_solve(inst, ObjectiveId::phi()), LimitError);
  OracleLimit tiny;
  tiny.max_evaluations = 4;
  CHECK_THROWS_AS(enumerate_values(testutil::isolated_pair_instance(2), ObjectiveId::phi(), 2,
                                   tiny),
                  LimitError);
}
