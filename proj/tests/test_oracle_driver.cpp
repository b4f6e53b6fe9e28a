#include <gtest/gtest.h>

#include "cpfsat/driver.hpp"
#include "cpfsat/oracle.hpp"
#include "support.hpp"

using namespace cpfsat;

namespace {

int makespan_of(const SolveOutcome& o) {
  auto* opt = std::get_if<Optimal>(&o);
  return opt ? opt->makespan : -1;
}

}  // namespace

TEST(Oracle, HandInstances) {
  EXPECT_EQ(oracle_makespan(testkit::p3(), 10).makespan, 2);
  OracleResult c4 = oracle_makespan(testkit::c4(), 10);
  EXPECT_EQ(c4.makespan, 2);
  EXPECT_TRUE(validate_solution(c4.witness, testkit::c4()));
  EXPECT_EQ(metrics(c4.witness).makespan, 2);
  OracleResult sw = oracle_makespan(testkit::swap2(), 10);
  EXPECT_FALSE(sw.solved());
  EXPECT_EQ(sw.states, 1);
}

TEST(Oracle, C4AllPlacements) {
  // every one of the 12 injective two-agent placements is a reachable goal
  CpfInstance c4 = testkit::c4();
  int reachable = 0;
  for (VertexId a = 0; a < 4; ++a)
    for (VertexId b = 0; b < 4; ++b) {
      if (a == b) continue;
      CpfInstance inst(c4.graph, c4.initial, Arrangement(4, {a, b}));
      OracleResult r = oracle_makespan(inst, 10);
      EXPECT_EQ(r.makespan, testkit::naive_makespan(inst, 10));
      reachable += r.solved();
    }
  EXPECT_EQ(reachable, 12);
}

TEST(Oracle, Decision) {
  CpfInstance p3 = testkit::p3();
  EXPECT_FALSE(oracle_decision(p3, 1));
  EXPECT_TRUE(oracle_decision(p3, 2));
  EXPECT_TRUE(oracle_decision(p3, 3));
  CpfInstance still(p3.graph, p3.initial, p3.initial);
  EXPECT_TRUE(oracle_decision(still, 0));
  for (int eta = 0; eta <= 6; ++eta) EXPECT_FALSE(oracle_decision(testkit::swap2(), eta));
}

TEST(Oracle, SimultaneousMoves) {
  EXPECT_EQ(oracle_makespan(testkit::parallel_pairs(), 5).makespan, 1);
}

TEST(Oracle, MatchesNaiveEnumeration) {
  for (int i = 0; i < 48; ++i) {
    CpfInstance inst = testkit::small_grid(i);
    OracleResult r = oracle_makespan(inst, 14);
    EXPECT_EQ(r.makespan, testkit::naive_makespan(inst, 14)) << i;
    if (r.solved()) EXPECT_TRUE(validate_solution(r.witness, inst));
  }
}

TEST(Oracle, BudgetExceeded) {
  GridSpec spec{4, 4, 0.0, 8, 3};
  EXPECT_THROW(oracle_makespan(generate_grid_instance(spec), 30, 50), ResourceError);
}

TEST(Precheck, Cases) {
  EXPECT_TRUE(precheck(testkit::swap2()).unsolvable);
  EXPECT_FALSE(precheck(testkit::p3()).unsolvable);
  CpfInstance cut(Graph(3, {{0, 1}}), Arrangement(3, {0}), Arrangement(3, {2}));
  EXPECT_TRUE(precheck(cut).unsolvable);
  // full component that is already in place is fine
  CpfInstance full(Graph(2, {{0, 1}}), Arrangement(2, {0, 1}), Arrangement(2, {0, 1}));
  EXPECT_FALSE(precheck(full).unsolvable);
}

TEST(Driver, HandInstances) {
  EXPECT_EQ(makespan_of(find_optimal(testkit::p3()).outcome), 2);
  EXPECT_EQ(makespan_of(find_optimal(testkit::c4()).outcome), 2);
  SolveReport sw = find_optimal(testkit::swap2());
  EXPECT_TRUE(std::holds_alternative<Unsolvable>(sw.outcome));
  EXPECT_TRUE(sw.queries.empty());
}

TEST(Driver, IdentityShortCircuit) {
  CpfInstance p3 = testkit::p3();
  SolveReport r = find_optimal(CpfInstance(p3.graph, p3.initial, p3.initial));
  EXPECT_EQ(makespan_of(r.outcome), 0);
  EXPECT_TRUE(r.queries.empty());
}

TEST(Driver, CertificateAndQueries) {
  SolveReport r = find_optimal(testkit::c4());
  auto& opt = std::get<Optimal>(r.outcome);
  EXPECT_TRUE(opt.unsat_below);
  ASSERT_EQ(r.queries.size(), 2u);
  EXPECT_EQ(r.queries[0].status, SatResult::Status::kUnsat);
  DriverConfig cfg;
  cfg.eta_start = 2;
  SolveReport r2 = find_optimal(testkit::c4(), cfg);
  auto& o2 = std::get<Optimal>(r2.outcome);
  EXPECT_EQ(o2.makespan, 2);
  EXPECT_FALSE(o2.unsat_below);
}

TEST(Driver, CapGivesUnknown) {
  DriverConfig cfg;
  cfg.eta_cap = 1;
  SolveReport r = find_optimal(testkit::p3(), cfg);
  auto* u = std::get_if<Unknown>(&r.outcome);
  ASSERT_NE(u, nullptr);
  EXPECT_FALSE(u->solver_error);
  EXPECT_EQ(default_eta_cap(testkit::p3()), 3 * 1 + 3);
}

TEST(Driver, SolverErrorPropagates) {
  DriverConfig cfg;
  cfg.solver.mode = SolverConfig::Mode::kExternal;
  cfg.solver.command = "false";
  SolveReport r = find_optimal(testkit::p3(), cfg);
  auto* u = std::get_if<Unknown>(&r.outcome);
  ASSERT_NE(u, nullptr);
  EXPECT_TRUE(u->solver_error);
}

TEST(Driver, HeuristicNeverChangesMakespan) {
  for (int i = 0; i < 50; ++i) {
    GridSpec spec{4, 4, 0.2, 1 + i % 3, 500 + static_cast<std::uint64_t>(i)};
    CpfInstance inst = generate_grid_instance(spec);
    DriverConfig on, off;
    on.eta_cap = off.eta_cap = 14;
    off.use_distance_heuristic = false;
    for (EncodingKind k : kAllEncodings) {
      on.encoding = off.encoding = k;
      auto a = find_optimal(inst, on).outcome;
      auto b = find_optimal(inst, off).outcome;
      EXPECT_EQ(makespan_of(a), makespan_of(b)) << i << ' ' << to_string(k);
      EXPECT_EQ(a.index(), b.index());
    }
  }
}

TEST(Driver, Describe) {
  EXPECT_NE(describe(find_optimal(testkit::p3()).outcome).find("makespan=2"), std::string::npos);
}
