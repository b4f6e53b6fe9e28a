#include <gtest/gtest.h>

#include "cpfsat/model.hpp"
#include "support.hpp"

using namespace cpfsat;

namespace {

Arrangement arr(int n, std::vector<VertexId> locs) { return Arrangement(n, std::move(locs)); }

Solution walk(int n, std::initializer_list<std::vector<VertexId>> steps) {
  Solution s;
  for (const auto& st : steps) s.steps.push_back(arr(n, st));
  return s;
}

}  // namespace

TEST(Graph, CanonicalEdgesAndRanks) {
  Graph g(4, {{2, 1}, {0, 3}, {1, 0}});
  ASSERT_EQ(g.edge_count(), 3);
  EXPECT_EQ(g.edges()[0], (Edge{0, 1}));
  EXPECT_EQ(g.edges()[2], (Edge{1, 2}));
  EXPECT_EQ(g.degree(0), 2);
  EXPECT_EQ(g.neighbor_rank(0, 1), 1);
  EXPECT_EQ(g.neighbor_rank(0, 3), 2);
  EXPECT_EQ(g.neighbor_rank(0, 2), 0);
  EXPECT_EQ(g.neighbor_at(0, 2), 3);
  EXPECT_TRUE(g.adjacent(2, 1));
}

TEST(Graph, RejectsBadEdges) {
  EXPECT_THROW(Graph(3, {{1, 1}}), InputError);
  EXPECT_THROW(Graph(3, {{0, 1}, {1, 0}}), InputError);
  EXPECT_THROW(Graph(3, {{0, 3}}), InputError);
}

TEST(Arrangement, InverseAndInjectivity) {
  Arrangement a = arr(4, {2, 0});
  EXPECT_EQ(a.occupant(2), 0);
  EXPECT_EQ(a.occupant(0), 1);
  EXPECT_TRUE(a.vacant(1));
  EXPECT_THROW(arr(3, {1, 1}), InputError);
  EXPECT_THROW(arr(3, {3}), InputError);
}

TEST(Transition, IdentityIsValid) {
  Graph g(3, {{0, 1}, {1, 2}});
  EXPECT_TRUE(validate_transition(arr(3, {0, 2}), arr(3, {0, 2}), g));
}

TEST(Transition, MoveIntoVacancy) {
  Graph g(3, {{0, 1}, {1, 2}});
  EXPECT_TRUE(validate_transition(arr(3, {0}), arr(3, {1}), g));
}

TEST(Transition, SwapRejected) {
  Graph g(2, {{0, 1}});
  EXPECT_FALSE(validate_transition(arr(2, {0, 1}), arr(2, {1, 0}), g));
}

TEST(Transition, TrainRejected) {
  // a1 follows a2 into the vertex a2 is leaving
  Graph g(3, {{0, 1}, {1, 2}});
  Validation v = check_transition(arr(3, {0, 1}), arr(3, {1, 2}), g);
  EXPECT_FALSE(v);
  EXPECT_FALSE(v.diagnostic.empty());
}

TEST(Transition, NonEdgeRejected) {
  Graph g(3, {{0, 1}, {1, 2}});
  EXPECT_FALSE(validate_transition(arr(3, {0}), arr(3, {2}), g));
}

TEST(Transition, SizeMismatchThrows) {
  Graph g(3, {{0, 1}, {1, 2}});
  EXPECT_THROW(check_transition(arr(3, {0}), arr(3, {0, 1}), g), InputError);
}

TEST(Solution, ZeroMakespanIdentity) {
  CpfInstance inst = testkit::p3();
  CpfInstance same(inst.graph, inst.initial, inst.initial);
  EXPECT_TRUE(validate_solution(identity_solution(same), same));
}

TEST(Solution, P3WalkAndWrongGoal) {
  CpfInstance inst = testkit::p3();
  Solution s = walk(3, {{0}, {1}, {2}});
  EXPECT_TRUE(validate_solution(s, inst));
  CpfInstance wrong(inst.graph, inst.initial, arr(3, {1}));
  Validation v = validate_solution(s, wrong);
  EXPECT_FALSE(v);
  EXPECT_EQ(v.step, -1);
}

TEST(Solution, OffendingStepReported) {
  CpfInstance inst = testkit::p3();
  Solution s = walk(3, {{0}, {0}, {2}});
  Validation v = validate_solution(s, inst);
  EXPECT_FALSE(v);
  EXPECT_EQ(v.step, 1);
}

TEST(Metrics, IdentityThreeAgents) {
  Graph g(4, {{0, 1}, {1, 2}, {2, 3}});
  CpfInstance inst(g, arr(4, {0, 1, 3}), arr(4, {0, 1, 3}));
  EXPECT_EQ(metrics(identity_solution(inst, 2)), (SolutionMetrics{2, 0}));
}

TEST(Metrics, P3Walk) { EXPECT_EQ(metrics(walk(3, {{0}, {1}, {2}})), (SolutionMetrics{2, 2})); }

TEST(Metrics, C4Witness) {
  CpfInstance inst = testkit::c4();
  // a2 steps ahead, then a1 follows: two moves over two steps
  Solution s = walk(4, {{0, 1}, {0, 2}, {1, 2}});
  ASSERT_TRUE(validate_solution(s, inst));
  EXPECT_EQ(metrics(s), (SolutionMetrics{2, 2}));
  ASSERT_EQ(testkit::naive_makespan(inst, 5), 2);
}

TEST(InstanceText, MinimalFile) {
  CpfInstance inst = read_instance("cpf 1 0 0\n");
  EXPECT_EQ(inst.vertex_count(), 1);
  EXPECT_EQ(inst.agent_count(), 0);
}

TEST(InstanceText, P3FileAndRoundTrip) {
  CpfInstance inst = read_instance("# path\ncpf 3 2 1\ne 1 2\ne 2 3\na 1 1 3\n");
  EXPECT_EQ(inst.vertex_count(), 3);
  EXPECT_EQ(inst.agent_count(), 1);
  EXPECT_EQ(inst, testkit::p3());
  EXPECT_EQ(read_instance(write_instance(inst)), inst);
}

TEST(InstanceText, DuplicateStartIsParseError) {
  try {
    read_instance("cpf 3 2 2\ne 1 2\ne 2 3\na 1 1 3\na 2 1 2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5);
  }
}

TEST(InstanceText, Malformed) {
  EXPECT_THROW(read_instance(""), ParseError);
  EXPECT_THROW(read_instance("cpf 2 1 0\ne 1 5\n"), ParseError);
  EXPECT_THROW(read_instance("cpf 2 1 0\n"), ParseError);
  EXPECT_THROW(read_instance("cpf 2 0 0\nz\n"), ParseError);
}

TEST(SolutionText, RoundTrip) {
  Solution s = walk(4, {{0, 1}, {0, 2}, {1, 2}});
  std::string text = write_solution(s);
  Solution back = read_solution(text, 4);
  ASSERT_EQ(back.steps.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(back.steps[i], s.steps[i]);
}

TEST(SolutionText, CollisionIsParseError) {
  EXPECT_THROW(read_solution("t 0: a1@1 a2@1\n", 3), ParseError);
  EXPECT_THROW(read_solution("t 1: a1@1\n", 3), ParseError);
}
