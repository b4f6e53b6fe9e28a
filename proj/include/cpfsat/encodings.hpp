#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cpfsat/cnf.hpp"
#include "cpfsat/expansion.hpp"
#include "cpfsat/model.hpp"

namespace cpfsat {

enum class EncodingKind { kInverse, kAllDifferent, kMatching, kDirect, kSimplified };

inline constexpr EncodingKind kAllEncodings[] = {EncodingKind::kInverse, EncodingKind::kAllDifferent,
                                                 EncodingKind::kMatching, EncodingKind::kDirect,
                                                 EncodingKind::kSimplified};

std::string_view to_string(EncodingKind kind);
/// Case-insensitive; accepts "inverse", "alldifferent"/"all-different",
/// "matching", "direct", "simplified".
std::optional<EncodingKind> parse_encoding(std::string_view name);

// Clause family names attached to the emitted formula (see Cnf::families()).
namespace family {
inline constexpr std::string_view kDomain = "domain";          // forbidden extra states
inline constexpr std::string_view kBoundary = "boundary";      // initial and goal units
inline constexpr std::string_view kHeuristic = "heuristic";    // distance pruning
// INVERSE
inline constexpr std::string_view kZeroLink = "inv.zero-link";        // zero -> A == 0
inline constexpr std::string_view kEqualLink = "inv.equal-link";      // eq -> A == A'
inline constexpr std::string_view kTranLink = "inv.tran-link";        // tran <-> T == c
inline constexpr std::string_view kStay = "inv.stay";                 // T == 0
inline constexpr std::string_view kLeave = "inv.leave";               // 0 < T <= deg
inline constexpr std::string_view kArrive = "inv.arrive";             // deg < T
// ALL-DIFFERENT
inline constexpr std::string_view kValueLink = "diff.value-link";     // e <-> L == j
inline constexpr std::string_view kEdgeMove = "diff.edge-move";       // moves follow edges
inline constexpr std::string_view kLayerDistinct = "diff.layer-distinct";    // AllDifferent per layer
inline constexpr std::string_view kTargetVacant = "diff.target-vacant";      // L' != L of others
// MATCHING (FLOW part)
inline constexpr std::string_view kFlowEndpoints = "match.flow-endpoints";
inline constexpr std::string_view kFlowAtMostOne = "match.flow-at-most-one";
inline constexpr std::string_view kFlowSupport = "match.flow-support";
inline constexpr std::string_view kFlowNonOverlap = "match.flow-non-overlap";
// MATCHING (MAPPING part)
inline constexpr std::string_view kMapEqual = "match.map-equal";
inline constexpr std::string_view kMapSaturate = "match.map-saturate";
// DIRECT / SIMPLIFIED
inline constexpr std::string_view kAgentPlaced = "dir.agent-placed";  // exactly one vertex per agent
inline constexpr std::string_view kVertexAtMostOne = "dir.vertex-at-most-one";
inline constexpr std::string_view kNeighborhood = "dir.neighborhood";
inline constexpr std::string_view kMoveVacant = "dir.move-vacant";    // DIRECT only
inline constexpr std::string_view kVacancyLink = "sim.vacancy-link";  // SIMPLIFIED only
inline constexpr std::string_view kMoveVacantAux = "sim.move-vacant"; // SIMPLIFIED only
}  // namespace family

struct EncodeOptions {
  /// When false the formula is only counted, not stored (size studies).
  bool keep_clauses = true;
};

/// A CPF instance compiled to CNF for one makespan bound.
struct EncodedInstance {
  EncodingKind kind;
  int eta;
  int vertex_count = 0;
  int agent_count = 0;
  Cnf cnf;
  VarMap varmap;
  EncodingStats stats;
  std::int64_t gadget_count = 0;  // inequality gadgets emitted (ALL-DIFFERENT)

  void refresh_stats() { stats = stats_of(cnf); }
};

/// Binary-encoded agent index per vertex and layer, Tseitin-linked transition
/// selectors. Requires eta >= 1.
EncodedInstance encode_inverse(const CpfInstance& inst, int eta, EncodeOptions opts = {});
/// Binary-encoded vertex index per agent and layer with pairwise inequality
/// gadgets.
EncodedInstance encode_alldifferent(const CpfInstance& inst, int eta, EncodeOptions opts = {});
/// Anonymous non-overlapping unit flow over the time expansion plus a
/// binary agent map carried along flow arcs.
EncodedInstance encode_matching(const CpfInstance& inst, int eta, EncodeOptions opts = {});
/// One propositional variable per (agent, vertex, layer).
EncodedInstance encode_direct(const CpfInstance& inst, int eta, EncodeOptions opts = {});
/// DIRECT with the per-move vacancy clauses factored through vacancy
/// variables.
EncodedInstance encode_simplified(const CpfInstance& inst, int eta, EncodeOptions opts = {});

EncodedInstance encode(const CpfInstance& inst, int eta, EncodingKind kind, EncodeOptions opts = {});

/// Adds a clause for every (agent, vertex, layer) the reach windows exclude.
/// The added clauses are consequences of the base formula.
EncodedInstance apply_distance_heuristic(EncodedInstance enc, const ReachWindow& windows);

/// A satisfying model names an impossible placement (should never happen for
/// a true model of the formula).
class DecodeError : public std::runtime_error {
 public:
  DecodeError(AgentId agent, int layer, const std::string& what);
  AgentId agent() const { return agent_; }
  int layer() const { return layer_; }

 private:
  AgentId agent_;
  int layer_;
};

Solution decode(const EncodedInstance& enc, const Assignment& model, const CpfInstance& inst);

}  // namespace cpfsat
