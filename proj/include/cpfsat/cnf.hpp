#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cpfsat {

/// DIMACS-style literal: +v or -v for variable v >= 1.
using Lit = std::int32_t;
using Clause = std::vector<Lit>;

/// Smallest w with 2^w >= domain_size; 0 for a single-valued domain.
int bits_for(std::int64_t domain_size);

/// Binary-encoded finite-domain variable; bits[i] is the SAT variable of bit i
/// (least significant first).
struct BitVector {
  std::vector<int> bits;
  int width() const { return static_cast<int>(bits.size()); }
  int operator[](int i) const { return bits[i]; }
};

struct FamilyTally {
  std::int64_t clauses = 0;
  std::int64_t literals = 0;
  std::map<int, std::int64_t> by_length;
};

/// Clause database. Clauses are normalized on insertion: repeated literals are
/// dropped and tautologies are discarded. In counting mode (keep_clauses =
/// false) only sizes are tracked, which lets size studies run on formulas too
/// large to hold in memory.
class Cnf {
 public:
  explicit Cnf(bool keep_clauses = true) : keep_(keep_clauses) {}

  int new_var() { return ++var_count_; }
  int var_count() const { return var_count_; }

  /// Adds one clause. An empty clause is recorded as the pair (x), (-x) over a
  /// fresh variable so that every stored clause stays non-empty.
  void add_clause(std::span<const Lit> lits);
  void add_clause(std::initializer_list<Lit> lits) { add_clause(std::span<const Lit>(lits.begin(), lits.size())); }
  void add_clauses(const std::vector<Clause>& clauses);
  /// Adds each literal as a unit clause.
  void add_units(std::span<const Lit> lits);

  /// Subsequent clauses are attributed to `name` in families().
  void set_family(std::string_view name);
  /// Tallies in first-use order.
  const std::vector<std::pair<std::string, FamilyTally>>& families() const { return families_; }
  /// Zero tally when the family never received a clause.
  FamilyTally family(std::string_view name) const;

  bool keeps_clauses() const { return keep_; }
  std::int64_t clause_count() const { return clause_count_; }
  std::int64_t literal_count() const { return literal_count_; }
  std::int64_t dropped_tautologies() const { return tautologies_; }

  /// Only valid when clauses are kept.
  std::span<const Lit> clause(std::size_t i) const;
  std::vector<Clause> clauses() const;

 private:
  bool keep_;
  int var_count_ = 0;
  std::int64_t clause_count_ = 0;
  std::int64_t literal_count_ = 0;
  std::int64_t tautologies_ = 0;
  std::vector<Lit> literals_;
  std::vector<std::int64_t> offsets_{0};
  std::size_t current_family_ = 0;
  std::vector<std::pair<std::string, FamilyTally>> families_{{"", {}}};
  std::vector<Lit> scratch_;
};

/// Variable count, clause count, clauses per variable, literals per clause.
struct EncodingStats {
  std::int64_t variables = 0;
  std::int64_t clauses = 0;
  double ratio = 0.0;
  double mean_clause_length = 0.0;
  friend bool operator==(const EncodingStats&, const EncodingStats&) = default;
};

EncodingStats stats_of(const Cnf& cnf);

// ---------------------------------------------------------------------------
// Semantic variable dictionary

enum class VarKind : std::uint8_t {
  kAgentBit,       // A[v, l, bit]   agent index held by a vertex
  kTransitionBit,  // T[v, l, bit]   movement selector of a vertex
  kLocationBit,    // L[a, l, bit]   vertex index held by an agent
  kOccupancy,      // X[a, v, l]     agent a sits on v
  kFlowVertex,     // M[v, l]        vertex carries flow
  kFlowArc,        // E[u, v, l]     flow moves u -> v between l and l + 1
  kFlowWait,       // W[u, l]        flow waits on u
  kVacancy,        // V[u, l]        u is empty
  kAuxZero,        // zero[v, l]     A[v, l] == 0
  kAuxEqual,       // eq[u, v, l]    A[u, l + 1] == A[v, l]
  kAuxTransition,  // tran[v, l, c]  T[v, l] == c
  kAuxValue,       // e[a, j, l]     L[a, l] == j
  kAuxDiff,        // d[g, bit]      inequality gadget g differs at bit
};

std::string_view kind_name(VarKind kind);

struct VarKey {
  VarKind kind;
  std::int32_t i = 0;
  std::int32_t j = 0;
  std::int32_t k = 0;
  friend bool operator==(const VarKey&, const VarKey&) = default;
};

struct VarKeyHash {
  std::size_t operator()(const VarKey& key) const noexcept;
};

/// Bijection between semantic keys and SAT variables.
class VarMap {
 public:
  void add(const VarKey& key, int var);
  std::optional<int> find(const VarKey& key) const;
  int at(const VarKey& key) const;
  /// Key of `var`, or nullopt for variables the map does not own.
  std::optional<VarKey> key_of(int var) const;
  std::size_t size() const { return by_key_.size(); }
  std::int64_t count(VarKind kind) const;

  /// One line per variable: `<satvar> <kind> <fields>` with 1-based vertex
  /// and agent indices.
  void write(std::ostream& out) const;

 private:
  std::unordered_map<VarKey, int, VarKeyHash> by_key_;
  std::vector<std::optional<VarKey>> by_var_;
  std::map<VarKind, std::int64_t> counts_;
};

// ---------------------------------------------------------------------------
// Bit-vector gadgets

/// Unit conjuncts fixing vec to c. Throws std::logic_error if c does not fit.
std::vector<Lit> const_eq(const BitVector& vec, std::uint64_t c);
/// Single clause excluding vec == c. For width 0 the result is the empty
/// clause, i.e. the exclusion is unsatisfiable.
Clause const_neq(const BitVector& vec, std::uint64_t c);
/// Bitwise equivalence; with a guard g every clause also carries -g.
std::vector<Clause> var_eq(const BitVector& a, const BitVector& b, std::optional<Lit> guard = {});
/// a != b using one fresh difference variable per bit (diff.size() == width):
/// the clause (d_0 | ... | d_{w-1}) plus d_i -> a_i != b_i as two ternary
/// clauses per bit. Width 0 yields the empty clause.
std::vector<Clause> var_neq(const BitVector& a, const BitVector& b, std::span<const int> diff);
/// Excludes every value in [domain_size, 2^width).
std::vector<Clause> forbid_extra_states(const BitVector& vec, std::int64_t domain_size);

// ---------------------------------------------------------------------------
// DIMACS and solver output

/// Total assignment over variables 1..var_count; unset variables are false.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int var_count) : values_(static_cast<std::size_t>(var_count) + 1, 0) {}

  int var_count() const { return static_cast<int>(values_.size()) - 1; }
  bool operator[](int var) const { return values_.at(var) != 0; }
  void set(int var, bool value) { values_.at(var) = value; }
  bool satisfies(Lit lit) const { return lit > 0 ? (*this)[lit] : !(*this)[-lit]; }
  bool satisfies(std::span<const Lit> clause) const;
  /// Index of the first clause the assignment falsifies, if any.
  std::optional<std::size_t> first_violated(const Cnf& cnf) const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<char> values_;
};

/// Integer value of a bit vector under a model.
std::uint64_t value_of(const BitVector& vec, const Assignment& model);

void write_dimacs(std::ostream& out, const Cnf& cnf);
std::string write_dimacs(const Cnf& cnf);
/// Reads `p cnf` input (comments allowed). Clauses pass through the usual
/// normalization. Throws std::invalid_argument on malformed input.
Cnf read_dimacs(std::istream& in);

class SolverProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parsed SAT-competition output.
struct SolverVerdict {
  enum class Status { kSat, kUnsat, kUnknown };
  Status status = Status::kUnknown;
  Assignment model;
};

/// Reads `s SATISFIABLE` / `s UNSATISFIABLE` / `s UNKNOWN` plus `v` lines.
/// Throws SolverProtocolError when the output is empty or has no `s` line.
SolverVerdict read_model(std::string_view output, int var_count);

}  // namespace cpfsat
