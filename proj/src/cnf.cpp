#include "cpfsat/cnf.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace cpfsat {

int bits_for(std::int64_t domain_size) {
  if (domain_size < 1) throw std::logic_error("empty finite domain");
  int w = 0;
  while ((std::int64_t{1} << w) < domain_size) ++w;
  return w;
}

// ---------------------------------------------------------------------------
// Cnf

void Cnf::add_clause(std::span<const Lit> lits) {
  if (lits.empty()) {
    int x = new_var();
    add_clause({x});
    add_clause({-x});
    return;
  }
  scratch_.clear();
  for (Lit lit : lits) {
    if (lit == 0 || std::abs(lit) > var_count_) throw std::logic_error("literal refers to unknown variable");
    bool repeated = false;
    for (Lit seen : scratch_) {
      if (seen == -lit) {
        ++tautologies_;
        return;
      }
      repeated |= (seen == lit);
    }
    if (!repeated) scratch_.push_back(lit);
  }
  if (keep_) {
    literals_.insert(literals_.end(), scratch_.begin(), scratch_.end());
    offsets_.push_back(static_cast<std::int64_t>(literals_.size()));
  }
  auto len = static_cast<std::int64_t>(scratch_.size());
  ++clause_count_;
  literal_count_ += len;
  FamilyTally& tally = families_[current_family_].second;
  ++tally.clauses;
  tally.literals += len;
  ++tally.by_length[static_cast<int>(len)];
}

void Cnf::add_clauses(const std::vector<Clause>& clauses) {
  for (const Clause& c : clauses) add_clause(c);
}

void Cnf::add_units(std::span<const Lit> lits) {
  for (Lit lit : lits) add_clause({lit});
}

void Cnf::set_family(std::string_view name) {
  for (std::size_t i = 0; i < families_.size(); ++i) {
    if (families_[i].first == name) {
      current_family_ = i;
      return;
    }
  }
  families_.emplace_back(std::string(name), FamilyTally{});
  current_family_ = families_.size() - 1;
}

FamilyTally Cnf::family(std::string_view name) const {
  for (const auto& [n, tally] : families_)
    if (n == name) return tally;
  return {};
}

std::span<const Lit> Cnf::clause(std::size_t i) const {
  if (!keep_) throw std::logic_error("clauses were not kept");
  return std::span<const Lit>(literals_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

std::vector<Clause> Cnf::clauses() const {
  std::vector<Clause> out;
  out.reserve(static_cast<std::size_t>(clause_count_));
  for (std::size_t i = 0; i < static_cast<std::size_t>(clause_count_); ++i) {
    auto c = clause(i);
    out.emplace_back(c.begin(), c.end());
  }
  return out;
}

EncodingStats stats_of(const Cnf& cnf) {
  EncodingStats s;
  s.variables = cnf.var_count();
  s.clauses = cnf.clause_count();
  s.ratio = s.variables > 0 ? static_cast<double>(s.clauses) / static_cast<double>(s.variables) : 0.0;
  s.mean_clause_length =
      s.clauses > 0 ? static_cast<double>(cnf.literal_count()) / static_cast<double>(s.clauses) : 0.0;
  return s;
}

// ---------------------------------------------------------------------------
// VarMap

std::string_view kind_name(VarKind kind) {
  switch (kind) {
    case VarKind::kAgentBit: return "A";
    case VarKind::kTransitionBit: return "T";
    case VarKind::kLocationBit: return "L";
    case VarKind::kOccupancy: return "X";
    case VarKind::kFlowVertex: return "M";
    case VarKind::kFlowArc: return "E";
    case VarKind::kFlowWait: return "W";
    case VarKind::kVacancy: return "V";
    case VarKind::kAuxZero: return "zero";
    case VarKind::kAuxEqual: return "eq";
    case VarKind::kAuxTransition: return "tran";
    case VarKind::kAuxValue: return "e";
    case VarKind::kAuxDiff: return "d";
  }
  return "?";
}

std::size_t VarKeyHash::operator()(const VarKey& key) const noexcept {
  std::uint64_t h = static_cast<std::uint64_t>(key.kind);
  for (std::int32_t f : {key.i, key.j, key.k}) h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::uint32_t>(f);
  return static_cast<std::size_t>(h ^ (h >> 29));
}

void VarMap::add(const VarKey& key, int var) {
  if (!by_key_.emplace(key, var).second) throw std::logic_error("variable key allocated twice");
  if (by_var_.size() <= static_cast<std::size_t>(var)) by_var_.resize(static_cast<std::size_t>(var) + 1);
  if (by_var_[var]) throw std::logic_error("SAT variable mapped twice");
  by_var_[var] = key;
  ++counts_[key.kind];
}

std::optional<int> VarMap::find(const VarKey& key) const {
  auto it = by_key_.find(key);
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

int VarMap::at(const VarKey& key) const {
  auto v = find(key);
  if (!v) throw std::logic_error("no variable for key " + std::string(kind_name(key.kind)));
  return *v;
}

std::optional<VarKey> VarMap::key_of(int var) const {
  if (var < 0 || static_cast<std::size_t>(var) >= by_var_.size()) return std::nullopt;
  return by_var_[var];
}

std::int64_t VarMap::count(VarKind kind) const {
  auto it = counts_.find(kind);
  return it == counts_.end() ? 0 : it->second;
}

void VarMap::write(std::ostream& out) const {
  for (std::size_t var = 1; var < by_var_.size(); ++var) {
    if (!by_var_[var]) continue;
    const VarKey& k = *by_var_[var];
    out << var << ' ' << kind_name(k.kind);
    switch (k.kind) {
      case VarKind::kAgentBit:
      case VarKind::kTransitionBit:
        out << " v=" << k.i + 1 << " l=" << k.j << " bit=" << k.k;
        break;
      case VarKind::kLocationBit:
        out << " a=" << k.i + 1 << " l=" << k.j << " bit=" << k.k;
        break;
      case VarKind::kOccupancy:
        out << " a=" << k.i + 1 << " v=" << k.j + 1 << " l=" << k.k;
        break;
      case VarKind::kFlowVertex:
      case VarKind::kFlowWait:
      case VarKind::kVacancy:
      case VarKind::kAuxZero:
        out << " v=" << k.i + 1 << " l=" << k.j;
        break;
      case VarKind::kFlowArc:
      case VarKind::kAuxEqual:
        out << " u=" << k.i + 1 << " v=" << k.j + 1 << " l=" << k.k;
        break;
      case VarKind::kAuxTransition:
        out << " v=" << k.i + 1 << " l=" << k.j << " c=" << k.k;
        break;
      case VarKind::kAuxValue:
        out << " a=" << k.i + 1 << " v=" << k.j + 1 << " l=" << k.k;
        break;
      case VarKind::kAuxDiff:
        out << " gadget=" << k.i << " bit=" << k.j;
        break;
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Gadgets

namespace {

void require_fits(const BitVector& vec, std::uint64_t c) {
  if (vec.width() < 64 && c >= (std::uint64_t{1} << vec.width()))
    throw std::logic_error("constant does not fit bit vector");
}

Lit bit_literal(const BitVector& vec, std::uint64_t c, int i) {
  return ((c >> i) & 1U) ? vec[i] : -vec[i];
}

}  // namespace

std::vector<Lit> const_eq(const BitVector& vec, std::uint64_t c) {
  require_fits(vec, c);
  std::vector<Lit> out;
  for (int i = 0; i < vec.width(); ++i) out.push_back(bit_literal(vec, c, i));
  return out;
}

Clause const_neq(const BitVector& vec, std::uint64_t c) {
  require_fits(vec, c);
  Clause out;
  for (int i = 0; i < vec.width(); ++i) out.push_back(-bit_literal(vec, c, i));
  return out;
}

std::vector<Clause> var_eq(const BitVector& a, const BitVector& b, std::optional<Lit> guard) {
  if (a.width() != b.width()) throw std::logic_error("bit vector width mismatch");
  std::vector<Clause> out;
  for (int i = 0; i < a.width(); ++i) {
    Clause c1{-a[i], b[i]};
    Clause c2{a[i], -b[i]};
    if (guard) {
      c1.insert(c1.begin(), -*guard);
      c2.insert(c2.begin(), -*guard);
    }
    out.push_back(std::move(c1));
    out.push_back(std::move(c2));
  }
  return out;
}

std::vector<Clause> var_neq(const BitVector& a, const BitVector& b, std::span<const int> diff) {
  if (a.width() != b.width()) throw std::logic_error("bit vector width mismatch");
  if (static_cast<int>(diff.size()) != a.width()) throw std::logic_error("one difference variable per bit");
  if (a.width() == 0) return {Clause{}};
  std::vector<Clause> out;
  out.emplace_back(diff.begin(), diff.end());
  for (int i = 0; i < a.width(); ++i) {
    out.push_back({-diff[i], -a[i], -b[i]});
    out.push_back({-diff[i], a[i], b[i]});
  }
  return out;
}

std::vector<Clause> forbid_extra_states(const BitVector& vec, std::int64_t domain_size) {
  std::vector<Clause> out;
  const std::int64_t states = std::int64_t{1} << vec.width();
  if (domain_size > states) throw std::logic_error("domain larger than bit vector");
  for (std::int64_t c = domain_size; c < states; ++c) out.push_back(const_neq(vec, static_cast<std::uint64_t>(c)));
  return out;
}

// ---------------------------------------------------------------------------
// Assignment / DIMACS

bool Assignment::satisfies(std::span<const Lit> clause) const {
  return std::any_of(clause.begin(), clause.end(), [&](Lit l) { return satisfies(l); });
}

std::optional<std::size_t> Assignment::first_violated(const Cnf& cnf) const {
  for (std::size_t i = 0; i < static_cast<std::size_t>(cnf.clause_count()); ++i)
    if (!satisfies(cnf.clause(i))) return i;
  return std::nullopt;
}

std::uint64_t value_of(const BitVector& vec, const Assignment& model) {
  std::uint64_t value = 0;
  for (int i = 0; i < vec.width(); ++i)
    if (model[vec[i]]) value |= std::uint64_t{1} << i;
  return value;
}

void write_dimacs(std::ostream& out, const Cnf& cnf) {
  out << "p cnf " << cnf.var_count() << ' ' << cnf.clause_count() << '\n';
  for (std::size_t i = 0; i < static_cast<std::size_t>(cnf.clause_count()); ++i) {
    for (Lit lit : cnf.clause(i)) out << lit << ' ';
    out << "0\n";
  }
}

std::string write_dimacs(const Cnf& cnf) {
  std::ostringstream out;
  write_dimacs(out, cnf);
  return out.str();
}

Cnf read_dimacs(std::istream& in) {
  Cnf cnf;
  std::string line;
  long declared_vars = -1;
  Clause current;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == 'c' || tok[0] == '%') continue;
    if (tok == "p") {
      std::string fmt;
      long clauses = 0;
      if (!(ls >> fmt >> declared_vars >> clauses) || fmt != "cnf" || declared_vars < 0)
        throw std::invalid_argument("malformed DIMACS header: " + line);
      while (cnf.var_count() < declared_vars) cnf.new_var();
      continue;
    }
    if (declared_vars < 0) throw std::invalid_argument("DIMACS clause before header");
    do {
      long lit = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), lit);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) throw std::invalid_argument("bad literal " + tok);
      if (std::labs(lit) > declared_vars) throw std::invalid_argument("literal exceeds declared variables: " + tok);
      if (lit == 0) {
        cnf.add_clause(current);
        current.clear();
      } else {
        current.push_back(static_cast<Lit>(lit));
      }
    } while (ls >> tok);
  }
  if (!current.empty()) cnf.add_clause(current);
  return cnf;
}

SolverVerdict read_model(std::string_view output, int var_count) {
  if (output.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw SolverProtocolError("solver produced no output (crashed?)");
  SolverVerdict verdict;
  verdict.model = Assignment(var_count);
  bool have_status = false;
  std::size_t pos = 0;
  while (pos <= output.size()) {
    std::size_t end = output.find('\n', pos);
    if (end == std::string_view::npos) end = output.size();
    std::string_view line = output.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.size() < 1) continue;
    if (line[0] == 's') {
      std::string_view status = line.substr(1);
      status.remove_prefix(std::min(status.find_first_not_of(' '), status.size()));
      if (status.starts_with("SATISFIABLE")) verdict.status = SolverVerdict::Status::kSat;
      else if (status.starts_with("UNSATISFIABLE")) verdict.status = SolverVerdict::Status::kUnsat;
      else if (status.starts_with("UNKNOWN")) verdict.status = SolverVerdict::Status::kUnknown;
      else throw SolverProtocolError("unrecognized status line: " + std::string(line));
      have_status = true;
    } else if (line[0] == 'v') {
      std::size_t i = 1;
      while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j == i) break;
        long lit = 0;
        auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + j, lit);
        if (ec != std::errc() || ptr != line.data() + j)
          throw SolverProtocolError("malformed literal in value line: " + std::string(line));
        if (lit != 0) {
          long var = std::labs(lit);
          if (var > var_count) throw SolverProtocolError("value line names unknown variable " + std::to_string(var));
          verdict.model.set(static_cast<int>(var), lit > 0);
        }
        i = j;
      }
    }
  }
  if (!have_status) throw SolverProtocolError("solver output has no 's' status line");
  return verdict;
}

}  // namespace cpfsat
