#include "cpfsat/encodings.hpp"

#include <algorithm>
#include <cctype>

namespace cpfsat {

std::string_view to_string(EncodingKind kind) {
  switch (kind) {
    case EncodingKind::kInverse: return "INVERSE";
    case EncodingKind::kAllDifferent: return "ALLDIFFERENT";
    case EncodingKind::kMatching: return "MATCHING";
    case EncodingKind::kDirect: return "DIRECT";
    case EncodingKind::kSimplified: return "SIMPLIFIED";
  }
  return "?";
}

std::optional<EncodingKind> parse_encoding(std::string_view name) {
  std::string key;
  for (char ch : name)
    if (ch != '-' && ch != '_') key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (key == "inverse") return EncodingKind::kInverse;
  if (key == "alldifferent" || key == "alldiff") return EncodingKind::kAllDifferent;
  if (key == "matching") return EncodingKind::kMatching;
  if (key == "direct") return EncodingKind::kDirect;
  if (key == "simplified") return EncodingKind::kSimplified;
  return std::nullopt;
}

DecodeError::DecodeError(AgentId agent, int layer, const std::string& what)
    : std::runtime_error("inconsistent model at agent a" + std::to_string(agent + 1) + ", layer " +
                         std::to_string(layer) + ": " + what),
      agent_(agent),
      layer_(layer) {}

namespace {

struct Builder {
  EncodedInstance enc;

  Builder(const CpfInstance& inst, int eta, EncodingKind kind, EncodeOptions opts)
      : enc{kind, eta, inst.vertex_count(), inst.agent_count(), Cnf(opts.keep_clauses), {}, {}} {
    if (eta < 1) throw InputError("encodings require eta >= 1");
  }

  int var(VarKind kind, int i, int j = 0, int k = 0) {
    int v = enc.cnf.new_var();
    enc.varmap.add({kind, i, j, k}, v);
    return v;
  }
  BitVector bits(VarKind kind, int i, int j, int width) {
    BitVector out;
    for (int b = 0; b < width; ++b) out.bits.push_back(var(kind, i, j, b));
    return out;
  }
  int at(VarKind kind, int i, int j = 0, int k = 0) const { return enc.varmap.at({kind, i, j, k}); }

  void family(std::string_view name) { enc.cnf.set_family(name); }
  void add(std::initializer_list<Lit> c) { enc.cnf.add_clause(c); }
  void add(const Clause& c) { enc.cnf.add_clause(c); }
  void add(const std::vector<Clause>& cs) { enc.cnf.add_clauses(cs); }
  void units(const std::vector<Lit>& lits) { enc.cnf.add_units(lits); }

  EncodedInstance finish() {
    enc.refresh_stats();
    return std::move(enc);
  }
};

// Value stored for each vertex in the agent-index vectors: agent index + 1,
// or 0 when the vertex is empty.
std::vector<std::uint64_t> inverse_values(const Arrangement& arr) {
  std::vector<std::uint64_t> out(arr.vertex_count(), 0);
  for (AgentId a = 0; a < arr.agent_count(); ++a) out[arr.location(a)] = static_cast<std::uint64_t>(a) + 1;
  return out;
}

}  // namespace

EncodedInstance encode_inverse(const CpfInstance& inst, int eta, EncodeOptions opts) {
  Builder b(inst, eta, EncodingKind::kInverse, opts);
  const Graph& g = inst.graph;
  const int n = g.vertex_count();
  const int wa = bits_for(inst.agent_count() + 1);

  std::vector<std::vector<BitVector>> A(eta + 1), T(eta);
  for (int l = 0; l <= eta; ++l) {
    for (VertexId v = 0; v < n; ++v) A[l].push_back(b.bits(VarKind::kAgentBit, v, l, wa));
    if (l == eta) break;
    for (VertexId v = 0; v < n; ++v)
      T[l].push_back(b.bits(VarKind::kTransitionBit, v, l, bits_for(2LL * g.degree(v) + 1)));
    for (VertexId v = 0; v < n; ++v) b.var(VarKind::kAuxZero, v, l);
    for (VertexId v = 0; v < n; ++v) {
      b.var(VarKind::kAuxEqual, v, v, l);
      for (VertexId u : g.neighbors(v)) b.var(VarKind::kAuxEqual, u, v, l);
    }
    for (VertexId v = 0; v < n; ++v)
      for (int c = 0; c <= 2 * g.degree(v); ++c) b.var(VarKind::kAuxTransition, v, l, c);
  }

  b.family(family::kDomain);
  for (int l = 0; l <= eta; ++l)
    for (VertexId v = 0; v < n; ++v) {
      b.add(forbid_extra_states(A[l][v], inst.agent_count() + 1));
      if (l < eta) b.add(forbid_extra_states(T[l][v], 2LL * g.degree(v) + 1));
    }

  for (int l = 0; l < eta; ++l) {
    b.family(family::kZeroLink);
    for (VertexId v = 0; v < n; ++v) {
      int z = b.at(VarKind::kAuxZero, v, l);
      for (int i = 0; i < wa; ++i) b.add({-z, -A[l][v][i]});
    }
    b.family(family::kEqualLink);
    for (VertexId v = 0; v < n; ++v) {
      b.add(var_eq(A[l][v], A[l + 1][v], b.at(VarKind::kAuxEqual, v, v, l)));
      for (VertexId u : g.neighbors(v)) b.add(var_eq(A[l][v], A[l + 1][u], b.at(VarKind::kAuxEqual, u, v, l)));
    }
    b.family(family::kTranLink);
    for (VertexId v = 0; v < n; ++v)
      for (int c = 0; c <= 2 * g.degree(v); ++c) {
        int t = b.at(VarKind::kAuxTransition, v, l, c);
        std::vector<Lit> eq = const_eq(T[l][v], static_cast<std::uint64_t>(c));
        Clause back{t};
        for (Lit lit : eq) {
          b.add({-t, lit});
          back.push_back(-lit);
        }
        b.add(back);
      }
    b.family(family::kStay);
    for (VertexId v = 0; v < n; ++v)
      b.add({-b.at(VarKind::kAuxTransition, v, l, 0), b.at(VarKind::kAuxEqual, v, v, l)});
    b.family(family::kLeave);
    for (VertexId v = 0; v < n; ++v)
      for (int c = 1; c <= g.degree(v); ++c) {
        VertexId u = g.neighbor_at(v, c);
        int t = b.at(VarKind::kAuxTransition, v, l, c);
        b.add({-t, b.at(VarKind::kAuxZero, u, l)});
        b.add({-t, b.at(VarKind::kAuxEqual, u, v, l)});
        b.add({-t, b.at(VarKind::kAuxTransition, u, l, g.neighbor_rank(u, v) + g.degree(u))});
      }
    b.family(family::kArrive);
    for (VertexId v = 0; v < n; ++v)
      for (int c = g.degree(v) + 1; c <= 2 * g.degree(v); ++c) {
        VertexId u = g.neighbor_at(v, c - g.degree(v));
        b.add({-b.at(VarKind::kAuxTransition, v, l, c), b.at(VarKind::kAuxTransition, u, l, g.neighbor_rank(u, v))});
      }
  }

  b.family(family::kBoundary);
  auto start = inverse_values(inst.initial), goal = inverse_values(inst.goal);
  for (VertexId v = 0; v < n; ++v) b.units(const_eq(A[0][v], start[v]));
  for (VertexId v = 0; v < n; ++v) b.units(const_eq(A[eta][v], goal[v]));
  return b.finish();
}

EncodedInstance encode_alldifferent(const CpfInstance& inst, int eta, EncodeOptions opts) {
  Builder b(inst, eta, EncodingKind::kAllDifferent, opts);
  const Graph& g = inst.graph;
  const int n = g.vertex_count();
  const int mu = inst.agent_count();
  const int w = bits_for(n);

  std::vector<std::vector<BitVector>> L(eta + 1);
  std::int32_t gadget = 0;
  auto neq = [&](const BitVector& x, const BitVector& y) {
    std::vector<int> diff;
    for (int i = 0; i < w; ++i) diff.push_back(b.var(VarKind::kAuxDiff, gadget, i));
    ++gadget;
    b.add(var_neq(x, y, diff));
  };

  for (int l = 0; l <= eta; ++l) {
    for (AgentId a = 0; a < mu; ++a) L[l].push_back(b.bits(VarKind::kLocationBit, a, l, w));
    for (AgentId a = 0; a < mu; ++a)
      for (VertexId j = 0; j < n; ++j) b.var(VarKind::kAuxValue, a, j, l);
  }

  b.family(family::kDomain);
  for (int l = 0; l <= eta; ++l)
    for (AgentId a = 0; a < mu; ++a) b.add(forbid_extra_states(L[l][a], n));

  b.family(family::kValueLink);
  for (int l = 0; l <= eta; ++l)
    for (AgentId a = 0; a < mu; ++a)
      for (VertexId j = 0; j < n; ++j) {
        int e = b.at(VarKind::kAuxValue, a, j, l);
        Clause back{e};
        for (Lit lit : const_eq(L[l][a], static_cast<std::uint64_t>(j))) {
          b.add({-e, lit});
          back.push_back(-lit);
        }
        b.add(back);
      }

  b.family(family::kEdgeMove);
  for (int l = 0; l < eta; ++l)
    for (AgentId a = 0; a < mu; ++a)
      for (VertexId j = 0; j < n; ++j) {
        Clause c{-b.at(VarKind::kAuxValue, a, j, l), b.at(VarKind::kAuxValue, a, j, l + 1)};
        for (VertexId k : g.neighbors(j)) c.push_back(b.at(VarKind::kAuxValue, a, k, l + 1));
        b.add(c);
      }

  b.family(family::kLayerDistinct);
  for (int l = 0; l <= eta; ++l)
    for (AgentId a = 0; a < mu; ++a)
      for (AgentId c = a + 1; c < mu; ++c) neq(L[l][a], L[l][c]);

  b.family(family::kTargetVacant);
  for (int l = 0; l < eta; ++l)
    for (AgentId a = 0; a < mu; ++a)
      for (AgentId c = 0; c < mu; ++c)
        if (c != a) neq(L[l + 1][a], L[l][c]);
  b.enc.gadget_count = gadget;

  b.family(family::kBoundary);
  for (AgentId a = 0; a < mu; ++a) b.units(const_eq(L[0][a], static_cast<std::uint64_t>(inst.initial.location(a))));
  for (AgentId a = 0; a < mu; ++a) b.units(const_eq(L[eta][a], static_cast<std::uint64_t>(inst.goal.location(a))));
  return b.finish();
}

EncodedInstance encode_matching(const CpfInstance& inst, int eta, EncodeOptions opts) {
  Builder b(inst, eta, EncodingKind::kMatching, opts);
  const Graph& g = inst.graph;
  const int n = g.vertex_count();
  const int wa = bits_for(inst.agent_count() + 1);

  std::vector<std::vector<BitVector>> A(eta + 1);
  for (int l = 0; l <= eta; ++l) {
    for (VertexId v = 0; v < n; ++v) b.var(VarKind::kFlowVertex, v, l);
    for (VertexId v = 0; v < n; ++v) A[l].push_back(b.bits(VarKind::kAgentBit, v, l, wa));
    if (l == eta) break;
    for (VertexId u = 0; u < n; ++u) {
      b.var(VarKind::kFlowWait, u, l);
      for (VertexId v : g.neighbors(u)) b.var(VarKind::kFlowArc, u, v, l);
    }
  }
  auto M = [&](VertexId v, int l) { return b.at(VarKind::kFlowVertex, v, l); };
  auto W = [&](VertexId v, int l) { return b.at(VarKind::kFlowWait, v, l); };
  auto E = [&](VertexId u, VertexId v, int l) { return b.at(VarKind::kFlowArc, u, v, l); };

  b.family(family::kDomain);
  for (int l = 0; l <= eta; ++l)
    for (VertexId v = 0; v < n; ++v) b.add(forbid_extra_states(A[l][v], inst.agent_count() + 1));

  auto at_most_one = [&](const std::vector<Lit>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = i + 1; j < xs.size(); ++j) b.add({-xs[i], -xs[j]});
  };

  for (int l = 0; l < eta; ++l) {
    b.family(family::kFlowEndpoints);
    for (VertexId u = 0; u < n; ++u) {
      b.add({-W(u, l), M(u, l)});
      b.add({-W(u, l), M(u, l + 1)});
      for (VertexId v : g.neighbors(u)) {
        b.add({-E(u, v, l), M(u, l)});
        b.add({-E(u, v, l), M(v, l + 1)});
      }
    }
    b.family(family::kFlowAtMostOne);
    for (VertexId u = 0; u < n; ++u) {
      std::vector<Lit> out{W(u, l)}, in{W(u, l)};
      for (VertexId v : g.neighbors(u)) {
        out.push_back(E(u, v, l));
        in.push_back(E(v, u, l));
      }
      at_most_one(out);
      at_most_one(in);
    }
    b.family(family::kFlowSupport);
    for (VertexId u = 0; u < n; ++u) {
      Clause out{-M(u, l), W(u, l)}, in{-M(u, l + 1), W(u, l)};
      for (VertexId v : g.neighbors(u)) {
        out.push_back(E(u, v, l));
        in.push_back(E(v, u, l));
      }
      b.add(out);
      b.add(in);
    }
    b.family(family::kFlowNonOverlap);
    for (VertexId u = 0; u < n; ++u)
      for (VertexId v : g.neighbors(u)) b.add({-E(u, v, l), -M(v, l)});
    b.family(family::kMapEqual);
    for (VertexId u = 0; u < n; ++u) {
      b.add(var_eq(A[l][u], A[l + 1][u], W(u, l)));
      for (VertexId v : g.neighbors(u)) b.add(var_eq(A[l][u], A[l + 1][v], E(u, v, l)));
    }
  }
  b.family(family::kMapSaturate);
  for (int l = 0; l <= eta; ++l)
    for (VertexId v = 0; v < n; ++v)
      for (int i = 0; i < wa; ++i) b.add({-A[l][v][i], M(v, l)});

  b.family(family::kBoundary);
  auto start = inverse_values(inst.initial), goal = inverse_values(inst.goal);
  for (VertexId v = 0; v < n; ++v) {
    b.units(const_eq(A[0][v], start[v]));
    b.add({start[v] ? M(v, 0) : -M(v, 0)});
  }
  for (VertexId v = 0; v < n; ++v) {
    b.units(const_eq(A[eta][v], goal[v]));
    b.add({goal[v] ? M(v, eta) : -M(v, eta)});
  }
  return b.finish();
}

namespace {

EncodedInstance encode_occupancy(const CpfInstance& inst, int eta, EncodingKind kind, EncodeOptions opts) {
  Builder b(inst, eta, kind, opts);
  const bool simplified = kind == EncodingKind::kSimplified;
  const Graph& g = inst.graph;
  const int n = g.vertex_count();
  const int mu = inst.agent_count();

  for (int l = 0; l <= eta; ++l) {
    for (AgentId a = 0; a < mu; ++a)
      for (VertexId v = 0; v < n; ++v) b.var(VarKind::kOccupancy, a, v, l);
    if (simplified)
      for (VertexId v = 0; v < n; ++v) b.var(VarKind::kVacancy, v, l);
  }
  auto X = [&](AgentId a, VertexId v, int l) { return b.at(VarKind::kOccupancy, a, v, l); };

  b.family(family::kAgentPlaced);
  for (int l = 0; l <= eta; ++l)
    for (AgentId a = 0; a < mu; ++a) {
      Clause some;
      for (VertexId u = 0; u < n; ++u) {
        some.push_back(X(a, u, l));
        for (VertexId v = u + 1; v < n; ++v) b.add({-X(a, u, l), -X(a, v, l)});
      }
      b.add(some);
    }

  b.family(family::kVertexAtMostOne);
  for (int l = 0; l <= eta; ++l)
    for (VertexId v = 0; v < n; ++v)
      for (AgentId a = 0; a < mu; ++a)
        for (AgentId c = a + 1; c < mu; ++c) b.add({-X(a, v, l), -X(c, v, l)});

  b.family(family::kNeighborhood);
  for (int l = 0; l < eta; ++l)
    for (AgentId a = 0; a < mu; ++a)
      for (VertexId v = 0; v < n; ++v) {
        Clause fwd{-X(a, v, l), X(a, v, l + 1)}, bwd{-X(a, v, l + 1), X(a, v, l)};
        for (VertexId u : g.neighbors(v)) {
          fwd.push_back(X(a, u, l + 1));
          bwd.push_back(X(a, u, l));
        }
        b.add(fwd);
        b.add(bwd);
      }

  // A move v -> u needs u vacant before the move. Vacancy of v after the
  // move follows from this clause applied to the other agents together with
  // the per-vertex at-most-one constraint.
  if (simplified) {
    b.family(family::kVacancyLink);
    for (int l = 0; l <= eta; ++l)
      for (VertexId u = 0; u < n; ++u)
        for (AgentId a = 0; a < mu; ++a) b.add({-b.at(VarKind::kVacancy, u, l), -X(a, u, l)});
    b.family(family::kMoveVacantAux);
    for (int l = 0; l < eta; ++l)
      for (AgentId a = 0; a < mu; ++a)
        for (VertexId v = 0; v < n; ++v)
          for (VertexId u : g.neighbors(v)) b.add({-X(a, v, l), -X(a, u, l + 1), b.at(VarKind::kVacancy, u, l)});
  } else {
    b.family(family::kMoveVacant);
    for (int l = 0; l < eta; ++l)
      for (AgentId a = 0; a < mu; ++a)
        for (VertexId v = 0; v < n; ++v)
          for (VertexId u : g.neighbors(v))
            for (AgentId c = 0; c < mu; ++c) b.add({-X(a, v, l), -X(a, u, l + 1), -X(c, u, l)});
  }

  b.family(family::kBoundary);
  for (int l : {0, eta}) {
    const Arrangement& arr = l == 0 ? inst.initial : inst.goal;
    for (AgentId a = 0; a < mu; ++a)
      for (VertexId v = 0; v < n; ++v) b.add({arr.location(a) == v ? X(a, v, l) : -X(a, v, l)});
  }
  return b.finish();
}

}  // namespace

EncodedInstance encode_direct(const CpfInstance& inst, int eta, EncodeOptions opts) {
  return encode_occupancy(inst, eta, EncodingKind::kDirect, opts);
}

EncodedInstance encode_simplified(const CpfInstance& inst, int eta, EncodeOptions opts) {
  return encode_occupancy(inst, eta, EncodingKind::kSimplified, opts);
}

EncodedInstance encode(const CpfInstance& inst, int eta, EncodingKind kind, EncodeOptions opts) {
  switch (kind) {
    case EncodingKind::kInverse: return encode_inverse(inst, eta, opts);
    case EncodingKind::kAllDifferent: return encode_alldifferent(inst, eta, opts);
    case EncodingKind::kMatching: return encode_matching(inst, eta, opts);
    case EncodingKind::kDirect: return encode_direct(inst, eta, opts);
    case EncodingKind::kSimplified: return encode_simplified(inst, eta, opts);
  }
  throw std::logic_error("unknown encoding");
}

namespace {

BitVector lookup_bits(const VarMap& vm, VarKind kind, int i, int j, int width) {
  BitVector out;
  for (int bit = 0; bit < width; ++bit) out.bits.push_back(vm.at({kind, i, j, bit}));
  return out;
}

}  // namespace

EncodedInstance apply_distance_heuristic(EncodedInstance enc, const ReachWindow& windows) {
  if (windows.eta() != enc.eta || windows.agent_count() != enc.agent_count)
    throw InputError("reach windows computed for a different instance or bound");
  Cnf& cnf = enc.cnf;
  cnf.set_family(family::kHeuristic);
  const int n = enc.vertex_count;
  for (int l = 0; l <= enc.eta; ++l)
    for (AgentId a = 0; a < enc.agent_count; ++a)
      for (VertexId v = 0; v < n; ++v) {
        if (windows.allows(a, v, l)) continue;
        switch (enc.kind) {
          case EncodingKind::kInverse:
          case EncodingKind::kMatching: {
            BitVector A = lookup_bits(enc.varmap, VarKind::kAgentBit, v, l, bits_for(enc.agent_count + 1));
            cnf.add_clause(const_neq(A, static_cast<std::uint64_t>(a) + 1));
            break;
          }
          case EncodingKind::kAllDifferent: {
            BitVector L = lookup_bits(enc.varmap, VarKind::kLocationBit, a, l, bits_for(n));
            cnf.add_clause(const_neq(L, static_cast<std::uint64_t>(v)));
            break;
          }
          case EncodingKind::kDirect:
          case EncodingKind::kSimplified:
            cnf.add_clause({-enc.varmap.at({VarKind::kOccupancy, a, v, l})});
            break;
        }
      }
  enc.refresh_stats();
  return enc;
}

Solution decode(const EncodedInstance& enc, const Assignment& model, const CpfInstance& inst) {
  const int n = inst.vertex_count();
  const int mu = inst.agent_count();
  if (enc.vertex_count != n || enc.agent_count != mu) throw InputError("model decoded against a different instance");
  Solution sol;
  for (int l = 0; l <= enc.eta; ++l) {
    std::vector<VertexId> loc(mu, kNoVertex);
    auto place = [&](AgentId a, VertexId v) {
      if (a < 0 || a >= mu) throw DecodeError(a, l, "agent index out of range at v" + std::to_string(v + 1));
      if (loc[a] != kNoVertex)
        throw DecodeError(a, l, "placed on both v" + std::to_string(loc[a] + 1) + " and v" + std::to_string(v + 1));
      loc[a] = v;
    };
    switch (enc.kind) {
      case EncodingKind::kInverse:
      case EncodingKind::kMatching: {
        const int w = bits_for(mu + 1);
        for (VertexId v = 0; v < n; ++v) {
          auto value = value_of(lookup_bits(enc.varmap, VarKind::kAgentBit, v, l, w), model);
          if (value != 0) place(static_cast<AgentId>(value - 1), v);
        }
        break;
      }
      case EncodingKind::kAllDifferent: {
        const int w = bits_for(n);
        for (AgentId a = 0; a < mu; ++a) {
          auto value = value_of(lookup_bits(enc.varmap, VarKind::kLocationBit, a, l, w), model);
          if (value >= static_cast<std::uint64_t>(n)) throw DecodeError(a, l, "location outside the vertex range");
          place(a, static_cast<VertexId>(value));
        }
        break;
      }
      case EncodingKind::kDirect:
      case EncodingKind::kSimplified:
        for (AgentId a = 0; a < mu; ++a)
          for (VertexId v = 0; v < n; ++v)
            if (model[enc.varmap.at({VarKind::kOccupancy, a, v, l})]) place(a, v);
        break;
    }
    for (AgentId a = 0; a < mu; ++a)
      if (loc[a] == kNoVertex) throw DecodeError(a, l, "agent placed nowhere");
    try {
      sol.steps.emplace_back(n, std::move(loc));
    } catch (const InputError& e) {
      throw DecodeError(kNoAgent, l, e.what());
    }
  }
  return sol;
}

}  // namespace cpfsat
