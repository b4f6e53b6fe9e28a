#include "cpfsat/bench.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <tuple>
#include <variant>

#include "cpfsat/oracle.hpp"

namespace cpfsat {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw InputError("Rng::below needs a positive bound");
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  while (true) {
    std::uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

int GridSpec::obstacle_count() const {
  return static_cast<int>(std::floor(obstacle_fraction * cells()));
}

std::string GridSpec::label() const { return std::to_string(width) + "x" + std::to_string(height); }

CpfInstance generate_grid_instance(const GridSpec& spec) {
  if (spec.width < 1 || spec.height < 1) throw InputError("grid dimensions must be positive");
  if (spec.obstacle_fraction < 0 || spec.obstacle_fraction >= 1) throw InputError("obstacle fraction must lie in [0, 1)");
  const int cells = spec.cells();
  const int obstacles = spec.obstacle_count();
  if (spec.agents < 0 || spec.agents > cells - obstacles)
    throw InputError("grid " + spec.label() + " has " + std::to_string(cells - obstacles) + " free cells for " +
                     std::to_string(spec.agents) + " agents");
  Rng rng(spec.seed);

  std::vector<int> order(cells);
  std::iota(order.begin(), order.end(), 0);
  std::vector<char> blocked(cells, 0);
  for (int i = 0; i < obstacles; ++i) {
    auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(cells - i)));
    std::swap(order[i], order[j]);
    blocked[order[i]] = 1;
  }

  std::vector<VertexId> id(cells, kNoVertex);
  int n = 0;
  for (int c = 0; c < cells; ++c)
    if (!blocked[c]) id[c] = n++;
  std::vector<Edge> edges;
  for (int y = 0; y < spec.height; ++y)
    for (int x = 0; x < spec.width; ++x) {
      int c = y * spec.width + x;
      if (blocked[c]) continue;
      if (x + 1 < spec.width && !blocked[c + 1]) edges.push_back({id[c], id[c + 1]});
      if (y + 1 < spec.height && !blocked[c + spec.width]) edges.push_back({id[c], id[c + spec.width]});
    }

  auto place = [&] {
    std::vector<VertexId> free(n);
    std::iota(free.begin(), free.end(), 0);
    std::vector<VertexId> locs;
    for (int a = 0; a < spec.agents; ++a) {
      auto k = rng.below(free.size());
      locs.push_back(free[k]);
      free.erase(free.begin() + static_cast<std::ptrdiff_t>(k));
    }
    return Arrangement(n, std::move(locs));
  };
  Arrangement start = place();
  Arrangement goal = place();
  return CpfInstance(Graph(n, std::move(edges)), std::move(start), std::move(goal));
}

bool filter_solvable(const CpfInstance& inst, const FilterOptions& opts) {
  if (precheck(inst).unsolvable) return false;
  double space = std::pow(static_cast<double>(inst.vertex_count()), inst.agent_count());
  if (space <= opts.oracle_state_limit) {
    try {
      return oracle_makespan(inst, default_eta_cap(inst), static_cast<std::int64_t>(opts.oracle_state_limit) + 1)
          .solved();
    } catch (const ResourceError&) {
    }
  }
  return std::holds_alternative<Optimal>(find_optimal(inst, opts.driver).outcome);
}

std::pair<CpfInstance, std::uint64_t> generate_solvable(GridSpec spec, const FilterOptions& opts, int max_attempts) {
  for (int i = 0; i < max_attempts; ++i, ++spec.seed) {
    CpfInstance inst = generate_grid_instance(spec);
    if (filter_solvable(inst, opts)) return {std::move(inst), spec.seed};
  }
  throw InputError("no solvable instance for grid " + spec.label() + " within " + std::to_string(max_attempts) +
                   " seeds");
}

std::vector<SizeAggregate> aggregate(const std::vector<SizeRow>& rows) {
  std::vector<SizeAggregate> out;
  std::map<std::tuple<std::string, int, EncodingKind>, std::size_t> index;
  for (const SizeRow& r : rows) {
    auto key = std::make_tuple(r.grid, r.agents, r.encoding);
    auto [it, fresh] = index.emplace(key, out.size());
    if (fresh) out.push_back({r.grid, r.agents, r.encoding});
    SizeAggregate& a = out[it->second];
    ++a.instances;
    a.variables += static_cast<double>(r.stats.variables);
    a.clauses += static_cast<double>(r.stats.clauses);
    a.ratio += r.stats.ratio;
    a.length += r.stats.mean_clause_length;
  }
  for (SizeAggregate& a : out) {
    a.variables /= a.instances;
    a.clauses /= a.instances;
    a.ratio /= a.instances;
    a.length /= a.instances;
  }
  return out;
}

SizeReport size_study(const std::vector<SizeCell>& cells, const std::vector<EncodingKind>& encodings, int seeds,
                      bool distance_heuristic) {
  SizeReport report;
  for (const SizeCell& cell : cells)
    for (int mu : cell.agent_counts)
      for (int s = 0; s < seeds; ++s) {
        GridSpec spec = cell.grid;
        spec.agents = mu;
        spec.seed = static_cast<std::uint64_t>(s);
        CpfInstance inst = generate_grid_instance(spec);
        for (EncodingKind kind : encodings) {
          EncodedInstance enc = encode(inst, cell.eta, kind, {.keep_clauses = false});
          if (distance_heuristic) enc = apply_distance_heuristic(std::move(enc), ReachWindow(inst, cell.eta));
          report.rows.push_back({spec.label(), mu, spec.seed, kind, enc.stats});
        }
      }
  report.aggregates = aggregate(report.rows);
  return report;
}

std::vector<RuntimeAggregate> aggregate(const std::vector<RuntimeRow>& rows) {
  std::vector<RuntimeAggregate> out;
  std::vector<std::vector<double>> times;
  std::map<std::tuple<std::string, int, EncodingKind>, std::size_t> index;
  for (const RuntimeRow& r : rows) {
    auto [it, fresh] = index.emplace(std::make_tuple(r.grid, r.agents, r.encoding), out.size());
    if (fresh) {
      out.push_back({r.grid, r.agents, r.encoding});
      times.emplace_back();
    }
    RuntimeAggregate& a = out[it->second];
    ++a.instances;
    times[it->second].push_back(r.seconds);
    a.mean_seconds += r.seconds;
    if (r.solved) {
      ++a.solved;
      a.mean_makespan += r.makespan;
      a.mean_total_moves += r.total_moves;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    RuntimeAggregate& a = out[i];
    a.mean_seconds /= a.instances;
    if (a.solved) {
      a.mean_makespan /= a.solved;
      a.mean_total_moves /= a.solved;
    }
    auto& t = times[i];
    std::sort(t.begin(), t.end());
    a.median_seconds = t.size() % 2 ? t[t.size() / 2] : (t[t.size() / 2 - 1] + t[t.size() / 2]) / 2;
  }
  return out;
}

std::vector<MoveDifference> move_differences(const std::vector<RuntimeRow>& rows,
                                             const std::vector<EncodingKind>& encodings) {
  std::map<std::tuple<std::string, int, std::uint64_t>, int> reference;
  for (const RuntimeRow& r : rows)
    if (r.encoding == EncodingKind::kSimplified && r.solved) reference[{r.grid, r.agents, r.seed}] = r.total_moves;
  std::vector<MoveDifference> out;
  for (EncodingKind kind : encodings) {
    if (kind == EncodingKind::kSimplified) continue;
    MoveDifference d{kind, {}};
    for (const RuntimeRow& r : rows) {
      if (r.encoding != kind || !r.solved) continue;
      auto it = reference.find({r.grid, r.agents, r.seed});
      if (it != reference.end()) d.sorted.push_back(r.total_moves - it->second);
    }
    std::sort(d.sorted.begin(), d.sorted.end());
    out.push_back(std::move(d));
  }
  return out;
}

RuntimeReport runtime_study(const std::vector<GridSpec>& grids, const std::vector<EncodingKind>& encodings,
                            const RuntimeOptions& opts) {
  RuntimeReport report;
  for (const GridSpec& grid : grids) {
    std::vector<char> active(encodings.size(), 1);
    const int free_cells = grid.cells() - grid.obstacle_count();
    for (int mu = 1; mu <= std::min(opts.max_agents, free_cells); mu += opts.agent_step) {
      if (std::none_of(active.begin(), active.end(), [](char c) { return c != 0; })) break;
      std::vector<CpfInstance> suite;
      std::vector<std::uint64_t> used;
      std::uint64_t seed = grid.seed;
      for (int s = 0; s < opts.seeds; ++s) {
        GridSpec spec = grid;
        spec.agents = mu;
        spec.seed = seed;
        auto [inst, got] = generate_solvable(spec, opts.filter);
        suite.push_back(std::move(inst));
        used.push_back(got);
        seed = got + 1;
      }
      for (std::size_t e = 0; e < encodings.size(); ++e) {
        if (!active[e]) continue;
        bool all = true;
        for (std::size_t i = 0; i < suite.size(); ++i) {
          DriverConfig cfg = opts.driver;
          cfg.encoding = encodings[e];
          SolveReport rep = find_optimal(suite[i], cfg);
          RuntimeRow row{grid.label(), mu, used[i], encodings[e], false, rep.seconds, -1, -1};
          if (auto* o = std::get_if<Optimal>(&rep.outcome)) {
            SolutionMetrics m = metrics(o->solution);
            row.solved = true;
            row.makespan = m.makespan;
            row.total_moves = m.total_moves;
          } else {
            all = false;
          }
          report.rows.push_back(row);
        }
        if (!all) active[e] = 0;
      }
    }
  }
  report.aggregates = aggregate(report.rows);
  report.differences = move_differences(report.rows, encodings);
  return report;
}

namespace {

struct Fixed {
  double v;
};
std::ostream& operator<<(std::ostream& out, Fixed f) {
  return out << std::fixed << std::setprecision(3) << f.v << std::defaultfloat;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<SizeRow>& rows) {
  out << "grid,agents,seed,encoding,#Variables,#Clauses,Ratio,Length\n";
  for (const SizeRow& r : rows)
    out << r.grid << ',' << r.agents << ',' << r.seed << ',' << to_string(r.encoding) << ',' << r.stats.variables << ','
        << r.stats.clauses << ',' << Fixed{r.stats.ratio} << ',' << Fixed{r.stats.mean_clause_length} << '\n';
}

void write_csv(std::ostream& out, const std::vector<SizeAggregate>& aggs) {
  out << "grid,agents,encoding,instances,#Variables,#Clauses,Ratio,Length\n";
  for (const SizeAggregate& a : aggs)
    out << a.grid << ',' << a.agents << ',' << to_string(a.encoding) << ',' << a.instances << ',' << Fixed{a.variables}
        << ',' << Fixed{a.clauses} << ',' << Fixed{a.ratio} << ',' << Fixed{a.length} << '\n';
}

void write_csv(std::ostream& out, const std::vector<RuntimeRow>& rows) {
  out << "grid,agents,seed,encoding,solved,seconds,makespan,total_moves\n";
  for (const RuntimeRow& r : rows)
    out << r.grid << ',' << r.agents << ',' << r.seed << ',' << to_string(r.encoding) << ',' << (r.solved ? 1 : 0)
        << ',' << Fixed{r.seconds} << ',' << r.makespan << ',' << r.total_moves << '\n';
}

void write_csv(std::ostream& out, const std::vector<RuntimeAggregate>& aggs) {
  out << "grid,agents,encoding,instances,solved,mean_seconds,median_seconds,mean_makespan,mean_total_moves\n";
  for (const RuntimeAggregate& a : aggs)
    out << a.grid << ',' << a.agents << ',' << to_string(a.encoding) << ',' << a.instances << ',' << a.solved << ','
        << Fixed{a.mean_seconds} << ',' << Fixed{a.median_seconds} << ',' << Fixed{a.mean_makespan} << ','
        << Fixed{a.mean_total_moves} << '\n';
}

void write_csv(std::ostream& out, const std::vector<MoveDifference>& diffs) {
  out << "encoding,rank,difference_vs_SIMPLIFIED\n";
  for (const MoveDifference& d : diffs)
    for (std::size_t i = 0; i < d.sorted.size(); ++i)
      out << to_string(d.encoding) << ',' << i + 1 << ',' << d.sorted[i] << '\n';
}

}  // namespace cpfsat
