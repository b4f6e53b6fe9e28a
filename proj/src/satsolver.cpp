#include "cpfsat/satsolver.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <fstream>
#include <queue>
#include <sstream>
#include <thread>

#include "cpfsat/model.hpp"

namespace cpfsat {

void SolverConfig::check() const {
  if (!(time_limit_seconds > 0)) throw InputError("solver time limit must be positive");
  if (mode == Mode::kExternal && command.empty()) throw InputError("external solver mode needs a command");
}

std::string_view to_string(SatResult::Status status) {
  switch (status) {
    case SatResult::Status::kSat: return "SAT";
    case SatResult::Status::kUnsat: return "UNSAT";
    case SatResult::Status::kTimeout: return "TIMEOUT";
    case SatResult::Status::kSolverError: return "SOLVER_ERROR";
  }
  return "?";
}

namespace {

SatResult verified(const Cnf& cnf, SatResult r) {
  if (r.status != SatResult::Status::kSat || !cnf.keeps_clauses()) return r;
  if (auto bad = r.model.first_violated(cnf)) {
    r.status = SatResult::Status::kSolverError;
    r.diagnostic = "model falsifies clause " + std::to_string(*bad + 1);
    r.model = Assignment();
  }
  return r;
}

class Dpll {
 public:
  Dpll(const Cnf& cnf, std::optional<Deadline> deadline) : deadline_(deadline), n_(cnf.var_count()) {
    value_.assign(n_ + 1, kOpen);
    watches_.resize(2 * (static_cast<std::size_t>(n_) + 1));
    std::vector<char> occurs(n_ + 1, 0);
    for (std::size_t i = 0; i < static_cast<std::size_t>(cnf.clause_count()); ++i) {
      auto c = cnf.clause(i);
      for (Lit l : c) occurs[std::abs(l)] = 1;
      if (c.size() == 1) {
        units_.push_back(c[0]);
        continue;
      }
      int id = static_cast<int>(start_.size());
      start_.push_back(static_cast<int>(lits_.size()));
      size_.push_back(static_cast<int>(c.size()));
      lits_.insert(lits_.end(), c.begin(), c.end());
      watches_[index(c[0])].push_back(id);
      watches_[index(c[1])].push_back(id);
    }
    for (int v = 1; v <= n_; ++v)
      if (!occurs[v]) value_[v] = kFalse;
  }

  SatResult run() {
    SatResult r;
    for (Lit u : units_) {
      if (is_false(u)) return unsat();
      if (!is_true(u)) assign(u);
    }
    if (!propagate()) return unsat();
    int cursor = 1;
    while (true) {
      if (timed_out()) {
        r.status = SatResult::Status::kTimeout;
        r.diagnostic = "embedded solver deadline reached";
        return r;
      }
      while (cursor <= n_ && value_[cursor] != kOpen) ++cursor;
      if (cursor > n_) break;
      levels_.push_back({trail_.size(), cursor, false});
      assign(-cursor);
      while (!propagate()) {
        // Undo levels whose both branches failed, then flip the newest
        // remaining decision.
        while (!levels_.empty() && levels_.back().flipped) pop_level(cursor);
        if (levels_.empty()) return unsat();
        Level top = levels_.back();
        pop_level(cursor);
        levels_.push_back({trail_.size(), top.var, true});
        assign(top.var);
      }
    }
    r.status = SatResult::Status::kSat;
    r.model = Assignment(n_);
    for (int v = 1; v <= n_; ++v) r.model.set(v, value_[v] == kTrue);
    return r;
  }

 private:
  static constexpr signed char kOpen = 0, kTrue = 1, kFalse = -1;
  struct Level {
    std::size_t trail_start;
    int var;
    bool flipped;
  };

  static std::size_t index(Lit l) { return 2 * static_cast<std::size_t>(std::abs(l)) + (l < 0); }
  bool is_true(Lit l) const { return value_[std::abs(l)] == (l > 0 ? kTrue : kFalse); }
  bool is_false(Lit l) const { return value_[std::abs(l)] == (l > 0 ? kFalse : kTrue); }
  void assign(Lit l) {
    value_[std::abs(l)] = l > 0 ? kTrue : kFalse;
    trail_.push_back(l);
  }

  void pop_level(int& cursor) {
    Level lv = levels_.back();
    levels_.pop_back();
    while (trail_.size() > lv.trail_start) {
      value_[std::abs(trail_.back())] = kOpen;
      trail_.pop_back();
    }
    qhead_ = trail_.size();
    cursor = std::min(cursor, lv.var);
  }

  // Returns false on conflict.
  bool propagate() {
    while (qhead_ < trail_.size()) {
      Lit falsified = -trail_[qhead_++];
      auto& ws = watches_[index(falsified)];
      std::size_t keep = 0;
      for (std::size_t k = 0; k < ws.size(); ++k) {
        int id = ws[k];
        Lit* c = &lits_[start_[id]];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        // c[1] is now the falsified watch.
        if (is_true(c[0])) {
          ws[keep++] = id;
          continue;
        }
        bool moved = false;
        for (int j = 2; j < size_[id]; ++j)
          if (!is_false(c[j])) {
            std::swap(c[1], c[j]);
            watches_[index(c[1])].push_back(id);
            moved = true;
            break;
          }
        if (moved) continue;
        ws[keep++] = id;
        if (is_false(c[0])) {
          for (std::size_t r = k + 1; r < ws.size(); ++r) ws[keep++] = ws[r];
          ws.resize(keep);
          qhead_ = trail_.size();
          return false;
        }
        assign(c[0]);
      }
      ws.resize(keep);
      if ((++ticks_ & 0xfff) == 0 && timed_out()) return true;
    }
    return true;
  }

  bool timed_out() {
    if (!deadline_) return false;
    if (expired_) return true;
    expired_ = std::chrono::steady_clock::now() >= *deadline_;
    return expired_;
  }

  SatResult unsat() const {
    SatResult r;
    r.status = SatResult::Status::kUnsat;
    return r;
  }

  std::optional<Deadline> deadline_;
  bool expired_ = false;
  int n_;
  std::vector<signed char> value_;
  std::vector<Lit> lits_;
  std::vector<int> start_, size_;
  std::vector<std::vector<int>> watches_;
  std::vector<Lit> units_;
  std::vector<Lit> trail_;
  std::size_t qhead_ = 0;
  std::vector<Level> levels_;
  std::uint64_t ticks_ = 0;
};


class Cdcl {
 public:
  Cdcl(const Cnf& cnf, std::optional<Deadline> deadline) : deadline_(deadline), n_(cnf.var_count()) {
    value_.assign(n_ + 1, 0);
    level_.assign(n_ + 1, 0);
    reason_.assign(n_ + 1, -1);
    phase_.assign(n_ + 1, 0);
    activity_.assign(n_ + 1, 0.0);
    seen_.assign(n_ + 1, 0);
    watches_.resize(2 * (static_cast<std::size_t>(n_) + 1));
    std::vector<char> occurs(n_ + 1, 0);
    for (std::size_t i = 0; i < static_cast<std::size_t>(cnf.clause_count()); ++i) {
      auto c = cnf.clause(i);
      for (Lit l : c) occurs[std::abs(l)] = 1;
      if (c.size() == 1) units_.push_back(c[0]);
      else attach(Clause(c.begin(), c.end()), false);
    }
    for (int v = 1; v <= n_; ++v) {
      if (!occurs[v]) value_[v] = -1;
      else heap_.push({0.0, -v});
    }
    max_learnts_ = static_cast<double>(clauses_.size()) / 3 + 2000;
  }

  SatResult run() {
    for (Lit u : units_) {
      if (is_false(u)) return status(SatResult::Status::kUnsat);
      if (!is_true(u)) assign(u, -1);
    }
    if (propagate() >= 0) return status(SatResult::Status::kUnsat);
    std::int64_t restart = 0, budget = luby(0) * 100, conflicts = 0;
    while (true) {
      int confl = propagate();
      if (confl >= 0) {
        ++conflicts;
        if (decision_level() == 0) return status(SatResult::Status::kUnsat);
        int bt = 0;
        Clause learnt = analyze(confl, bt);
        cancel_until(bt);
        if (learnt.size() == 1) {
          assign(learnt[0], -1);
        } else {
          int id = attach(std::move(learnt), true);
          assign(clauses_[id][0], id);
        }
        var_inc_ /= 0.95;
        if ((conflicts & 0xff) == 0 && timed_out()) return status(SatResult::Status::kTimeout);
        continue;
      }
      if (timed_out()) return status(SatResult::Status::kTimeout);
      if (conflicts >= budget) {
        cancel_until(0);
        budget = conflicts + luby(++restart) * 100;
      }
      if (static_cast<double>(learnt_count_) - static_cast<double>(trail_.size()) >= max_learnts_) {
        reduce();
        max_learnts_ *= 1.1;
      }
      int v = pick();
      if (v == 0) break;
      trail_lim_.push_back(trail_.size());
      assign(phase_[v] ? v : -v, -1);
    }
    SatResult r = status(SatResult::Status::kSat);
    r.model = Assignment(n_);
    for (int v = 1; v <= n_; ++v) r.model.set(v, value_[v] > 0);
    return r;
  }

 private:
  static std::size_t index(Lit l) { return 2 * static_cast<std::size_t>(std::abs(l)) + (l < 0); }
  bool is_true(Lit l) const { return value_[std::abs(l)] == (l > 0 ? 1 : -1); }
  bool is_false(Lit l) const { return value_[std::abs(l)] == (l > 0 ? -1 : 1); }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  static std::int64_t luby(std::int64_t i) {
    std::int64_t size = 1, seq = 0;
    while (size < i + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    std::int64_t x = i;
    while (size - 1 != x) {
      size = (size - 1) >> 1;
      --seq;
      x = x % size;
    }
    return std::int64_t{1} << seq;
  }

  int attach(Clause c, bool learnt) {
    int id = static_cast<int>(clauses_.size());
    watches_[index(c[0])].push_back(id);
    watches_[index(c[1])].push_back(id);
    clauses_.push_back(std::move(c));
    learnt_.push_back(learnt);
    learnt_count_ += learnt;
    return id;
  }

  void assign(Lit l, int reason) {
    int v = std::abs(l);
    value_[v] = l > 0 ? 1 : -1;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t i = trail_.size(); i > trail_lim_[lvl]; --i) {
      int v = std::abs(trail_[i - 1]);
      phase_[v] = value_[v] > 0;
      value_[v] = 0;
      reason_[v] = -1;
      heap_.push({activity_[v], -v});
    }
    trail_.resize(trail_lim_[lvl]);
    trail_lim_.resize(lvl);
    qhead_ = trail_.size();
  }

  int pick() {
    while (!heap_.empty()) {
      auto [act, neg] = heap_.top();
      heap_.pop();
      int v = -neg;
      if (value_[v] == 0 && act == activity_[v]) return v;
    }
    // Stale entries may hide open variables after rescaling.
    for (int v = 1; v <= n_; ++v)
      if (value_[v] == 0) return v;
    return 0;
  }

  void bump(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
      heap_ = {};
      for (int u = 1; u <= n_; ++u)
        if (value_[u] == 0) heap_.push({activity_[u], -u});
    } else if (value_[v] == 0) {
      heap_.push({activity_[v], -v});
    }
  }

  // Returns the index of a falsified clause, or -1.
  int propagate() {
    while (qhead_ < trail_.size()) {
      Lit falsified = -trail_[qhead_++];
      auto& ws = watches_[index(falsified)];
      std::size_t keep = 0;
      for (std::size_t k = 0; k < ws.size(); ++k) {
        int id = ws[k];
        Clause& c = clauses_[id];
        if (c.empty()) continue;  // deleted
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (is_true(c[0])) {
          ws[keep++] = id;
          continue;
        }
        bool moved = false;
        for (std::size_t j = 2; j < c.size(); ++j)
          if (!is_false(c[j])) {
            std::swap(c[1], c[j]);
            watches_[index(c[1])].push_back(id);
            moved = true;
            break;
          }
        if (moved) continue;
        ws[keep++] = id;
        if (is_false(c[0])) {
          for (std::size_t r = k + 1; r < ws.size(); ++r) ws[keep++] = ws[r];
          ws.resize(keep);
          qhead_ = trail_.size();
          return id;
        }
        assign(c[0], id);
      }
      ws.resize(keep);
    }
    return -1;
  }

  Clause analyze(int confl, int& bt_level) {
    Clause learnt{0};
    int open = 0;
    Lit p = 0;
    std::size_t i = trail_.size();
    do {
      for (Lit q : clauses_[confl]) {
        int v = std::abs(q);
        if (p != 0 && v == std::abs(p)) continue;
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        bump(v);
        if (level_[v] >= decision_level()) ++open;
        else learnt.push_back(q);
      }
      while (!seen_[std::abs(trail_[--i])]) {
      }
      p = trail_[i];
      confl = reason_[std::abs(p)];
      seen_[std::abs(p)] = 0;
      --open;
    } while (open > 0);
    learnt[0] = -p;
    bt_level = 0;
    std::size_t at = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      seen_[std::abs(learnt[k])] = 0;
      if (level_[std::abs(learnt[k])] > bt_level) {
        bt_level = level_[std::abs(learnt[k])];
        at = k;
      }
    }
    if (learnt.size() > 1) std::swap(learnt[1], learnt[at]);
    return learnt;
  }

  void reduce() {
    std::vector<int> candidates;
    for (int id = 0; id < static_cast<int>(clauses_.size()); ++id) {
      const Clause& c = clauses_[id];
      if (!learnt_[id] || c.size() <= 2) continue;
      int v = std::abs(c[0]);
      if (reason_[v] == id && value_[v] != 0) continue;  // locked
      candidates.push_back(id);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](int a, int b) { return clauses_[a].size() > clauses_[b].size(); });
    for (std::size_t k = 0; k < candidates.size() / 2; ++k) {
      clauses_[candidates[k]].clear();
      clauses_[candidates[k]].shrink_to_fit();
      --learnt_count_;
    }
  }

  bool timed_out() {
    if (!deadline_) return false;
    return std::chrono::steady_clock::now() >= *deadline_;
  }

  SatResult status(SatResult::Status st) const {
    SatResult r;
    r.status = st;
    if (st == SatResult::Status::kTimeout) r.diagnostic = "embedded solver deadline reached";
    return r;
  }

  std::optional<Deadline> deadline_;
  int n_;
  std::vector<signed char> value_;
  std::vector<int> level_, reason_;
  std::vector<char> phase_, seen_;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::priority_queue<std::pair<double, int>> heap_;
  std::vector<Clause> clauses_;
  std::vector<char> learnt_;
  std::int64_t learnt_count_ = 0;
  double max_learnts_ = 0;
  std::vector<std::vector<int>> watches_;
  std::vector<Lit> units_, trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
};

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string substitute(std::string cmd, const std::string& path) {
  const std::string key = "{cnf}";
  std::size_t pos = cmd.find(key);
  if (pos == std::string::npos) return cmd + " '" + path + "'";
  while (pos != std::string::npos) {
    cmd.replace(pos, key.size(), "'" + path + "'");
    pos = cmd.find(key, pos + path.size() + 2);
  }
  return cmd;
}

}  // namespace

SatResult embedded_dpll(const Cnf& cnf, std::optional<Deadline> deadline) {
  if (!cnf.keeps_clauses()) throw InputError("cannot solve a counting-only formula");
  return verified(cnf, Dpll(cnf, deadline).run());
}

SatResult embedded_cdcl(const Cnf& cnf, std::optional<Deadline> deadline) {
  if (!cnf.keeps_clauses()) throw InputError("cannot solve a counting-only formula");
  return verified(cnf, Cdcl(cnf, deadline).run());
}

SatResult run_external(const Cnf& cnf, const SolverConfig& cfg) {
  static std::atomic<unsigned> counter{0};
  namespace fs = std::filesystem;
  fs::path dir = cfg.work_dir.empty() ? fs::temp_directory_path() : cfg.work_dir;
  fs::create_directories(dir);
  std::string stem = "cpfsat-" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
  fs::path cnf_path = dir / (stem + ".cnf");
  fs::path out_path = dir / (stem + ".out");
  {
    std::ofstream out(cnf_path, std::ios::binary);
    write_dimacs(out, cnf);
    if (!out) return {SatResult::Status::kSolverError, {}, "cannot write " + cnf_path.string()};
  }
  std::string cmd = substitute(cfg.command, cnf_path.string());
  auto cleanup = [&] {
    std::error_code ec;
    fs::remove(cnf_path, ec);
    fs::remove(out_path, ec);
  };

  pid_t pid = ::fork();
  if (pid < 0) {
    cleanup();
    return {SatResult::Status::kSolverError, {}, "fork failed"};
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    int fd = ::open(out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd >= 0) {
      ::dup2(fd, STDOUT_FILENO);
      ::close(fd);
    }
    ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(cfg.time_limit_seconds));
  int status = 0;
  while (true) {
    pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      cleanup();
      return {SatResult::Status::kTimeout, {}, "external solver exceeded the time limit"};
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  std::string output = read_file(out_path);
  cleanup();

  SatResult r;
  try {
    SolverVerdict v = read_model(output, cnf.var_count());
    switch (v.status) {
      case SolverVerdict::Status::kSat:
        r.status = SatResult::Status::kSat;
        r.model = std::move(v.model);
        break;
      case SolverVerdict::Status::kUnsat: r.status = SatResult::Status::kUnsat; break;
      case SolverVerdict::Status::kUnknown:
        r.status = SatResult::Status::kTimeout;
        r.diagnostic = "solver answered UNKNOWN";
        break;
    }
  } catch (const SolverProtocolError& e) {
    r.status = SatResult::Status::kSolverError;
    r.diagnostic = e.what();
    if (WIFEXITED(status)) r.diagnostic += " (exit status " + std::to_string(WEXITSTATUS(status)) + ")";
    else if (WIFSIGNALED(status)) r.diagnostic += " (killed by signal " + std::to_string(WTERMSIG(status)) + ")";
  }
  return verified(cnf, std::move(r));
}

SatResult solve(const Cnf& cnf, const SolverConfig& cfg) {
  cfg.check();
  if (cfg.mode == SolverConfig::Mode::kExternal) return run_external(cnf, cfg);
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(cfg.time_limit_seconds));
  return cfg.engine == SolverConfig::Engine::kDpll ? embedded_dpll(cnf, deadline) : embedded_cdcl(cnf, deadline);
}

}  // namespace cpfsat
