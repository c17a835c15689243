// Acceptance suite: one PASS/FAIL/SKIP line per criterion.
//
//   acceptance                 all criteria
//   acceptance --only 8,9      a subset
//   acceptance --force-speedup measure the speedup criteria even on fewer than 4 cores
//
// Exit status: 0 when nothing failed (77 when every selected criterion was
// skipped), 1 otherwise.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "gradient_checks.hpp"
#include "lazy_eager.hpp"
#include "optimization.hpp"
#include "oracles.hpp"
#include "su/algorithms/linear.hpp"
#include "su/allocator.hpp"
#include "su/conflict_groups.hpp"
#include "su/worker_pool.hpp"

namespace {

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

// Pinned tolerances and sizes.
constexpr double kLazyTolerance = 1e-9;
constexpr double kGradientTolerance = 1e-6;
constexpr double kSagaTolerance = 1e-6;
constexpr std::size_t kSagaEpochLimit = 500;
constexpr double kCosineThreshold = 0.99;
constexpr double kCompletionReduction = 0.9;
constexpr double kGroupSuccessRate = 0.99;
constexpr double kMinSpeedup = 2.0;
constexpr std::size_t kSpeedupCores = 4;
constexpr double kFilterFraction = 0.0005;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Outcome serial_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  std::size_t runs = 0, mismatches = 0;
  std::string first_bad;
  for (const auto& name : fixture::equivalence_algorithms()) {
    for (std::uint64_t seed : {1, 2, 3}) {
      auto tc = fixture::make_case(name, seed);
      auto& alg = *tc.problem->algorithm;
      const std::size_t n = alg.graph().num_updates();
      const std::size_t delta = su::compute_conflict_degree(alg.graph());
      auto c = fixture::config_for(alg, tc.stepsize, su::prescribed_batch_size(n, delta, 0.1), 2, seed);
      auto serial = alg.initial_state(seed);
      su::run_serial(alg, serial, c);
      for (std::size_t threads : {1, 2, 4, 8}) {
        c.threads = threads;
        auto par = alg.initial_state(seed);
        su::run_conflict_free(alg, par, c);
        ++runs;
        if (!fixture::bit_identical(serial.x, par.x)) {
          ++mismatches;
          if (first_bad.empty()) first_bad = name + " seed " + std::to_string(seed) + " threads " + std::to_string(threads);
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = mismatches == 0 && secs < 300.0;
  std::string d = std::to_string(runs - mismatches) + "/" + std::to_string(runs) + " runs bit-identical, " + fmt(secs) + " s";
  if (!first_bad.empty()) d += "; first mismatch: " + first_bad;
  return {ok ? Verdict::kPass : Verdict::kFail, d};
}

Outcome phase_transition() {
  const std::size_t n = 10000;
  const double eps = 0.5;
  auto g = su::UpdateVariableGraph::build(su::synth_regular_supports(n, 5, 5, 2024), n);
  const std::size_t delta = su::compute_conflict_degree(g);
  const std::size_t b = su::prescribed_batch_size(n, delta, eps);
  const double bound = 4.0 / (eps * eps) * std::log(static_cast<double>(n));
  std::string d = "Delta=" + std::to_string(delta) + " B=" + std::to_string(b) + " bound=" + fmt(bound);
  bool ok = true;
  su::GroupFinder finder(g);
  for (auto scheme : {su::SamplingScheme::kWithReplacement, su::SamplingScheme::kWithoutReplacement}) {
    std::size_t within = 0, largest = 0, oracle_mismatch = 0;
    for (std::uint64_t t = 0; t < 200; ++t) {
      su::SampleStream stream({scheme, n, b, 1, 5000 + t});
      const auto batch = *stream.next_batch();
      const auto groups = finder.bfs(batch);
      if (oracle::as_groups(groups) != oracle::components(g, batch)) ++oracle_mismatch;
      largest = std::max(largest, groups.max_group_size());
      if (static_cast<double>(groups.max_group_size()) <= bound) ++within;
    }
    const double rate = static_cast<double>(within) / 200.0;
    ok = ok && rate >= kGroupSuccessRate && oracle_mismatch == 0;
    d += std::string("; ") + (scheme == su::SamplingScheme::kWithReplacement ? "with" : "without") +
         " replacement: " + fmt(100.0 * rate) + "% within, largest " + std::to_string(largest) +
         ", oracle mismatches " + std::to_string(oracle_mismatch);
  }
  return {ok ? Verdict::kPass : Verdict::kFail, d};
}

Outcome push_label_equivalence() {
  std::mt19937_64 rng(77);
  su::WorkerPool pool(4);
  std::size_t agree = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> nd(2, 2000), kd(1, 4);
    const std::size_t n = nd(rng);
    const std::size_t d = std::max<std::size_t>(1, n / 2);
    std::uniform_int_distribution<su::VarId> var(0, static_cast<su::VarId>(d - 1));
    std::vector<std::vector<su::VarId>> supports(n);
    for (auto& s : supports) {
      const auto k = kd(rng);
      for (std::size_t t = 0; t < k; ++t) s.push_back(var(rng));
    }
    auto g = su::UpdateVariableGraph::build(supports, d);
    std::uniform_int_distribution<std::size_t> bd(1, n);
    su::SampleStream stream({trial % 2 ? su::SamplingScheme::kWithReplacement : su::SamplingScheme::kWithoutReplacement, n,
                             bd(rng), 1, static_cast<std::uint64_t>(trial)});
    const auto batch = *stream.next_batch();
    const auto expect = oracle::components(g, batch);
    su::GroupFinder finder(g);
    const bool same = oracle::as_groups(finder.bfs(batch)) == expect &&
                      oracle::as_groups(finder.push_label(batch, nullptr)) == expect &&
                      oracle::as_groups(finder.push_label(batch, &pool)) == expect;
    agree += same ? 1 : 0;
  }
  return {agree == 200 ? Verdict::kPass : Verdict::kFail, std::to_string(agree) + "/200 batches agree at 1 and 4 threads"};
}

std::uint64_t exhaustive_optimum(std::vector<std::uint64_t> w, std::size_t cores) {
  std::sort(w.rbegin(), w.rend());
  std::vector<std::uint64_t> load(cores, 0);
  std::uint64_t best = std::accumulate(w.begin(), w.end(), std::uint64_t{0});
  std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t k, std::uint64_t current) {
    if (current >= best) return;
    if (k == w.size()) {
      best = current;
      return;
    }
    std::set<std::uint64_t> tried;
    for (std::size_t c = 0; c < cores; ++c) {
      if (!tried.insert(load[c]).second) continue;
      load[c] += w[k];
      rec(k + 1, std::max(current, load[c]));
      load[c] -= w[k];
    }
  };
  rec(0, 0);
  return best;
}

Outcome allocation_bound() {
  // Generator fixed before looking at results: 1..50 groups, 1..16 cores,
  // integer weights 1..100.
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<std::size_t> md(1, 50), pd(1, 16);
  std::uniform_int_distribution<std::uint64_t> wd(1, 100);
  std::size_t lb_ok = 0, small = 0, small_ok = 0;
  std::string example;
  for (int t = 0; t < 1000; ++t) {
    std::vector<std::uint64_t> w(md(rng));
    for (auto& x : w) x = wd(rng);
    const std::size_t p = pd(rng);
    const auto greedy = su::greedy_allocate(w, p).max_load();
    const std::uint64_t total = std::accumulate(w.begin(), w.end(), std::uint64_t{0});
    const std::uint64_t lower = std::max(*std::max_element(w.begin(), w.end()), (total + p - 1) / p);
    if (3 * greedy <= 4 * lower) {
      ++lb_ok;
    } else if (example.empty()) {
      example = std::to_string(w.size()) + " groups on " + std::to_string(p) + " cores: greedy " +
                std::to_string(greedy) + " vs 4/3 x " + std::to_string(lower);
    }
    if (w.size() <= 12) {
      ++small;
      if (3 * greedy <= 4 * exhaustive_optimum(w, p)) ++small_ok;
    }
  }
  std::string d = "lower-bound form " + std::to_string(lb_ok) + "/1000; vs exhaustive optimum " +
                  std::to_string(small_ok) + "/" + std::to_string(small);
  if (!example.empty()) d += "; e.g. " + example;
  return {lb_ok == 1000 && small_ok == small ? Verdict::kPass : Verdict::kFail, d};
}

Outcome lazy_vs_eager() {
  std::string d;
  bool ok = true;
  for (const auto& r : lazyeager::run_all({1, 2, 3, 4, 5}, 3, su::Mode::kSerial, 1)) {
    ok = ok && r.worst <= kLazyTolerance;
    d += (d.empty() ? "" : ", ") + r.name + " " + fmt(r.worst);
  }
  return {ok ? Verdict::kPass : Verdict::kFail, "max relative deviation: " + d};
}

Outcome gradients() {
  std::string d;
  bool ok = true;
  for (const auto& r : gradcheck::run_all(20, 42)) {
    ok = ok && r.worst <= kGradientTolerance;
    d += (d.empty() ? "" : ", ") + r.name + " " + fmt(r.worst);
  }
  return {ok ? Verdict::kPass : Verdict::kFail, "worst relative error: " + d};
}

Outcome optimization() {
  const auto saga = optim::saga_vs_normal_equations(su::Mode::kConflictFree, 4, kSagaTolerance);
  const double cosine = optim::eigenvector_cosine(su::Mode::kConflictFree, 4);
  const double reduction = optim::completion_reduction(su::Mode::kConflictFree, 4);
  const bool a = saga.relative_error <= kSagaTolerance && saga.epochs <= kSagaEpochLimit;
  const bool b = cosine >= kCosineThreshold;
  const bool c = reduction >= kCompletionReduction;
  return {a && b && c ? Verdict::kPass : Verdict::kFail,
          "(a) SAGA rel. error " + fmt(saga.relative_error) + " after " + std::to_string(saga.epochs) +
              " epochs; (b) cosine " + fmt(cosine) + "; (c) objective reduced " + fmt(100.0 * reduction) + "%"};
}

struct EpochSplit {
  double partition = 0.0;
  double update = 0.0;
};

/// Mean per-epoch partition and update time of conflict-free SGD.
EpochSplit time_epochs(const su::SparseRows& rows, std::size_t threads, std::size_t epochs) {
  su::LinearSgd sgd(rows, su::Loss::kSquared);
  const auto& g = sgd.graph();
  su::RunConfig c;
  c.plan.num_updates = g.num_updates();
  c.plan.batch_size = su::prescribed_batch_size(g.num_updates(), su::compute_conflict_degree(g), 0.1);
  c.plan.epochs = epochs;
  c.plan.seed = 1;
  c.stepsize = 1e-3;
  c.threads = threads;
  c.pin_threads = true;
  auto s = sgd.initial_state(0);
  const auto r = su::run_conflict_free(sgd, s, c);
  EpochSplit out;
  for (const auto& e : r.epochs) {
    out.partition += e.partition_time / static_cast<double>(epochs);
    out.update += e.update_time / static_cast<double>(epochs);
  }
  return out;
}

bool enough_cores(bool force) { return force || su::physical_core_count() >= kSpeedupCores; }

Outcome scaled_speedup(bool force, std::size_t n) {
  if (!enough_cores(force)) {
    return {Verdict::kSkip, "needs >= " + std::to_string(kSpeedupCores) + " physical cores, found " +
                                std::to_string(su::physical_core_count())};
  }
  const auto rows = su::synth_least_squares(n, n, 10, 8);
  const auto one = time_epochs(rows, 1, 3);
  const auto four = time_epochs(rows, 4, 3);
  const double ratio = one.update / four.update;
  return {ratio >= kMinSpeedup ? Verdict::kPass : Verdict::kFail,
          "n=" + std::to_string(n) + " updates-only 1->4 threads " + fmt(ratio) + "x; per epoch partition/update " +
              fmt(one.partition) + "/" + fmt(one.update) + " s at 1 thread, " + fmt(four.partition) + "/" +
              fmt(four.update) + " s at 4 threads"};
}

Outcome filtering(bool force, std::size_t n) {
  const auto rows = su::synth_powerlaw_rows(n, 20000, 8, 1.0, 21);
  const auto filtered = su::filter_dense_features(rows, kFilterFraction);
  const std::size_t before = su::compute_conflict_degree(su::rows_graph(rows));
  const std::size_t after = su::compute_conflict_degree(su::rows_graph(filtered.rows));
  const bool reduced = after < before;
  std::string d = "removed " + std::to_string(filtered.removed) + " of " + std::to_string(rows.num_cols) +
                  " features, Delta " + std::to_string(before) + " -> " + std::to_string(after);
  if (!enough_cores(force)) {
    return {reduced ? Verdict::kSkip : Verdict::kFail,
            d + (reduced ? " (strictly reduced)" : " (NOT reduced)") + "; speedup comparison needs >= " +
                std::to_string(kSpeedupCores) + " physical cores, found " + std::to_string(su::physical_core_count())};
  }
  const auto b1 = time_epochs(rows, 1, 2), b4 = time_epochs(rows, 4, 2);
  const auto a1 = time_epochs(filtered.rows, 1, 2), a4 = time_epochs(filtered.rows, 4, 2);
  const double sb = b1.update / b4.update, sa = a1.update / a4.update;
  d += "; 1->4 thread updates-only speedup " + fmt(sb) + "x -> " + fmt(sa) + "x";
  return {reduced && sa > sb ? Verdict::kPass : Verdict::kFail, d};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> only;
  bool force = false;
  std::size_t speedup_n = 1000000;
  std::size_t filter_n = 100000;
  app.add_option("--only", only, "Criteria to run")->delimiter(',');
  app.add_flag("--force-speedup", force, "Run the speedup criteria regardless of core count");
  app.add_option("--speedup-updates", speedup_n, "Dataset size for criterion 8")->check(CLI::PositiveNumber);
  app.add_option("--filter-updates", filter_n, "Dataset size for criterion 9")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"serial equivalence", serial_equivalence},
      {"conflict-group phase transition", phase_transition},
      {"push-label = BFS = union-find", push_label_equivalence},
      {"allocation 4/3 bound", allocation_bound},
      {"lazy = eager", lazy_vs_eager},
      {"gradient checks", gradients},
      {"optimization correctness", optimization},
      {"scaled speedup", [&] { return scaled_speedup(force, speedup_n); }},
      {"dense-feature filtering", [&] { return filtering(force, filter_n); }},
  };
  std::size_t failed = 0, skipped = 0, ran = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    ++ran;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {Verdict::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::kPass ? "PASS" : o.verdict == Verdict::kFail ? "FAIL" : "SKIP";
    failed += o.verdict == Verdict::kFail;
    skipped += o.verdict == Verdict::kSkip;
    std::printf("[%s] %d %s: %s\n", tag, id, criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  if (failed > 0) return 1;
  return ran > 0 && skipped == ran ? 77 : 0;
}
