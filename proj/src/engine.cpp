#include "su/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <thread>

#include "su/allocator.hpp"
#include "su/errors.hpp"
#include "su/worker_pool.hpp"

namespace su {

ModelState StochasticAlgorithm::initial_state(std::uint64_t /*seed*/) const {
  ModelState s;
  s.x.assign(model_size(), 0.0);
  return s;
}

void StochasticAlgorithm::begin_epoch(std::size_t epoch, double stepsize, std::uint64_t epoch_length) {
  epoch_ = epoch;
  stepsize_ = stepsize;
  epoch_length_ = epoch_length;
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::kSerial: return "serial";
    case Mode::kConflictFree: return "conflict-free";
    case Mode::kHogwild: return "hogwild";
  }
  return "unknown";
}

Mode parse_mode(const std::string& text) {
  if (text == "serial") return Mode::kSerial;
  if (text == "conflict-free") return Mode::kConflictFree;
  if (text == "hogwild") return Mode::kHogwild;
  throw InputError("unknown mode '" + text + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Shared bookkeeping for the three execution modes.
class RunTracker {
 public:
  RunTracker(Mode mode, StochasticAlgorithm& alg, ModelState& state, const RunConfig& config)
      : alg_(alg), state_(state), config_(config) {
    if (state.x.size() != alg.model_size()) throw InputError("model state does not match the algorithm's dimension");
    if (config.plan.num_updates != alg.graph().num_updates()) {
      throw InputError("sample plan size does not match the number of updates");
    }
    if (config.threads == 0) throw InputError("thread count must be at least 1");
    config.plan.validate();
    record_.mode = mode;
    record_.algorithm = alg.name();
    record_.threads = mode == Mode::kSerial ? 1 : config.threads;
    record_.seed = config.plan.seed;
    record_.stepsize = config.stepsize;
    alg_.prepare(state_);
    record_.initial_objective = alg_.objective(state_);
  }

  void begin_epoch(std::size_t epoch) {
    const double gamma = config_.stepsize * std::pow(config_.stepsize_decay, static_cast<double>(epoch));
    alg_.begin_epoch(epoch, gamma, config_.plan.num_updates);
  }

  void end_epoch(std::size_t epoch, double partition_time, double update_time, Clock::time_point epoch_start) {
    alg_.end_epoch(state_);
    cumulative_ += seconds_since(epoch_start);
    state_.update_clock += config_.plan.num_updates;

    EpochRecord e;
    e.epoch = epoch + 1;
    e.partition_time = partition_time;
    e.update_time = update_time;
    e.cumulative_time = cumulative_;
    e.objective = alg_.objective(state_);
    const double ref = std::abs(record_.initial_objective);
    if (!std::isfinite(e.objective) || (ref > 0.0 && std::abs(e.objective) > 1e3 * ref)) record_.diverged = true;
    record_.epochs.push_back(e);
  }

  RunRecord finish() { return std::move(record_); }

 private:
  StochasticAlgorithm& alg_;
  ModelState& state_;
  const RunConfig& config_;
  RunRecord record_;
  double cumulative_ = 0.0;
};

struct BatchPlan {
  ConflictGroups groups;
  std::vector<std::vector<std::uint32_t>> per_core;  // group indices in ascending order
};

void check_write_sets(const BatchPlan& plan, const UpdateVariableGraph& g, std::vector<std::uint32_t>& owner,
                      std::vector<std::size_t>& stamp, std::size_t batch_stamp) {
  for (std::size_t core = 0; core < plan.per_core.size(); ++core) {
    for (std::uint32_t grp : plan.per_core[core]) {
      for (const auto& item : plan.groups.group(grp)) {
        for (VarId j : g.support(item.id)) {
          if (stamp[j] == batch_stamp && owner[j] != core) {
            throw std::logic_error("write sets of two cores overlap on variable " + std::to_string(j));
          }
          stamp[j] = batch_stamp;
          owner[j] = static_cast<std::uint32_t>(core);
        }
      }
    }
  }
}

BatchPlan plan_batch(ConflictGroups groups, const UpdateVariableGraph& g, std::size_t cores, std::uint64_t kappa) {
  BatchPlan plan;
  const Allocation alloc = greedy_allocate(groups, g, cores, kappa);
  plan.per_core.resize(cores);
  for (std::size_t grp = 0; grp < groups.num_groups(); ++grp) {
    plan.per_core[alloc.core_of_group[grp]].push_back(static_cast<std::uint32_t>(grp));
  }
  plan.groups = std::move(groups);
  return plan;
}

void execute_core(StochasticAlgorithm& alg, ModelState& state, const BatchPlan& plan, std::size_t core,
                  std::uint64_t epoch_base) {
  for (std::uint32_t grp : plan.per_core[core]) {
    for (const auto& item : plan.groups.group(grp)) {
      alg.apply(item.id, item.label - epoch_base + 1, state);
    }
  }
}

}  // namespace

RunRecord run_serial(StochasticAlgorithm& alg, ModelState& state, const RunConfig& config) {
  RunTracker tracker(Mode::kSerial, alg, state, config);
  for (std::size_t epoch = 0; epoch < config.plan.epochs; ++epoch) {
    const auto start = Clock::now();
    tracker.begin_epoch(epoch);
    const auto ids = epoch_samples(config.plan, epoch);
    const double partition_time = seconds_since(start);

    const auto update_start = Clock::now();
    for (std::size_t k = 0; k < ids.size(); ++k) alg.apply(ids[k], k + 1, state);
    tracker.end_epoch(epoch, partition_time, seconds_since(update_start), start);
  }
  return tracker.finish();
}

RunRecord run_hogwild(StochasticAlgorithm& alg, ModelState& state, const RunConfig& config) {
  RunTracker tracker(Mode::kHogwild, alg, state, config);
  WorkerPool pool(config.threads, config.pin_threads);
  const std::size_t workers = pool.size();
  for (std::size_t epoch = 0; epoch < config.plan.epochs; ++epoch) {
    const auto start = Clock::now();
    tracker.begin_epoch(epoch);
    const auto ids = epoch_samples(config.plan, epoch);
    const double partition_time = seconds_since(start);

    const auto update_start = Clock::now();
    // Contiguous slices of the serial stream, applied without synchronisation.
    pool.run([&](std::size_t worker) {
      const std::size_t lo = ids.size() * worker / workers;
      const std::size_t hi = ids.size() * (worker + 1) / workers;
      for (std::size_t k = lo; k < hi; ++k) alg.apply(ids[k], k + 1, state);
    });
    tracker.end_epoch(epoch, partition_time, seconds_since(update_start), start);
  }
  return tracker.finish();
}

namespace {

/// Partitions one epoch's batches with every worker running BFS (or the
/// pool-wide push-label) and the greedy allocator.
std::vector<BatchPlan> partition_epoch(const std::vector<Batch>& batches, const UpdateVariableGraph& g,
                                       const RunConfig& config, WorkerPool& pool,
                                       std::vector<GroupFinder>& finders) {
  std::vector<BatchPlan> plans(batches.size());
  const std::size_t workers = pool.size();
  if (config.cc_method == CcMethod::kBfs) {
    pool.run([&](std::size_t worker) {
      for (std::size_t b = worker; b < batches.size(); b += workers) {
        plans[b] = plan_batch(finders[worker].bfs(batches[b]), g, workers, config.kappa);
      }
    });
  } else {
    for (std::size_t b = 0; b < batches.size(); ++b) {
      plans[b] = plan_batch(finders[0].push_label(batches[b], &pool), g, workers, config.kappa);
    }
  }
  return plans;
}

}  // namespace

RunRecord run_conflict_free(StochasticAlgorithm& alg, ModelState& state, const RunConfig& config) {
  RunTracker tracker(Mode::kConflictFree, alg, state, config);
  const auto& g = alg.graph();
  WorkerPool pool(config.threads, config.pin_threads);
  const std::size_t workers = pool.size();
  std::vector<GroupFinder> finders(workers, GroupFinder(g));
  SampleStream stream(config.plan);

  std::vector<std::uint32_t> owner;
  std::vector<std::size_t> stamp;
  if (config.check_write_sets) {
    owner.assign(g.num_variables(), 0);
    stamp.assign(g.num_variables(), static_cast<std::size_t>(-1));
  }

  for (std::size_t epoch = 0; epoch < config.plan.epochs; ++epoch) {
    const auto start = Clock::now();
    tracker.begin_epoch(epoch);
    const std::uint64_t epoch_base = static_cast<std::uint64_t>(epoch) * config.plan.num_updates;
    double partition_time = 0.0;
    double update_time = 0.0;

    if (!config.pipelined) {
      const auto batches = stream.next_epoch();
      const auto plans = partition_epoch(batches, g, config, pool, finders);
      if (config.check_write_sets) {
        for (std::size_t b = 0; b < plans.size(); ++b) check_write_sets(plans[b], g, owner, stamp, batches[b].batch_index);
      }
      partition_time = seconds_since(start);

      const auto update_start = Clock::now();
      for (const auto& plan : plans) {
        pool.run([&](std::size_t core) { execute_core(alg, state, plan, core, epoch_base); });
      }
      update_time = seconds_since(update_start);
    } else {
      // A background partitioner runs ahead while workers execute earlier
      // batches; partition_time is the time workers spend waiting on it.
      const auto sample_start = Clock::now();
      const auto batches = stream.next_epoch();
      partition_time += seconds_since(sample_start);
      std::vector<BatchPlan> plans(batches.size());
      std::atomic<std::size_t> ready{0};
      std::exception_ptr partition_error;
      std::jthread partitioner([&] {
        try {
          GroupFinder finder(g);
          for (std::size_t b = 0; b < batches.size(); ++b) {
            plans[b] = plan_batch(finder.bfs(batches[b]), g, workers, config.kappa);
            if (config.check_write_sets) check_write_sets(plans[b], g, owner, stamp, batches[b].batch_index);
            ready.store(b + 1, std::memory_order_release);
            ready.notify_all();
          }
        } catch (...) {
          partition_error = std::current_exception();
          ready.store(batches.size() + 1, std::memory_order_release);
          ready.notify_all();
        }
      });
      for (std::size_t b = 0; b < batches.size(); ++b) {
        const auto wait_start = Clock::now();
        for (auto seen = ready.load(std::memory_order_acquire); seen <= b; seen = ready.load(std::memory_order_acquire)) {
          ready.wait(seen, std::memory_order_acquire);
        }
        partition_time += seconds_since(wait_start);
        if (partition_error) break;
        const auto update_start = Clock::now();
        pool.run([&](std::size_t core) { execute_core(alg, state, plans[b], core, epoch_base); });
        update_time += seconds_since(update_start);
      }
      partitioner.join();
      if (partition_error) std::rethrow_exception(partition_error);
    }
    tracker.end_epoch(epoch, partition_time, update_time, start);
  }
  return tracker.finish();
}

RunRecord run(Mode mode, StochasticAlgorithm& alg, ModelState& state, const RunConfig& config) {
  switch (mode) {
    case Mode::kSerial: return run_serial(alg, state, config);
    case Mode::kConflictFree: return run_conflict_free(alg, state, config);
    case Mode::kHogwild: return run_hogwild(alg, state, config);
  }
  throw InputError("unknown mode");
}

SpeedupTable measure_speedup(const std::vector<RunRecord>& records) {
  SpeedupTable table;
  if (records.empty()) throw InputError("no runs to compare");

  auto best = [](const RunRecord& r) {
    double m = r.epochs.empty() ? r.initial_objective : std::numeric_limits<double>::infinity();
    for (const auto& e : r.epochs) {
      if (std::isfinite(e.objective)) m = std::min(m, e.objective);
    }
    return m;
  };
  // Diverged runs do not shape ε; they are reported as never reaching it.
  table.epsilon = -std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    const double m = best(r);
    if (!r.diverged && std::isfinite(m)) table.epsilon = std::max(table.epsilon, m);
  }
  if (!std::isfinite(table.epsilon)) throw InputError("no converging run to define epsilon");

  struct Reach {
    double total = 0.0;
    double updates = 0.0;
    bool reached = false;
  };
  auto reach = [&](const RunRecord& r) {
    Reach out;
    double partition = 0.0;
    if (r.diverged) return out;
    if (r.initial_objective <= table.epsilon) return Reach{0.0, 0.0, true};
    for (const auto& e : r.epochs) {
      partition += e.partition_time;
      if (e.objective <= table.epsilon) return Reach{e.cumulative_time, e.cumulative_time - partition, true};
    }
    return out;
  };

  const bool has_serial = std::any_of(records.begin(), records.end(), [](const RunRecord& r) { return r.mode == Mode::kSerial; });
  auto is_baseline = [&](const RunRecord& r) {
    return has_serial ? r.mode == Mode::kSerial : (r.mode == Mode::kHogwild && r.threads == 1);
  };

  std::map<std::pair<Mode, std::size_t>, std::vector<Reach>> grouped;
  std::vector<Reach> baseline;
  for (const auto& r : records) {
    const Reach h = reach(r);
    if (!h.reached) {
      table.warnings.push_back(to_string(r.mode) + " threads=" + std::to_string(r.threads) + " seed=" +
                               std::to_string(r.seed) + (r.diverged ? " diverged" : " never reached epsilon") + "; excluded");
      continue;
    }
    if (is_baseline(r)) {
      // The baseline is charged its full time on both measures.
      const Reach full{h.total, h.total, true};
      baseline.push_back(full);
      grouped[{r.mode, r.threads}].push_back(full);
      continue;
    }
    grouped[{r.mode, r.threads}].push_back(h);
  }
  if (baseline.empty()) throw InputError("speedup needs a 1-thread baseline run");

  auto mean = [](const std::vector<Reach>& v, auto field) {
    double s = 0.0;
    for (const auto& h : v) s += h.*field;
    return s / static_cast<double>(v.size());
  };
  const double base_total = mean(baseline, &Reach::total);
  for (const auto& [key, reaches] : grouped) {
    SpeedupRow row;
    row.mode = key.first;
    row.threads = key.second;
    row.time_to_epsilon = mean(reaches, &Reach::total);
    row.update_time_to_epsilon = mean(reaches, &Reach::updates);
    row.speedup = row.time_to_epsilon > 0.0 ? base_total / row.time_to_epsilon : 1.0;
    row.updates_speedup = row.update_time_to_epsilon > 0.0 ? base_total / row.update_time_to_epsilon : 1.0;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace su
