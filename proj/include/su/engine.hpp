#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "su/conflict_groups.hpp"
#include "su/graph.hpp"
#include "su/sampler.hpp"

namespace su {

struct ModelState {
  std::vector<double> x;
  std::uint64_t update_clock = 0;  // labelled updates applied so far
};

/// An algorithm of the Stochastic Updates family: repeatedly sample an update
/// i and rewrite the model on the variables of S_i only.
///
/// apply() may run concurrently for updates whose supports are disjoint, and
/// must then touch no shared state outside the coordinates owned by S_i (plus
/// per-update state of i itself). Epoch hooks always run on one thread.
class StochasticAlgorithm {
 public:
  virtual ~StochasticAlgorithm() = default;

  virtual std::string name() const = 0;
  virtual const UpdateVariableGraph& graph() const = 0;
  virtual std::size_t model_size() const = 0;

  /// Model coordinates [first, last) owned by variable j.
  virtual std::pair<std::size_t, std::size_t> coordinates(VarId j) const { return {j, j + 1}; }

  virtual ModelState initial_state(std::uint64_t seed) const;

  /// Rebuilds auxiliary state (memories, anchors, clocks) for a run starting at `state`.
  virtual void prepare(const ModelState& state) = 0;

  virtual void begin_epoch(std::size_t epoch, double stepsize, std::uint64_t epoch_length);

  /// `step` is the 1-based serial position of this update inside the epoch.
  virtual void apply(UpdateId i, std::uint64_t step, ModelState& state) = 0;

  virtual void end_epoch(ModelState& /*state*/) {}

  virtual double objective(const ModelState& state) const = 0;

 protected:
  double stepsize_ = 0.0;
  std::size_t epoch_ = 0;
  std::uint64_t epoch_length_ = 0;
};

enum class Mode { kSerial, kConflictFree, kHogwild };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

struct RunConfig {
  SamplePlan plan;
  double stepsize = 0.0;
  double stepsize_decay = 1.0;  // γ_e = γ·decay^e
  std::size_t threads = 1;
  CcMethod cc_method = CcMethod::kBfs;
  bool pipelined = false;
  bool check_write_sets = false;
  bool pin_threads = false;
  std::uint64_t kappa = 1;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double objective = 0.0;
  double partition_time = 0.0;   // sampling + groups + allocation
  double update_time = 0.0;      // stochastic updates only
  double cumulative_time = 0.0;  // all epoch work so far, objective evaluation excluded
};

struct RunRecord {
  Mode mode = Mode::kSerial;
  std::string algorithm;
  std::size_t threads = 1;
  std::uint64_t seed = 0;
  double stepsize = 0.0;
  double initial_objective = 0.0;
  bool diverged = false;
  std::vector<EpochRecord> epochs;
};

RunRecord run_serial(StochasticAlgorithm& alg, ModelState& state, const RunConfig& config);
RunRecord run_conflict_free(StochasticAlgorithm& alg, ModelState& state, const RunConfig& config);
RunRecord run_hogwild(StochasticAlgorithm& alg, ModelState& state, const RunConfig& config);
RunRecord run(Mode mode, StochasticAlgorithm& alg, ModelState& state, const RunConfig& config);

struct SpeedupRow {
  Mode mode = Mode::kSerial;
  std::size_t threads = 1;
  double time_to_epsilon = 0.0;
  double update_time_to_epsilon = 0.0;  // time to ε minus the partition time spent so far
  double speedup = 0.0;
  double updates_speedup = 0.0;
};

struct SpeedupTable {
  double epsilon = 0.0;
  std::vector<SpeedupRow> rows;
  std::vector<std::string> warnings;
};

/// ε = max over runs of the run's best objective; speedup = baseline time to
/// reach ε / run time to reach ε, averaged over seeds per (mode, threads).
/// The baseline is the serial mode, or a 1-thread Hogwild run if no serial
/// run is present. The updates-only speedup divides the baseline's full time
/// to ε by the run's time to ε without its partition time; baseline rows keep
/// their full time, so they read 1.0 on both measures.
SpeedupTable measure_speedup(const std::vector<RunRecord>& records);

}  // namespace su
