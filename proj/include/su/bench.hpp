#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "su/conflict_groups.hpp"
#include "su/engine.hpp"
#include "su/factory.hpp"
#include "su/sampler.hpp"

namespace su {

struct ExperimentConfig {
  std::string algorithm = "sgd";
  std::string dataset = "synth-ls:rows=1000,cols=1000,nnz=5";
  std::vector<Mode> modes{Mode::kSerial};
  std::vector<std::size_t> threads{1};
  std::vector<std::uint64_t> seeds{1};
  std::size_t epochs = 10;
  std::size_t batch_size = 0;  // 0 selects floor((1 − ε)n/Δ)
  std::size_t conflict_degree = 0;  // overrides the computed Δ when nonzero
  double epsilon = 0.1;
  double stepsize = 1e-3;
  double stepsize_decay = 1.0;
  double filter_top = 0.0;
  std::size_t outer_iterations = 1;  // svrg-eigen only
  CcMethod cc_method = CcMethod::kBfs;
  SamplingScheme scheme = SamplingScheme::kWithoutReplacement;
  bool pipelined = false;
  std::uint64_t data_seed = 1;
  AlgorithmOptions options;

  void validate() const;
};

/// Loads the dataset (applying --filter-top) once per call.
Dataset load_experiment_data(const ExperimentConfig& config);

/// The batch size a run of `alg` uses under `config`.
std::size_t effective_batch_size(const ExperimentConfig& config, const StochasticAlgorithm& alg);

/// One run per (mode, threads, seed). Serial mode ignores the thread list and
/// runs once per seed with 1 thread.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& text);

/// Columns: run_id, mode, algorithm, dataset, threads, seed, epoch, objective,
/// partition_time_s, update_time_s, cumulative_time_s.
void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs, const std::string& dataset);

/// Inverse of write_runs_csv. Initial objectives are not stored and read back
/// as +inf; a run with a non-finite objective is marked diverged.
std::vector<RunRecord> read_runs_csv(std::istream& in);

/// Columns: mode, threads, epsilon, time_to_epsilon_s, update_time_to_epsilon_s,
/// speedup, updates_speedup.
void write_speedup_csv(std::ostream& out, const SpeedupTable& table);

struct BatchStats {
  std::size_t epoch = 0;  // 1-based
  std::size_t batch = 0;  // global index
  std::size_t updates = 0;
  std::size_t groups = 0;
  double mean_group_size = 0.0;
  std::size_t max_group_size = 0;
  std::size_t induced_edges = 0;
  double partition_time = 0.0;  // sampling + groups + allocation
};

struct EpochPartitionStats {
  std::size_t epoch = 0;
  std::size_t batches = 0;
  std::size_t groups = 0;
  double mean_group_size = 0.0;
  std::size_t max_group_size = 0;
  std::size_t induced_edges = 0;
  double partition_time = 0.0;
  double hogwild_epoch_time = 0.0;  // update time of one Hogwild epoch, same threads
  double partition_ratio = 0.0;     // partition_time / hogwild_epoch_time
};

struct PartitionStats {
  std::size_t conflict_degree = 0;
  std::size_t batch_size = 0;
  std::vector<BatchStats> batches;
  std::vector<EpochPartitionStats> epochs;
};

/// Uses the first entry of config.threads and config.seeds.
PartitionStats partition_stats(const ExperimentConfig& config);

void write_partition_csv(std::ostream& out, const PartitionStats& stats);

struct EquivalenceCheck {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool identical = false;
  double max_abs_difference = 0.0;
};

/// Serial vs. conflict-free final models, for every (seed, threads).
std::vector<EquivalenceCheck> verify_equivalence(const ExperimentConfig& config);

}  // namespace su
