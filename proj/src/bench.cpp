#include "su/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <system_error>

#include "su/algorithms/eigen.hpp"
#include "su/allocator.hpp"
#include "su/data_io.hpp"
#include "su/errors.hpp"
#include "su/worker_pool.hpp"

namespace su {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

RunConfig run_config(const ExperimentConfig& c, const StochasticAlgorithm& alg, std::size_t threads, std::uint64_t seed) {
  RunConfig rc;
  rc.plan.scheme = c.scheme;
  rc.plan.num_updates = alg.graph().num_updates();
  rc.plan.batch_size = effective_batch_size(c, alg);
  rc.plan.epochs = c.epochs;
  rc.plan.seed = seed;
  rc.stepsize = c.stepsize;
  rc.stepsize_decay = c.stepsize_decay;
  rc.threads = threads;
  rc.cc_method = c.cc_method;
  rc.pipelined = c.pipelined;
  rc.pin_threads = true;
  return rc;
}

/// Shift-and-invert with several outer iterations, flattened into one record
/// whose epochs run on across the outer loop.
RunRecord run_shift_invert(const ExperimentConfig& c, Problem& p, Mode mode, std::size_t threads, std::uint64_t seed) {
  const auto& alg = dynamic_cast<const DenseLinearSvrg&>(*p.algorithm);
  ShiftInvertOptions o;
  o.shift = alg.shift();
  o.outer_iterations = c.outer_iterations;
  o.inner_epochs = c.epochs;
  o.stepsize = c.stepsize;
  o.mode = mode;
  o.threads = threads;
  o.batch_size = effective_batch_size(c, alg);
  o.seed = seed;
  const auto result = shift_invert_top_eigenvector(p.data.rows, o);
  RunRecord out;
  out.mode = mode;
  out.algorithm = alg.name();
  out.threads = threads;
  out.seed = seed;
  out.stepsize = c.stepsize;
  out.initial_objective = result.runs.empty() ? 0.0 : result.runs.front().initial_objective;
  double offset = 0.0;
  for (const auto& r : result.runs) {
    out.diverged = out.diverged || r.diverged;
    for (auto e : r.epochs) {
      e.epoch = out.epochs.size() + 1;
      e.cumulative_time += offset;
      out.epochs.push_back(e);
    }
    if (!r.epochs.empty()) offset += r.epochs.back().cumulative_time;
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char ch = line[k];
    if (quoted) {
      if (ch == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        out.back() += '"';
        ++k;
      } else if (ch == '"') {
        quoted = false;
      } else {
        out.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.emplace_back();
    } else if (ch != '\r') {
      out.back() += ch;
    }
  }
  if (quoted) throw ParseError("unterminated quote", line_no);
  return out;
}

template <class T>
T parse_integer(const std::string& text, std::size_t line_no) {
  T v{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) throw ParseError("bad integer '" + text + "'", line_no);
  return v;
}

const std::vector<std::string> kRunColumns{"run_id",    "mode",      "algorithm", "dataset",          "threads",        "seed",
                                           "epoch",     "objective", "partition_time_s", "update_time_s", "cumulative_time_s"};

}  // namespace

void ExperimentConfig::validate() const {
  if (modes.empty()) throw InputError("at least one mode is required");
  if (threads.empty() || std::find(threads.begin(), threads.end(), 0u) != threads.end()) {
    throw InputError("thread counts must be at least 1");
  }
  if (seeds.empty()) throw InputError("at least one seed is required");
  if (epochs == 0) throw InputError("epochs must be at least 1");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in [0, 1)");
  if (!(stepsize > 0.0)) throw InputError("stepsize must be positive");
  if (!(stepsize_decay > 0.0)) throw InputError("stepsize decay must be positive");
  if (!(filter_top >= 0.0 && filter_top < 1.0)) throw InputError("filter fraction must lie in [0, 1)");
  if (outer_iterations == 0) throw InputError("outer iterations must be at least 1");
  if (outer_iterations > 1 && algorithm != "svrg-eigen") throw InputError("outer iterations apply to svrg-eigen only");
}

Dataset load_experiment_data(const ExperimentConfig& config) {
  Dataset d = load(DatasetSpec::parse(config.dataset), config.data_seed);
  if (config.filter_top > 0.0) {
    if (d.rows.num_rows() == 0) throw InputError("feature filtering needs a dataset of sparse rows");
    d.rows = filter_dense_features(d.rows, config.filter_top).rows;
  }
  return d;
}

std::size_t effective_batch_size(const ExperimentConfig& config, const StochasticAlgorithm& alg) {
  const std::size_t n = alg.graph().num_updates();
  if (config.batch_size > 0) return std::min(config.batch_size, std::max<std::size_t>(n, 1));
  const std::size_t delta = config.conflict_degree > 0 ? config.conflict_degree : compute_conflict_degree(alg.graph());
  return prescribed_batch_size(n, delta, config.epsilon);
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Dataset data = load_experiment_data(config);
  std::vector<RunRecord> out;
  for (auto seed : config.seeds) {
    auto problem = make_problem(config.algorithm, data, config.options, seed);
    auto& alg = *problem->algorithm;
    for (auto mode : config.modes) {
      std::vector<std::size_t> thread_list = config.threads;
      if (mode == Mode::kSerial) thread_list = {1};
      for (auto threads : thread_list) {
        if (config.outer_iterations > 1) {
          out.push_back(run_shift_invert(config, *problem, mode, threads, seed));
          continue;
        }
        auto state = alg.initial_state(seed);
        out.push_back(run(mode, alg, state, run_config(config, alg, threads, seed)));
      }
    }
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) throw InputError("bad number '" + text + "'");
  return v;
}

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs, const std::string& dataset) {
  for (std::size_t k = 0; k < kRunColumns.size(); ++k) out << (k ? "," : "") << kRunColumns[k];
  out << '\n';
  for (std::size_t id = 0; id < runs.size(); ++id) {
    const auto& r = runs[id];
    for (const auto& e : r.epochs) {
      out << id << ',' << to_string(r.mode) << ',' << csv_field(r.algorithm) << ',' << csv_field(dataset) << ','
          << r.threads << ',' << r.seed << ',' << e.epoch << ',' << format_double(e.objective) << ','
          << format_double(e.partition_time) << ',' << format_double(e.update_time) << ','
          << format_double(e.cumulative_time) << '\n';
    }
  }
}

std::vector<RunRecord> read_runs_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::map<std::string, std::size_t>> index;
  std::map<std::string, RunRecord> by_id;
  std::vector<std::string> order;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line, line_no);
    if (!index) {
      index.emplace();
      for (std::size_t k = 0; k < fields.size(); ++k) (*index)[fields[k]] = k;
      for (const auto& c : kRunColumns) {
        if (!index->count(c)) throw ParseError("missing column '" + c + "'", line_no);
      }
      continue;
    }
    auto get = [&](const char* name) -> const std::string& {
      const auto k = index->at(name);
      if (k >= fields.size()) throw ParseError("too few fields", line_no);
      return fields[k];
    };
    const std::string& id = get("run_id");
    auto [it, fresh] = by_id.try_emplace(id);
    RunRecord& r = it->second;
    if (fresh) {
      order.push_back(id);
      try {
        r.mode = parse_mode(get("mode"));
      } catch (const InputError& e) {
        throw ParseError(e.what(), line_no);
      }
      r.algorithm = get("algorithm");
      r.threads = parse_integer<std::size_t>(get("threads"), line_no);
      r.seed = parse_integer<std::uint64_t>(get("seed"), line_no);
      r.initial_objective = std::numeric_limits<double>::infinity();
    }
    EpochRecord e;
    try {
      e.epoch = parse_integer<std::size_t>(get("epoch"), line_no);
      e.objective = parse_double(get("objective"));
      e.partition_time = parse_double(get("partition_time_s"));
      e.update_time = parse_double(get("update_time_s"));
      e.cumulative_time = parse_double(get("cumulative_time_s"));
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& err) {
      throw ParseError(err.what(), line_no);
    }
    if (!std::isfinite(e.objective)) r.diverged = true;
    r.epochs.push_back(e);
  }
  if (!index) throw InputError("empty CSV");
  std::vector<RunRecord> out;
  for (const auto& id : order) out.push_back(std::move(by_id[id]));
  return out;
}

void write_speedup_csv(std::ostream& out, const SpeedupTable& table) {
  out << "mode,threads,epsilon,time_to_epsilon_s,update_time_to_epsilon_s,speedup,updates_speedup\n";
  for (const auto& r : table.rows) {
    out << to_string(r.mode) << ',' << r.threads << ',' << format_double(table.epsilon) << ','
        << format_double(r.time_to_epsilon) << ',' << format_double(r.update_time_to_epsilon) << ','
        << format_double(r.speedup) << ',' << format_double(r.updates_speedup) << '\n';
  }
}

PartitionStats partition_stats(const ExperimentConfig& config) {
  config.validate();
  const std::uint64_t seed = config.seeds.front();
  const std::size_t threads = config.threads.front();
  auto problem = make_problem(config.algorithm, load_experiment_data(config), config.options, seed);
  auto& alg = *problem->algorithm;
  const auto& g = alg.graph();

  PartitionStats stats;
  stats.conflict_degree = compute_conflict_degree(g);
  stats.batch_size = effective_batch_size(config, alg);

  std::unique_ptr<WorkerPool> pool;
  if (config.cc_method == CcMethod::kPushLabel && threads > 1) pool = std::make_unique<WorkerPool>(threads);
  GroupFinder finder(g);
  SampleStream stream({config.scheme, g.num_updates(), stats.batch_size, config.epochs, seed});
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    EpochPartitionStats agg;
    agg.epoch = epoch;
    std::size_t grouped_updates = 0;
    while (true) {
      const auto t0 = Clock::now();
      if (stream.cursor() >= static_cast<std::uint64_t>(epoch) * g.num_updates()) break;
      auto batch = stream.next_batch();
      if (!batch) break;
      const auto groups = config.cc_method == CcMethod::kBfs ? finder.bfs(*batch) : finder.push_label(*batch, pool.get());
      [[maybe_unused]] const auto alloc = greedy_allocate(groups, g, threads);
      BatchStats b;
      b.partition_time = seconds_since(t0);
      b.epoch = epoch;
      b.batch = batch->batch_index;
      b.updates = batch->items.size();
      b.groups = groups.num_groups();
      b.mean_group_size = b.groups ? static_cast<double>(b.updates) / static_cast<double>(b.groups) : 0.0;
      b.max_group_size = groups.max_group_size();
      b.induced_edges = groups.induced_edges;
      stats.batches.push_back(b);
      ++agg.batches;
      agg.groups += b.groups;
      grouped_updates += b.updates;
      agg.max_group_size = std::max(agg.max_group_size, b.max_group_size);
      agg.induced_edges += b.induced_edges;
      agg.partition_time += b.partition_time;
    }
    agg.mean_group_size = agg.groups ? static_cast<double>(grouped_updates) / static_cast<double>(agg.groups) : 0.0;
    stats.epochs.push_back(agg);
  }

  // Denominator of the ratio: update time of a Hogwild epoch at the same
  // thread count, averaged over the configured epochs.
  auto state = alg.initial_state(seed);
  const auto hog = run_hogwild(alg, state, run_config(config, alg, threads, seed));
  for (std::size_t k = 0; k < stats.epochs.size() && k < hog.epochs.size(); ++k) {
    auto& e = stats.epochs[k];
    e.hogwild_epoch_time = hog.epochs[k].update_time;
    e.partition_ratio = e.hogwild_epoch_time > 0.0 ? e.partition_time / e.hogwild_epoch_time : 0.0;
  }
  return stats;
}

void write_partition_csv(std::ostream& out, const PartitionStats& stats) {
  out << "scope,epoch,batch,updates,groups,mean_group_size,max_group_size,induced_edges,partition_time_s,"
         "hogwild_epoch_time_s,partition_ratio\n";
  for (const auto& b : stats.batches) {
    out << "batch," << b.epoch << ',' << b.batch << ',' << b.updates << ',' << b.groups << ','
        << format_double(b.mean_group_size) << ',' << b.max_group_size << ',' << b.induced_edges << ','
        << format_double(b.partition_time) << ",,\n";
  }
  for (const auto& e : stats.epochs) {
    std::size_t updates = 0;
    for (const auto& b : stats.batches) updates += b.epoch == e.epoch ? b.updates : 0;
    out << "epoch," << e.epoch << ',' << e.batches << ',' << updates << ',' << e.groups << ','
        << format_double(e.mean_group_size) << ',' << e.max_group_size << ',' << e.induced_edges << ','
        << format_double(e.partition_time) << ',' << format_double(e.hogwild_epoch_time) << ','
        << format_double(e.partition_ratio) << '\n';
  }
}

std::vector<EquivalenceCheck> verify_equivalence(const ExperimentConfig& config) {
  config.validate();
  if (std::find(config.modes.begin(), config.modes.end(), Mode::kHogwild) != config.modes.end()) {
    throw InputError("hogwild runs are not serially equivalent; drop --mode hogwild");
  }
  if (config.outer_iterations > 1) throw InputError("verify-equivalence runs single solves; drop --outer-iterations");
  const Dataset data = load_experiment_data(config);
  std::vector<EquivalenceCheck> out;
  for (auto seed : config.seeds) {
    auto problem = make_problem(config.algorithm, data, config.options, seed);
    auto& alg = *problem->algorithm;
    auto serial = alg.initial_state(seed);
    run_serial(alg, serial, run_config(config, alg, 1, seed));
    for (auto threads : config.threads) {
      auto par = alg.initial_state(seed);
      run_conflict_free(alg, par, run_config(config, alg, threads, seed));
      EquivalenceCheck c;
      c.seed = seed;
      c.threads = threads;
      c.identical = serial.x.size() == par.x.size() &&
                    std::memcmp(serial.x.data(), par.x.data(), serial.x.size() * sizeof(double)) == 0;
      for (std::size_t j = 0; j < std::min(serial.x.size(), par.x.size()); ++j) {
        const double a = serial.x[j], b = par.x[j];
        if (std::isfinite(a) && std::isfinite(b)) c.max_abs_difference = std::max(c.max_abs_difference, std::abs(a - b));
      }
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace su
