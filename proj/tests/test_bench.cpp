#include "doctest.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "su/bench.hpp"
#include "su/errors.hpp"

namespace {

su::ExperimentConfig small_config() {
  su::ExperimentConfig c;
  c.algorithm = "sgd";
  c.dataset = "synth-ls:rows=600,cols=200,nnz=4";
  c.stepsize = 5e-3;
  c.epochs = 10;
  return c;
}

}  // namespace

TEST_CASE("doubles round-trip through their decimal form") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int k = 0; k < 10000; ++k) {
    const std::uint64_t b = bits(rng);
    double v;
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    const double back = su::parse_double(su::format_double(v));
    CHECK(std::memcmp(&v, &back, sizeof v) == 0);
  }
  CHECK(std::isinf(su::parse_double(su::format_double(std::numeric_limits<double>::infinity()))));
  CHECK(std::isnan(su::parse_double(su::format_double(std::nan("")))));
  CHECK_THROWS_AS(su::parse_double("1.0x"), su::InputError);
}

TEST_CASE("2 modes x 3 thread counts x 2 seeds x 10 epochs gives 120 rows") {
  auto c = small_config();
  c.modes = {su::Mode::kConflictFree, su::Mode::kHogwild};
  c.threads = {1, 2, 4};
  c.seeds = {1, 2};
  const auto runs = su::run_experiment(c);
  std::ostringstream out;
  su::write_runs_csv(out, runs, c.dataset);
  std::size_t lines = 0;
  for (char ch : out.str()) lines += ch == '\n';
  CHECK(lines == 121);
}

TEST_CASE("serial runs once per seed whatever the thread list") {
  auto c = small_config();
  c.threads = {1, 2, 4};
  c.seeds = {1, 2};
  CHECK(su::run_experiment(c).size() == 2);
}

TEST_CASE("run CSV round-trips and feeds the speedup table deterministically") {
  auto c = small_config();
  c.modes = {su::Mode::kSerial, su::Mode::kConflictFree};
  c.threads = {1, 2};
  const auto runs = su::run_experiment(c);
  std::ostringstream out;
  su::write_runs_csv(out, runs, c.dataset);
  std::istringstream in(out.str());
  const auto back = su::read_runs_csv(in);
  REQUIRE(back.size() == runs.size());
  for (std::size_t r = 0; r < runs.size(); ++r) {
    CHECK(back[r].mode == runs[r].mode);
    CHECK(back[r].threads == runs[r].threads);
    CHECK(back[r].algorithm == runs[r].algorithm);
    REQUIRE(back[r].epochs.size() == runs[r].epochs.size());
    for (std::size_t e = 0; e < runs[r].epochs.size(); ++e) {
      CHECK(back[r].epochs[e].objective == runs[r].epochs[e].objective);
      CHECK(back[r].epochs[e].cumulative_time == runs[r].epochs[e].cumulative_time);
    }
  }
  std::ostringstream a, b;
  su::write_speedup_csv(a, su::measure_speedup(back));
  std::istringstream again(out.str());
  su::write_speedup_csv(b, su::measure_speedup(su::read_runs_csv(again)));
  CHECK(a.str() == b.str());
}

TEST_CASE("serial objective is non-increasing for least squares with a safe stepsize") {
  auto c = small_config();
  c.stepsize = 1e-3;
  const auto runs = su::run_experiment(c);
  const auto& e = runs.front().epochs;
  for (std::size_t k = 1; k < e.size(); ++k) CHECK(e[k].objective <= e[k - 1].objective);
}

TEST_CASE("identical configurations give identical objectives") {
  auto c = small_config();
  c.modes = {su::Mode::kSerial, su::Mode::kConflictFree};
  c.threads = {2};
  const auto a = su::run_experiment(c), b = su::run_experiment(c);
  REQUIRE(a.size() == b.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t e = 0; e < a[r].epochs.size(); ++e) CHECK(a[r].epochs[e].objective == b[r].epochs[e].objective);
  }
}

TEST_CASE("malformed run CSVs are rejected") {
  std::istringstream empty("");
  CHECK_THROWS_AS(su::read_runs_csv(empty), su::InputError);
  std::istringstream missing("run_id,mode\n0,serial\n");
  CHECK_THROWS_AS(su::read_runs_csv(missing), su::ParseError);
  std::istringstream bad(
      "run_id,mode,algorithm,dataset,threads,seed,epoch,objective,partition_time_s,update_time_s,cumulative_time_s\n"
      "0,serial,sgd,x,one,1,1,1.0,0,0,0\n");
  CHECK_THROWS_AS(su::read_runs_csv(bad), su::ParseError);
}

TEST_CASE("a CSV without a baseline is a usage error") {
  std::istringstream in(
      "run_id,mode,algorithm,dataset,threads,seed,epoch,objective,partition_time_s,update_time_s,cumulative_time_s\n"
      "0,conflict-free,sgd,x,4,1,1,1.0,0.1,0.1,0.2\n");
  CHECK_THROWS_AS(su::measure_speedup(su::read_runs_csv(in)), su::InputError);
}

TEST_CASE("partition stats: no conflicts means groups of one") {
  auto c = small_config();
  c.epochs = 1;
  c.algorithm = "clustering";
  c.dataset = "synth-graph:nodes=200,degree=0";
  c.stepsize = 1.0;
  const auto s = su::partition_stats(c);
  CHECK(s.conflict_degree == 0);
  REQUIRE(!s.epochs.empty());
  CHECK(s.epochs.front().mean_group_size == 1.0);
  for (const auto& e : s.epochs) CHECK(e.partition_ratio >= 0.0);
}

TEST_CASE("partition stats aggregate their batches") {
  auto c = small_config();
  c.epochs = 2;
  c.threads = {2};
  c.cc_method = su::CcMethod::kPushLabel;
  const auto s = su::partition_stats(c);
  REQUIRE(s.epochs.size() == 2);
  for (const auto& e : s.epochs) {
    std::size_t updates = 0, groups = 0, edges = 0;
    for (const auto& b : s.batches) {
      if (b.epoch != e.epoch) continue;
      updates += b.updates;
      groups += b.groups;
      edges += b.induced_edges;
      CHECK(b.max_group_size <= b.updates);
    }
    CHECK(updates == 600);
    CHECK(groups == e.groups);
    CHECK(edges == e.induced_edges);
    CHECK(e.partition_ratio >= 0.0);
  }
}

TEST_CASE("verify-equivalence finds conflict-free runs bit-identical and refuses hogwild") {
  auto c = small_config();
  c.algorithm = "saga";
  c.threads = {1, 3};
  c.seeds = {4, 5};
  c.epochs = 2;
  for (const auto& r : su::verify_equivalence(c)) {
    CHECK(r.identical);
    CHECK(r.max_abs_difference == 0.0);
  }
  c.modes = {su::Mode::kHogwild};
  CHECK_THROWS_AS(su::verify_equivalence(c), su::InputError);
}

TEST_CASE("experiment configs are validated") {
  auto c = small_config();
  c.threads = {0};
  CHECK_THROWS_AS(c.validate(), su::InputError);
  c = small_config();
  c.outer_iterations = 3;
  CHECK_THROWS_AS(c.validate(), su::InputError);
  c = small_config();
  c.filter_top = 0.01;
  c.algorithm = "clustering";
  c.dataset = "synth-graph:nodes=50";
  CHECK_THROWS_AS(su::run_experiment(c), su::InputError);
}

TEST_CASE("svrg-eigen outer iterations flatten into one run") {
  su::ExperimentConfig c;
  c.algorithm = "svrg-eigen";
  c.dataset = "synth-graph:nodes=40,degree=4";
  c.stepsize = 2e-3;
  c.epochs = 3;
  c.outer_iterations = 2;
  const auto runs = su::run_experiment(c);
  REQUIRE(runs.size() == 1);
  REQUIRE(runs.front().epochs.size() == 6);
  for (std::size_t k = 1; k < 6; ++k) {
    CHECK(runs.front().epochs[k].epoch == k + 1);
    CHECK(runs.front().epochs[k].cumulative_time >= runs.front().epochs[k - 1].cumulative_time);
  }
}

TEST_CASE("conflict degree override drives the batch size") {
  auto c = small_config();
  auto problem = su::make_problem(c.algorithm, su::load_experiment_data(c), c.options);
  c.conflict_degree = 10;
  c.epsilon = 0.5;
  CHECK(su::effective_batch_size(c, *problem->algorithm) == 30);
  c.batch_size = 7;
  CHECK(su::effective_batch_size(c, *problem->algorithm) == 7);
}
