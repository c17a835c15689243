// su_bench: run experiments and summarise them as CSV.
//
//   su_bench run --algorithm saga --dataset synth-ls:rows=20000,cols=2000,nnz=10 \
//       --mode serial,conflict-free,hogwild --threads 1,2,4 --epochs 20 --stepsize 1e-3 --output runs.csv
//   su_bench speedup --input runs.csv
//   su_bench partition-stats --algorithm sgd --dataset rows:url.txt --threads 4
//   su_bench verify-equivalence --algorithm svrg --threads 1,2,4,8 --seed 1,2,3

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include "su/bench.hpp"
#include "su/errors.hpp"

namespace {

constexpr int kUsageError = 2;

struct Cli {
  su::ExperimentConfig config;
  std::vector<std::string> modes{"serial"};
  std::string cc_method = "bfs";
  std::string scheme = "without";
  std::string output;
  std::string input;
};

void add_experiment_options(CLI::App& cmd, Cli& cli) {
  auto& c = cli.config;
  cmd.add_option("--algorithm", c.algorithm, "sgd|wsgd|logistic|saga|svrg|svrg-eigen|mc-sgd|mc-wsgd|embedding|clustering")
      ->capture_default_str();
  cmd.add_option("--dataset", c.dataset, "kind:path (edges, ratings, cooc, rows) or synth-*:key=value,...")
      ->capture_default_str();
  cmd.add_option("--threads", c.threads, "Thread counts")->delimiter(',')->capture_default_str();
  cmd.add_option("--seed", c.seeds, "Seeds")->delimiter(',')->capture_default_str();
  cmd.add_option("--epochs", c.epochs, "Epochs (inner epochs for svrg-eigen)")->capture_default_str();
  cmd.add_option("--batch-size", c.batch_size, "Batch size; 0 derives it from --epsilon")->capture_default_str();
  cmd.add_option("--conflict-degree", c.conflict_degree, "Use this Delta for batch sizing instead of computing it")
      ->capture_default_str();
  cmd.add_option("--epsilon", c.epsilon, "Batch size B = floor((1 - epsilon) n / Delta)")->capture_default_str();
  cmd.add_option("--stepsize", c.stepsize, "Initial stepsize")->capture_default_str();
  cmd.add_option("--stepsize-decay", c.stepsize_decay, "Stepsize multiplier per epoch")->capture_default_str();
  cmd.add_option("--filter-top", c.filter_top, "Drop this fraction of the densest features")->capture_default_str();
  cmd.add_option("--cc-method", cli.cc_method, "bfs|push-label")
      ->check(CLI::IsMember({"bfs", "push-label"}))
      ->capture_default_str();
  cmd.add_option("--scheme", cli.scheme, "with|without replacement")
      ->check(CLI::IsMember({"with", "without"}))
      ->capture_default_str();
  cmd.add_flag("--pipelined", c.pipelined, "Overlap partitioning of batch k+1 with updates of batch k");
  cmd.add_option("--rank", c.options.rank, "Factor rank (completion, embedding)")->capture_default_str();
  cmd.add_option("--l2", c.options.l2, "l2 weight (wsgd, mc-wsgd)")->capture_default_str();
  cmd.add_option("--shift", c.options.shift, "Eigenvector shift; 0 uses 1.1 x power-iteration estimate")
      ->capture_default_str();
  cmd.add_option("--outer-iterations", c.outer_iterations, "Shift-and-invert outer iterations (svrg-eigen)")
      ->capture_default_str();
  cmd.add_flag("--saga-zero-init", c.options.saga_zero_init, "Start SAGA memories at zero");
  cmd.add_option("--data-seed", c.data_seed, "Seed for synthetic datasets")->capture_default_str();
  cmd.add_option("--output", cli.output, "Output CSV (default stdout)");
}

void finish_config(Cli& cli) {
  auto& c = cli.config;
  c.modes.clear();
  for (const auto& m : cli.modes) c.modes.push_back(su::parse_mode(m));
  c.cc_method = cli.cc_method == "bfs" ? su::CcMethod::kBfs : su::CcMethod::kPushLabel;
  c.scheme = cli.scheme == "with" ? su::SamplingScheme::kWithReplacement : su::SamplingScheme::kWithoutReplacement;
  c.validate();
}

template <class F>
void with_output(const std::string& path, F&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw su::InputError("cannot write " + path);
  write(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conflict-free parallel stochastic updates: experiment harness"};
  app.require_subcommand(1);
  Cli cli;

  auto* run = app.add_subcommand("run", "Run experiments and write one CSV row per (run, epoch)");
  add_experiment_options(*run, cli);
  run->add_option("--mode", cli.modes, "serial|conflict-free|hogwild")->delimiter(',')->capture_default_str();

  auto* speedup = app.add_subcommand("speedup", "Speedup to a common objective from a run CSV");
  speedup->add_option("--input", cli.input, "CSV written by 'run'")->required();
  speedup->add_option("--output", cli.output, "Output CSV (default stdout)");

  auto* stats = app.add_subcommand("partition-stats", "Per-batch conflict-group statistics");
  add_experiment_options(*stats, cli);

  auto* verify = app.add_subcommand("verify-equivalence", "Check conflict-free runs reproduce the serial model bit for bit");
  add_experiment_options(*verify, cli);
  verify->add_option("--mode", cli.modes, "Must not include hogwild")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*speedup) {
      std::ifstream in(cli.input);
      if (!in) throw su::InputError("cannot open " + cli.input);
      const auto table = su::measure_speedup(su::read_runs_csv(in));
      for (const auto& w : table.warnings) std::cerr << "warning: " << w << '\n';
      with_output(cli.output, [&](std::ostream& out) { su::write_speedup_csv(out, table); });
      return 0;
    }
    finish_config(cli);
    if (*run) {
      const auto runs = su::run_experiment(cli.config);
      with_output(cli.output, [&](std::ostream& out) { su::write_runs_csv(out, runs, cli.config.dataset); });
    } else if (*stats) {
      const auto s = su::partition_stats(cli.config);
      std::cerr << "conflict degree " << s.conflict_degree << ", batch size " << s.batch_size << '\n';
      with_output(cli.output, [&](std::ostream& out) { su::write_partition_csv(out, s); });
    } else if (*verify) {
      bool all = true;
      const auto checks = su::verify_equivalence(cli.config);
      with_output(cli.output, [&](std::ostream& out) {
        out << "seed,threads,identical,max_abs_difference\n";
        for (const auto& c : checks) {
          all = all && c.identical;
          out << c.seed << ',' << c.threads << ',' << (c.identical ? "yes" : "no") << ','
              << su::format_double(c.max_abs_difference) << '\n';
        }
      });
      return all ? 0 : 1;
    }
  } catch (const su::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
