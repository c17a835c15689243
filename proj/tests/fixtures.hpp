#pragma once

#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "su/data_io.hpp"
#include "su/engine.hpp"
#include "su/factory.hpp"

namespace fixture {

struct Case {
  std::string algorithm;
  std::unique_ptr<su::Problem> problem;
  double stepsize;
};

/// Small instances of every algorithm with stable stepsizes.
inline Case make_case(const std::string& name, std::uint64_t seed = 1) {
  su::Dataset d;
  su::AlgorithmOptions opt;
  opt.rank = 4;
  double gamma = 0.01;
  if (name == "sgd" || name == "wsgd" || name == "saga" || name == "svrg") {
    d.kind = su::DatasetKind::kSyntheticLeastSquares;
    d.rows = su::synth_least_squares(400, 80, 5, seed);
    opt.l2 = 0.1;
  } else if (name == "logistic") {
    d.kind = su::DatasetKind::kSyntheticPowerLaw;
    d.rows = su::synth_powerlaw_rows(400, 100, 6, 1.0, seed);
    gamma = 0.1;
  } else if (name == "svrg-eigen") {
    d.kind = su::DatasetKind::kSyntheticGraph;
    d.edges = su::synth_graph(80, 5.0, seed);
    gamma = 2e-3;
  } else if (name == "mc-sgd" || name == "mc-wsgd") {
    d.kind = su::DatasetKind::kSyntheticCompletion;
    d.triples = su::synth_completion(30, 30, 3, 0.3, seed);
    gamma = 0.02 / static_cast<double>(d.triples.entries.size());
    opt.l2 = 0.5;
  } else if (name == "embedding") {
    d.kind = su::DatasetKind::kSyntheticCooccurrence;
    d.triples = su::synth_cooccurrence(40, 4, seed);
    gamma = 1e-3;
  } else if (name == "clustering") {
    d.kind = su::DatasetKind::kSyntheticGraph;
    d.edges = su::synth_graph(300, 4.0, seed);
    gamma = 1.0;
  }
  Case c{name, su::make_problem(name, std::move(d), opt, seed), gamma};
  return c;
}

inline su::RunConfig config_for(const su::StochasticAlgorithm& alg, double gamma, std::size_t batch,
                                std::size_t epochs, std::uint64_t seed,
                                su::SamplingScheme scheme = su::SamplingScheme::kWithoutReplacement) {
  su::RunConfig c;
  c.plan.scheme = scheme;
  c.plan.num_updates = alg.graph().num_updates();
  c.plan.batch_size = std::min(batch, c.plan.num_updates);
  c.plan.epochs = epochs;
  c.plan.seed = seed;
  c.stepsize = gamma;
  return c;
}

inline bool bit_identical(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

inline const std::vector<std::string>& equivalence_algorithms() {
  static const std::vector<std::string> names{"sgd", "wsgd", "saga", "svrg", "svrg-eigen", "clustering", "logistic"};
  return names;
}

}  // namespace fixture
