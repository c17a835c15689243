#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "su/data_io.hpp"
#include "su/engine.hpp"

namespace su {

struct AlgorithmOptions {
  double l2 = 0.0;         // wsgd, mc-wsgd
  std::size_t rank = 100;  // mc-sgd, mc-wsgd, embedding
  double shift = 0.0;      // svrg-eigen; 0 selects 1.1 × ‖AᵀA‖ estimate
  bool saga_zero_init = false;
};

/// An algorithm bound to the data it reads. Not movable: the algorithm keeps
/// pointers into `data`.
struct Problem {
  Problem() = default;
  Problem(const Problem&) = delete;
  Problem& operator=(const Problem&) = delete;

  Dataset data;
  std::unique_ptr<StochasticAlgorithm> algorithm;
};

/// Names: sgd, wsgd, logistic, saga, svrg (row datasets), svrg-eigen (row or
/// graph datasets; rows are ℓ2-normalised, graphs use their adjacency),
/// mc-sgd, mc-wsgd (rating triples), embedding (co-occurrence counts),
/// clustering (graphs).
std::unique_ptr<Problem> make_problem(const std::string& name, Dataset data, const AlgorithmOptions& options,
                                      std::uint64_t seed = 1);

std::vector<std::string> algorithm_names();

}  // namespace su
