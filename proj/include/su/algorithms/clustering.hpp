#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "su/data.hpp"
#include "su/engine.hpp"

namespace su {

/// Greedy pivot correlation clustering on an unweighted graph. Every vertex
/// starts unlabelled (+∞); sampling an unlabelled v sets
/// x_u ← min(x_u, v) for u in N[v]. The objective counts disagreements:
/// edges across clusters plus non-edges inside clusters. Vertices still
/// unlabelled count as singletons.
class CorrelationClustering : public StochasticAlgorithm {
 public:
  explicit CorrelationClustering(const EdgeList& graph);

  std::string name() const override { return "clustering"; }
  const UpdateVariableGraph& graph() const override { return graph_; }
  std::size_t model_size() const override { return graph_.num_variables(); }
  ModelState initial_state(std::uint64_t seed) const override;
  void prepare(const ModelState& /*state*/) override {}
  void apply(UpdateId v, std::uint64_t step, ModelState& state) override;
  double objective(const ModelState& state) const override;

  /// Cluster id per vertex; unlabelled vertices get their own id.
  static std::vector<std::uint64_t> labels(const ModelState& state);

 private:
  const EdgeList* edges_;
  UpdateVariableGraph graph_;
};

}  // namespace su
