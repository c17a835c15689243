#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "su/data.hpp"
#include "su/engine.hpp"

namespace su {

/// SGD for word embeddings on co-occurrence counts A:
///   min Σ_{A_ww'>0} A_ww'·(log A_ww' − ‖v_w + v_w'‖² − C)².
/// A step on (w, w') adds 4γA(log A − ‖s‖² − C)·s to both v_w and v_w',
/// s = v_w + v_w'. C is refreshed to its optimal value Σ A(log A − ‖s‖²)/Σ A
/// before the first epoch and after every epoch.
class WordEmbeddingSgd : public StochasticAlgorithm {
 public:
  WordEmbeddingSgd(const TripleSet& counts, std::size_t rank);

  std::string name() const override { return "embedding"; }
  const UpdateVariableGraph& graph() const override { return graph_; }
  std::size_t model_size() const override { return graph_.num_variables() * rank_; }
  std::pair<std::size_t, std::size_t> coordinates(VarId j) const override {
    return {static_cast<std::size_t>(j) * rank_, (static_cast<std::size_t>(j) + 1) * rank_};
  }
  /// Uniform in [−0.5, 0.5]/rank.
  ModelState initial_state(std::uint64_t seed) const override;
  void prepare(const ModelState& state) override;
  void apply(UpdateId e, std::uint64_t step, ModelState& state) override;
  void end_epoch(ModelState& state) override;
  double objective(const ModelState& state) const override;

  double offset() const { return offset_; }
  /// Sets C to Σ A(log A − ‖v_w + v_w'‖²) / Σ A.
  void refresh_offset(const ModelState& state);

 private:
  const TripleSet* counts_;
  UpdateVariableGraph graph_;
  std::size_t rank_;
  double offset_ = 0.0;
};

}  // namespace su
