#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "su/algorithms/lazy.hpp"
#include "su/data.hpp"
#include "su/engine.hpp"

namespace su {

/// Weighted SGD for low-rank matrix completion:
///   min Σ_{(i,j)∈Ω} (M_ij − U_i·V_j)² + λ/2·(‖U‖² + ‖V‖²).
/// Sampling (i, j) uniformly from Ω, one step is
///   U_i ← (1 − γλ)U_i − γ|Ω|·2(U_i·V_j − M_ij)V_j   (and symmetrically V_j),
/// while every other block decays by (1 − γλ), deferred lazily.
/// Variables are the blocks U_i (id i) and V_j (id num_rows + j) of `rank` coordinates.
class MatrixCompletionSgd : public StochasticAlgorithm {
 public:
  MatrixCompletionSgd(const TripleSet& ratings, std::size_t rank, double l2 = 0.0);

  std::string name() const override { return l2_ > 0.0 ? "mc-wsgd" : "mc-sgd"; }
  const UpdateVariableGraph& graph() const override { return graph_; }
  std::size_t model_size() const override { return graph_.num_variables() * rank_; }
  std::pair<std::size_t, std::size_t> coordinates(VarId j) const override {
    return {static_cast<std::size_t>(j) * rank_, (static_cast<std::size_t>(j) + 1) * rank_};
  }
  /// Factors drawn from N(0, 1/rank) so initial products have unit scale.
  ModelState initial_state(std::uint64_t seed) const override;
  void prepare(const ModelState& state) override;
  void apply(UpdateId e, std::uint64_t step, ModelState& state) override;
  void end_epoch(ModelState& state) override;
  double objective(const ModelState& state) const override;

  std::size_t rank() const { return rank_; }

 private:
  void catch_up(VarId block, std::uint64_t step, ModelState& state) const;

  const TripleSet* ratings_;
  UpdateVariableGraph graph_;
  std::size_t rank_;
  double l2_;
  LazyClock clock_;
};

}  // namespace su
