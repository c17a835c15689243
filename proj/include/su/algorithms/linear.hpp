#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "su/algorithms/lazy.hpp"
#include "su/data.hpp"
#include "su/engine.hpp"

namespace su {

// Stochastic updates for linear models over sparse rows: each update i reads
// and writes exactly the nonzero columns of row i. The rows passed to a
// constructor must outlive the algorithm.

enum class Loss { kSquared, kLogistic };

/// SGD on (1/n)·Σ f_i(x) + η/2·‖x‖².
///
/// With η > 0 every step also decays all coordinates by (1 − γη); the decay
/// of coordinates outside S_i is deferred through a LazyClock and flushed at
/// epoch end. With η = 0 the clock is skipped unless `force_lazy` is set.
class LinearSgd : public StochasticAlgorithm {
 public:
  LinearSgd(const SparseRows& rows, Loss loss, double l2 = 0.0, bool force_lazy = false);

  std::string name() const override;
  const UpdateVariableGraph& graph() const override { return graph_; }
  std::size_t model_size() const override { return rows_->num_cols; }
  void prepare(const ModelState& state) override;
  void apply(UpdateId i, std::uint64_t step, ModelState& state) override;
  void end_epoch(ModelState& state) override;
  double objective(const ModelState& state) const override;

 private:
  const SparseRows* rows_;
  UpdateVariableGraph graph_;
  Loss loss_;
  double l2_;
  bool lazy_;
  LazyClock clock_;
};

enum class SagaInit { kGradientAtStart, kZero };

/// SAGA on least squares (1/n)·Σ(a_iᵀx − b_i)².
///
/// The memory g_i = c_i·a_i is kept as its scalar c_i. The running average
/// (1/n)·Σ g_i is applied to untouched coordinates lazily (μ = 0, ν = γ·avg_j).
class Saga : public StochasticAlgorithm {
 public:
  explicit Saga(const SparseRows& rows, SagaInit init = SagaInit::kGradientAtStart);

  std::string name() const override { return "saga"; }
  const UpdateVariableGraph& graph() const override { return graph_; }
  std::size_t model_size() const override { return rows_->num_cols; }
  void prepare(const ModelState& state) override;
  void apply(UpdateId i, std::uint64_t step, ModelState& state) override;
  void end_epoch(ModelState& state) override;
  double objective(const ModelState& state) const override;

  const std::vector<double>& average() const { return average_; }
  const std::vector<double>& memory() const { return memory_; }
  /// (1/n)·Σ g_i recomputed from the stored memories.
  std::vector<double> recompute_average() const;

 private:
  const SparseRows* rows_;
  UpdateVariableGraph graph_;
  SagaInit init_;
  std::vector<double> memory_;
  std::vector<double> average_;
  LazyClock clock_;
};

/// SVRG with sparse gradients on least squares: x ← x − γ(∇f_i(x) − ∇f_i(y) + g),
/// g = (1/n)·Σ∇f_i(y). The anchor y is refreshed at the end of every epoch; the
/// g term reaches untouched coordinates lazily.
class SparseSvrg : public StochasticAlgorithm {
 public:
  explicit SparseSvrg(const SparseRows& rows);

  std::string name() const override { return "svrg"; }
  const UpdateVariableGraph& graph() const override { return graph_; }
  std::size_t model_size() const override { return rows_->num_cols; }
  void prepare(const ModelState& state) override;
  void apply(UpdateId i, std::uint64_t step, ModelState& state) override;
  void end_epoch(ModelState& state) override;
  double objective(const ModelState& state) const override;

  const std::vector<double>& anchor() const { return anchor_; }
  const std::vector<double>& full_gradient() const { return full_gradient_; }

 private:
  void refresh_anchor(const std::vector<double>& x);

  const SparseRows* rows_;
  UpdateVariableGraph graph_;
  std::vector<double> anchor_;
  std::vector<double> anchor_residual_;
  std::vector<double> full_gradient_;
  std::size_t anchor_epoch_ = 0;
  LazyClock clock_;
};

}  // namespace su
