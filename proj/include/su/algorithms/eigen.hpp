#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "su/algorithms/lazy.hpp"
#include "su/data.hpp"
#include "su/engine.hpp"

namespace su {

/// SVRG with dense linear gradients for the shift-and-invert subproblem
///   min ½xᵀ(λI − AᵀA)x − bᵀx = Σ_i ½xᵀ(λ/n·I − a_i a_iᵀ)x − (1/n)·bᵀx
/// with unit-norm rows a_i. Each step is
///   x ← x − γ(n(∇f_i(x) − ∇f_i(y)) + ∇f(y)),
/// whose off-support part x_j ← (1 − γλ)x_j − γ(g_j − λy_j) is the same for
/// every update and is applied lazily.
class DenseLinearSvrg : public StochasticAlgorithm {
 public:
  /// `rows` must already be row-normalised and outlive the algorithm.
  DenseLinearSvrg(const SparseRows& rows, std::vector<double> rhs, double shift);

  std::string name() const override { return "svrg-eigen"; }
  const UpdateVariableGraph& graph() const override { return graph_; }
  std::size_t model_size() const override { return rows_->num_cols; }
  void prepare(const ModelState& state) override;
  void apply(UpdateId i, std::uint64_t step, ModelState& state) override;
  void end_epoch(ModelState& state) override;
  double objective(const ModelState& state) const override;

  void set_rhs(std::vector<double> rhs) { rhs_ = std::move(rhs); }
  double shift() const { return shift_; }
  const std::vector<double>& anchor() const { return anchor_; }
  const std::vector<double>& full_gradient() const { return full_gradient_; }

  /// (λI − AᵀA)x − b
  std::vector<double> gradient(const std::vector<double>& x) const;

 private:
  void refresh_anchor(const std::vector<double>& x);

  const SparseRows* rows_;
  UpdateVariableGraph graph_;
  std::vector<double> rhs_;
  double shift_;
  std::vector<double> anchor_;
  std::vector<double> anchor_dot_;  // a_iᵀy
  std::vector<double> full_gradient_;
  std::size_t anchor_epoch_ = 0;
  LazyClock clock_;
};

/// AᵀA·x
std::vector<double> gram_product(const SparseRows& rows, const std::vector<double>& x);

/// Power-iteration estimate of ‖AᵀA‖₂.
double estimate_gram_norm(const SparseRows& rows, std::size_t iterations, std::uint64_t seed);

struct ShiftInvertOptions {
  double shift = 0.0;  // λ; 0 selects 1.1 × estimate_gram_norm
  std::size_t outer_iterations = 10;
  std::size_t inner_epochs = 20;
  double stepsize = 1e-3;
  Mode mode = Mode::kSerial;
  std::size_t threads = 1;
  std::size_t batch_size = 0;  // 0 selects n
  std::uint64_t seed = 1;
};

struct ShiftInvertResult {
  std::vector<double> eigenvector;  // unit norm
  double rayleigh_quotient = 0.0;   // vᵀAᵀAv
  double shift = 0.0;
  std::vector<RunRecord> runs;      // one per outer iteration
};

/// Top eigenvector of AᵀA by shift-and-invert power iteration, each linear
/// solve (λI − AᵀA)x = w approximated by DenseLinearSvrg epochs.
ShiftInvertResult shift_invert_top_eigenvector(const SparseRows& normalized_rows, const ShiftInvertOptions& options);

}  // namespace su
