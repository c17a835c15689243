#include "su/algorithms/completion.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "su/errors.hpp"
#include "su/shared.hpp"

namespace su {

MatrixCompletionSgd::MatrixCompletionSgd(const TripleSet& ratings, std::size_t rank, double l2)
    : ratings_(&ratings), graph_(completion_graph(ratings)), rank_(rank), l2_(l2) {
  if (rank == 0) throw InputError("rank must be positive");
  if (l2 < 0.0) throw InputError("regularisation must be nonnegative");
}

ModelState MatrixCompletionSgd::initial_state(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(rank_)));
  ModelState state;
  state.x.resize(model_size());
  for (auto& v : state.x) v = normal(rng);
  return state;
}

void MatrixCompletionSgd::prepare(const ModelState& /*state*/) { clock_.reset(graph_.num_variables()); }

void MatrixCompletionSgd::catch_up(VarId block, std::uint64_t step, ModelState& state) const {
  if (l2_ == 0.0) return;
  const auto tau = clock_.pending(block, step);
  if (tau == 0) return;
  const double mu = stepsize_ * l2_;
  const auto [lo, hi] = coordinates(block);
  for (std::size_t c = lo; c < hi; ++c) store_relaxed(state.x[c], lazy_catchup(load_relaxed(state.x[c]), mu, 0.0, tau));
}

void MatrixCompletionSgd::apply(UpdateId e, std::uint64_t step, ModelState& state) {
  const auto& entry = ratings_->entries[e];
  const auto ub = static_cast<VarId>(entry.row);
  const auto vb = static_cast<VarId>(ratings_->num_rows + entry.col);
  catch_up(ub, step, state);
  catch_up(vb, step, state);

  double* u = state.x.data() + static_cast<std::size_t>(ub) * rank_;
  double* v = state.x.data() + static_cast<std::size_t>(vb) * rank_;
  double uv = 0.0;
  for (std::size_t k = 0; k < rank_; ++k) uv += load_relaxed(u[k]) * load_relaxed(v[k]);
  const double keep = 1.0 - stepsize_ * l2_;
  const double c = stepsize_ * static_cast<double>(ratings_->entries.size()) * 2.0 * (uv - entry.value);
  for (std::size_t k = 0; k < rank_; ++k) {
    const double uk = load_relaxed(u[k]);
    const double vk = load_relaxed(v[k]);
    store_relaxed(u[k], keep * uk - c * vk);
    store_relaxed(v[k], keep * vk - c * uk);
  }
  if (l2_ != 0.0) {
    clock_.touch(ub, step);
    clock_.touch(vb, step);
  }
}

void MatrixCompletionSgd::end_epoch(ModelState& state) {
  if (l2_ != 0.0) {
    const double mu = stepsize_ * l2_;
    for (VarId b = 0; b < graph_.num_variables(); ++b) {
      const auto tau = clock_.owed(b, epoch_length_);
      if (tau == 0) continue;
      const auto [lo, hi] = coordinates(b);
      for (std::size_t c = lo; c < hi; ++c) state.x[c] = lazy_catchup(state.x[c], mu, 0.0, tau);
    }
  }
  clock_.reset(graph_.num_variables());
}

double MatrixCompletionSgd::objective(const ModelState& state) const {
  double s = 0.0;
  for (std::size_t e = 0; e < ratings_->entries.size(); ++e) {
    const auto& entry = ratings_->entries[e];
    const double* u = state.x.data() + entry.row * rank_;
    const double* v = state.x.data() + (ratings_->num_rows + entry.col) * rank_;
    double uv = 0.0;
    for (std::size_t k = 0; k < rank_; ++k) uv += u[k] * v[k];
    s += (entry.value - uv) * (entry.value - uv);
  }
  if (l2_ != 0.0) {
    double sq = 0.0;
    for (double v : state.x) sq += v * v;
    s += 0.5 * l2_ * sq;
  }
  return s;
}

}  // namespace su
