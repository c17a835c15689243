#include "su/algorithms/eigen.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "su/errors.hpp"
#include "su/shared.hpp"

namespace su {

std::vector<double> gram_product(const SparseRows& rows, const std::vector<double>& x) {
  std::vector<double> out(rows.num_cols, 0.0);
  for (std::size_t i = 0; i < rows.num_rows(); ++i) {
    const double ax = rows.dot(i, x);
    const auto cols = rows.cols(i);
    const auto vals = rows.vals(i);
    for (std::size_t k = 0; k < cols.size(); ++k) out[cols[k]] += vals[k] * ax;
  }
  return out;
}

double estimate_gram_norm(const SparseRows& rows, std::size_t iterations, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(rows.num_cols);
  for (auto& e : v) e = normal(rng);
  double estimate = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    double norm = 0.0;
    for (double e : v) norm += e * e;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (auto& e : v) e /= norm;
    auto w = gram_product(rows, v);
    estimate = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) estimate += v[j] * w[j];
    v = std::move(w);
  }
  return estimate;
}

DenseLinearSvrg::DenseLinearSvrg(const SparseRows& rows, std::vector<double> rhs, double shift)
    : rows_(&rows), graph_(rows_graph(rows)), rhs_(std::move(rhs)), shift_(shift) {
  if (rhs_.size() != rows.num_cols) throw InputError("right-hand side does not match the column count");
}

std::vector<double> DenseLinearSvrg::gradient(const std::vector<double>& x) const {
  auto g = gram_product(*rows_, x);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = shift_ * x[j] - g[j] - rhs_[j];
  return g;
}

void DenseLinearSvrg::refresh_anchor(const std::vector<double>& x) {
  anchor_ = x;
  full_gradient_ = gradient(anchor_);
  anchor_dot_.resize(rows_->num_rows());
  for (std::size_t i = 0; i < rows_->num_rows(); ++i) anchor_dot_[i] = rows_->dot(i, anchor_);
}

void DenseLinearSvrg::prepare(const ModelState& state) {
  refresh_anchor(state.x);
  anchor_epoch_ = 0;
  clock_.reset(model_size());
}

void DenseLinearSvrg::apply(UpdateId i, std::uint64_t step, ModelState& state) {
  if (anchor_epoch_ != epoch_) throw std::logic_error("SVRG anchor is stale");
  auto& x = state.x;
  const double gamma = stepsize_;
  const double mu = gamma * shift_;
  const double keep = 1.0 - mu;
  const double n = static_cast<double>(rows_->num_rows());
  const auto cols = rows_->cols(i);
  const auto vals = rows_->vals(i);

  // Skipped steps follow x ← (1−μ)x − ν; lazy_catchup integrates
  // x ← (1−μ)(x − ν'), so pass ν' = ν/(1−μ).
  for (auto j : cols) {
    const double nu = gamma * (full_gradient_[j] - shift_ * anchor_[j]);
    const auto tau = clock_.pending(j, step);
    double xj = load_relaxed(x[j]);
    if (tau > 0) xj = keep != 0.0 ? lazy_catchup(xj, mu, nu / keep, tau) : -nu;
    store_relaxed(x[j], xj);
  }
  double ax = 0.0;
  for (std::size_t k = 0; k < cols.size(); ++k) ax += vals[k] * load_relaxed(x[cols[k]]);
  const double coupling = gamma * n * (ax - anchor_dot_[i]);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const auto j = cols[k];
    const double nu = gamma * (full_gradient_[j] - shift_ * anchor_[j]);
    store_relaxed(x[j], keep * load_relaxed(x[j]) - nu + coupling * vals[k]);
    clock_.touch(j, step);
  }
}

void DenseLinearSvrg::end_epoch(ModelState& state) {
  const double gamma = stepsize_;
  const double mu = gamma * shift_;
  const double keep = 1.0 - mu;
  for (std::size_t j = 0; j < state.x.size(); ++j) {
    const auto tau = clock_.owed(j, epoch_length_);
    if (tau == 0) continue;
    const double nu = gamma * (full_gradient_[j] - shift_ * anchor_[j]);
    state.x[j] = keep != 0.0 ? lazy_catchup(state.x[j], mu, nu / keep, tau) : -nu;
  }
  clock_.reset(model_size());
  refresh_anchor(state.x);
  anchor_epoch_ = epoch_ + 1;
}

double DenseLinearSvrg::objective(const ModelState& state) const {
  const auto& x = state.x;
  const auto gx = gram_product(*rows_, x);
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += 0.5 * x[j] * (shift_ * x[j] - gx[j]) - rhs_[j] * x[j];
  return s;
}

ShiftInvertResult shift_invert_top_eigenvector(const SparseRows& rows, const ShiftInvertOptions& options) {
  const std::size_t d = rows.num_cols;
  if (d == 0 || rows.num_rows() == 0) throw InputError("eigenvector problem needs a non-empty matrix");
  ShiftInvertResult result;
  result.shift = options.shift > 0.0 ? options.shift : 1.1 * estimate_gram_norm(rows, 100, options.seed);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  std::vector<double> w(d);
  for (auto& e : w) e = normal(rng);
  auto normalize = [](std::vector<double>& v) {
    double norm = 0.0;
    for (double e : v) norm += e * e;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (auto& e : v) e /= norm;
    }
  };
  normalize(w);

  DenseLinearSvrg alg(rows, w, result.shift);
  RunConfig config;
  config.plan.num_updates = rows.num_rows();
  config.plan.batch_size = options.batch_size == 0 ? rows.num_rows() : options.batch_size;
  config.plan.epochs = options.inner_epochs;
  config.stepsize = options.stepsize;
  config.threads = options.threads;

  for (std::size_t outer = 0; outer < options.outer_iterations; ++outer) {
    alg.set_rhs(w);
    ModelState state;
    // Warm start at the previous direction scaled to the solve's magnitude.
    state.x = w;
    for (auto& e : state.x) e /= result.shift;
    config.plan.seed = options.seed + outer + 1;
    result.runs.push_back(run(options.mode, alg, state, config));
    w = state.x;
    normalize(w);
  }
  const auto gw = gram_product(rows, w);
  for (std::size_t j = 0; j < d; ++j) result.rayleigh_quotient += w[j] * gw[j];
  result.eigenvector = std::move(w);
  return result;
}

}  // namespace su
