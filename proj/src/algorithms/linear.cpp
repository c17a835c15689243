#include "su/algorithms/linear.hpp"

#include <stdexcept>

#include "su/algorithms/objectives.hpp"
#include "su/shared.hpp"

namespace su {

namespace {

double sparse_dot(const SparseRows& rows, UpdateId i, const std::vector<double>& x) {
  const auto cols = rows.cols(i);
  const auto vals = rows.vals(i);
  double z = 0.0;
  for (std::size_t k = 0; k < cols.size(); ++k) z += vals[k] * load_relaxed(x[cols[k]]);
  return z;
}

double mean_squared_loss(const SparseRows& rows, const std::vector<double>& x) {
  if (rows.num_rows() == 0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < rows.num_rows(); ++i) s += squared_loss(rows, i, x);
  return s / static_cast<double>(rows.num_rows());
}

}  // namespace

LinearSgd::LinearSgd(const SparseRows& rows, Loss loss, double l2, bool force_lazy)
    : rows_(&rows), graph_(rows_graph(rows)), loss_(loss), l2_(l2), lazy_(l2 != 0.0 || force_lazy) {}

std::string LinearSgd::name() const {
  if (loss_ == Loss::kLogistic) return "logistic";
  return l2_ != 0.0 ? "wsgd" : "sgd";
}

void LinearSgd::prepare(const ModelState& /*state*/) {
  if (lazy_) clock_.reset(model_size());
}

void LinearSgd::apply(UpdateId i, std::uint64_t step, ModelState& state) {
  auto& x = state.x;
  const double gamma = stepsize_;
  const double mu = gamma * l2_;
  const auto cols = rows_->cols(i);
  const auto vals = rows_->vals(i);
  if (lazy_) {
    for (auto j : cols) store_relaxed(x[j], lazy_catchup(load_relaxed(x[j]), mu, 0.0, clock_.pending(j, step)));
  }
  const double z = sparse_dot(*rows_, i, x);
  const double c = loss_ == Loss::kSquared ? 2.0 * (z - rows_->targets[i]) : sigmoid(z) - rows_->targets[i];
  const double keep = 1.0 - mu;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const auto j = cols[k];
    store_relaxed(x[j], keep * load_relaxed(x[j]) - gamma * c * vals[k]);
    if (lazy_) clock_.touch(j, step);
  }
}

void LinearSgd::end_epoch(ModelState& state) {
  if (!lazy_) return;
  const double mu = stepsize_ * l2_;
  for (std::size_t j = 0; j < state.x.size(); ++j) state.x[j] = lazy_catchup(state.x[j], mu, 0.0, clock_.owed(j, epoch_length_));
  clock_.reset(model_size());
}

double LinearSgd::objective(const ModelState& state) const {
  const std::size_t n = rows_->num_rows();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += loss_ == Loss::kSquared ? squared_loss(*rows_, i, state.x) : logistic_loss(*rows_, i, state.x);
  }
  s = n == 0 ? 0.0 : s / static_cast<double>(n);
  if (l2_ != 0.0) {
    double sq = 0.0;
    for (double v : state.x) sq += v * v;
    s += 0.5 * l2_ * sq;
  }
  return s;
}

Saga::Saga(const SparseRows& rows, SagaInit init) : rows_(&rows), graph_(rows_graph(rows)), init_(init) {}

void Saga::prepare(const ModelState& state) {
  const std::size_t n = rows_->num_rows();
  memory_.assign(n, 0.0);
  average_.assign(model_size(), 0.0);
  clock_.reset(model_size());
  if (init_ == SagaInit::kZero) return;
  for (std::size_t i = 0; i < n; ++i) memory_[i] = 2.0 * (rows_->dot(i, state.x) - rows_->targets[i]);
  average_ = recompute_average();
}

std::vector<double> Saga::recompute_average() const {
  std::vector<double> avg(model_size(), 0.0);
  const std::size_t n = rows_->num_rows();
  for (std::size_t i = 0; i < n; ++i) {
    const auto cols = rows_->cols(i);
    const auto vals = rows_->vals(i);
    for (std::size_t k = 0; k < cols.size(); ++k) avg[cols[k]] += memory_[i] * vals[k];
  }
  for (auto& v : avg) v /= static_cast<double>(n);
  return avg;
}

void Saga::apply(UpdateId i, std::uint64_t step, ModelState& state) {
  auto& x = state.x;
  const double gamma = stepsize_;
  const double inv_n = 1.0 / static_cast<double>(rows_->num_rows());
  const auto cols = rows_->cols(i);
  const auto vals = rows_->vals(i);
  for (auto j : cols) {
    store_relaxed(x[j], lazy_catchup(load_relaxed(x[j]), 0.0, gamma * load_relaxed(average_[j]), clock_.pending(j, step)));
  }
  const double fresh = 2.0 * (sparse_dot(*rows_, i, x) - rows_->targets[i]);
  const double delta = fresh - load_relaxed(memory_[i]);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const auto j = cols[k];
    const double avg = load_relaxed(average_[j]);
    store_relaxed(x[j], load_relaxed(x[j]) - gamma * (delta * vals[k] + avg));
    store_relaxed(average_[j], avg + delta * vals[k] * inv_n);
    clock_.touch(j, step);
  }
  store_relaxed(memory_[i], fresh);
}

void Saga::end_epoch(ModelState& state) {
  for (std::size_t j = 0; j < state.x.size(); ++j) {
    state.x[j] = lazy_catchup(state.x[j], 0.0, stepsize_ * average_[j], clock_.owed(j, epoch_length_));
  }
  clock_.reset(model_size());
}

double Saga::objective(const ModelState& state) const { return mean_squared_loss(*rows_, state.x); }

SparseSvrg::SparseSvrg(const SparseRows& rows) : rows_(&rows), graph_(rows_graph(rows)) {}

void SparseSvrg::refresh_anchor(const std::vector<double>& x) {
  const std::size_t n = rows_->num_rows();
  anchor_ = x;
  anchor_residual_.assign(n, 0.0);
  full_gradient_.assign(model_size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = 2.0 * (rows_->dot(i, anchor_) - rows_->targets[i]);
    anchor_residual_[i] = c;
    const auto cols = rows_->cols(i);
    const auto vals = rows_->vals(i);
    for (std::size_t k = 0; k < cols.size(); ++k) full_gradient_[cols[k]] += c * vals[k];
  }
  for (auto& v : full_gradient_) v /= static_cast<double>(n);
}

void SparseSvrg::prepare(const ModelState& state) {
  refresh_anchor(state.x);
  anchor_epoch_ = 0;
  clock_.reset(model_size());
}

void SparseSvrg::apply(UpdateId i, std::uint64_t step, ModelState& state) {
  if (anchor_epoch_ != epoch_) throw std::logic_error("SVRG anchor is stale");
  auto& x = state.x;
  const double gamma = stepsize_;
  const auto cols = rows_->cols(i);
  const auto vals = rows_->vals(i);
  for (auto j : cols) {
    store_relaxed(x[j], lazy_catchup(load_relaxed(x[j]), 0.0, gamma * full_gradient_[j], clock_.pending(j, step)));
  }
  const double diff = 2.0 * (sparse_dot(*rows_, i, x) - rows_->targets[i]) - anchor_residual_[i];
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const auto j = cols[k];
    store_relaxed(x[j], load_relaxed(x[j]) - gamma * (diff * vals[k] + full_gradient_[j]));
    clock_.touch(j, step);
  }
}

void SparseSvrg::end_epoch(ModelState& state) {
  for (std::size_t j = 0; j < state.x.size(); ++j) {
    state.x[j] = lazy_catchup(state.x[j], 0.0, stepsize_ * full_gradient_[j], clock_.owed(j, epoch_length_));
  }
  clock_.reset(model_size());
  refresh_anchor(state.x);
  anchor_epoch_ = epoch_ + 1;
}

double SparseSvrg::objective(const ModelState& state) const { return mean_squared_loss(*rows_, state.x); }

}  // namespace su
