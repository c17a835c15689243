#include "su/algorithms/objectives.hpp"

#include <cmath>

namespace su {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double squared_loss(const SparseRows& a, std::size_t i, std::span<const double> x) {
  const double r = a.dot(i, x) - a.targets[i];
  return r * r;
}

void squared_loss_gradient(const SparseRows& a, std::size_t i, std::span<const double> x, std::span<double> grad) {
  const double c = 2.0 * (a.dot(i, x) - a.targets[i]);
  const auto cols = a.cols(i);
  const auto vals = a.vals(i);
  for (std::size_t k = 0; k < cols.size(); ++k) grad[cols[k]] += c * vals[k];
}

double logistic_loss(const SparseRows& a, std::size_t i, std::span<const double> x) {
  const double z = a.dot(i, x);
  const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  return softplus - a.targets[i] * z;
}

void logistic_loss_gradient(const SparseRows& a, std::size_t i, std::span<const double> x, std::span<double> grad) {
  const double c = sigmoid(a.dot(i, x)) - a.targets[i];
  const auto cols = a.cols(i);
  const auto vals = a.vals(i);
  for (std::size_t k = 0; k < cols.size(); ++k) grad[cols[k]] += c * vals[k];
}

double eigen_component(const SparseRows& a, std::size_t i, std::span<const double> b, double shift,
                       std::span<const double> x) {
  const double n = static_cast<double>(a.num_rows());
  double xx = 0.0, bx = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    xx += x[j] * x[j];
    bx += b[j] * x[j];
  }
  const double ax = a.dot(i, x);
  return 0.5 * (shift / n * xx - ax * ax) - bx / n;
}

void eigen_component_gradient(const SparseRows& a, std::size_t i, std::span<const double> b, double shift,
                              std::span<const double> x, std::span<double> grad) {
  const double n = static_cast<double>(a.num_rows());
  for (std::size_t j = 0; j < x.size(); ++j) grad[j] += shift / n * x[j] - b[j] / n;
  const double ax = a.dot(i, x);
  const auto cols = a.cols(i);
  const auto vals = a.vals(i);
  for (std::size_t k = 0; k < cols.size(); ++k) grad[cols[k]] -= vals[k] * ax;
}

double completion_loss(const TripleSet& m, std::size_t e, std::size_t rank, std::span<const double> x) {
  const auto& en = m.entries[e];
  const double* u = x.data() + en.row * rank;
  const double* v = x.data() + (m.num_rows + en.col) * rank;
  double s = 0.0;
  for (std::size_t k = 0; k < rank; ++k) s += u[k] * v[k];
  const double r = en.value - s;
  return r * r;
}

void completion_loss_gradient(const TripleSet& m, std::size_t e, std::size_t rank, std::span<const double> x,
                              std::span<double> grad) {
  const auto& en = m.entries[e];
  const std::size_t ub = en.row * rank;
  const std::size_t vb = (m.num_rows + en.col) * rank;
  double s = 0.0;
  for (std::size_t k = 0; k < rank; ++k) s += x[ub + k] * x[vb + k];
  const double c = 2.0 * (s - en.value);
  for (std::size_t k = 0; k < rank; ++k) {
    grad[ub + k] += c * x[vb + k];
    grad[vb + k] += c * x[ub + k];
  }
}

double embedding_loss(const TripleSet& counts, std::size_t e, std::size_t rank, double offset,
                      std::span<const double> x) {
  const auto& en = counts.entries[e];
  double q = 0.0;
  for (std::size_t k = 0; k < rank; ++k) {
    const double s = x[en.row * rank + k] + x[en.col * rank + k];
    q += s * s;
  }
  const double r = std::log(en.value) - q - offset;
  return en.value * r * r;
}

void embedding_loss_gradient(const TripleSet& counts, std::size_t e, std::size_t rank, double offset,
                             std::span<const double> x, std::span<double> grad) {
  const auto& en = counts.entries[e];
  double q = 0.0;
  for (std::size_t k = 0; k < rank; ++k) {
    const double s = x[en.row * rank + k] + x[en.col * rank + k];
    q += s * s;
  }
  const double c = -4.0 * en.value * (std::log(en.value) - q - offset);
  for (std::size_t k = 0; k < rank; ++k) {
    const double s = x[en.row * rank + k] + x[en.col * rank + k];
    grad[en.row * rank + k] += c * s;
    grad[en.col * rank + k] += c * s;
  }
}

}  // namespace su
