#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "su/data.hpp"

namespace su {

// Per-sample losses f_i and their analytic gradients, written into a dense
// vector of the model's size. The stochastic updates use the same formulas
// restricted to S_i; these dense forms exist for checking and for oracles.

/// f_i(x) = (a_iᵀx − b_i)²
double squared_loss(const SparseRows& a, std::size_t i, std::span<const double> x);
void squared_loss_gradient(const SparseRows& a, std::size_t i, std::span<const double> x, std::span<double> grad);

/// f_i(x) = log(1 + e^{z}) − y_i·z with z = a_iᵀx
double logistic_loss(const SparseRows& a, std::size_t i, std::span<const double> x);
void logistic_loss_gradient(const SparseRows& a, std::size_t i, std::span<const double> x, std::span<double> grad);

/// f_i(x) = ½xᵀ(λ/n·I − a_i a_iᵀ)x − (1/n)·bᵀx
double eigen_component(const SparseRows& a, std::size_t i, std::span<const double> b, double shift,
                       std::span<const double> x);
void eigen_component_gradient(const SparseRows& a, std::size_t i, std::span<const double> b, double shift,
                              std::span<const double> x, std::span<double> grad);

/// Completion term (M_ij − U_i·V_j)², model layout [U rows | V columns] in blocks of `rank`.
double completion_loss(const TripleSet& m, std::size_t e, std::size_t rank, std::span<const double> x);
void completion_loss_gradient(const TripleSet& m, std::size_t e, std::size_t rank, std::span<const double> x,
                              std::span<double> grad);

/// Embedding term A·(log A − ‖v_w + v_w'‖² − C)², word vectors in blocks of `rank`.
double embedding_loss(const TripleSet& counts, std::size_t e, std::size_t rank, double offset,
                      std::span<const double> x);
void embedding_loss_gradient(const TripleSet& counts, std::size_t e, std::size_t rank, double offset,
                             std::span<const double> x, std::span<double> grad);

double sigmoid(double z);

}  // namespace su
