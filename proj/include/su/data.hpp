#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "su/graph.hpp"

namespace su {

/// Row-compressed sparse matrix with one target per row (b_i for
/// regression, a 0/1 label for classification). Column indices inside a row
/// are sorted strictly ascending.
struct SparseRows {
  std::size_t num_cols = 0;
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::vector<double> targets;

  std::size_t num_rows() const { return offsets.size() - 1; }
  std::size_t nnz() const { return indices.size(); }
  std::span<const std::uint32_t> cols(std::size_t i) const {
    return {indices.data() + offsets[i], indices.data() + offsets[i + 1]};
  }
  std::span<const double> vals(std::size_t i) const {
    return {values.data() + offsets[i], values.data() + offsets[i + 1]};
  }
  double dot(std::size_t i, std::span<const double> x) const;

  /// Appends a row; entries are sorted and repeated columns summed.
  void add_row(std::vector<std::pair<std::uint32_t, double>> entries, double target);

  bool operator==(const SparseRows&) const = default;
};

struct Entry {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  double value = 0.0;

  bool operator==(const Entry&) const = default;
};

/// Observed matrix entries: ratings M_ij or co-occurrence counts A_ww'.
struct TripleSet {
  std::size_t num_rows = 0;
  std::size_t num_cols = 0;
  std::vector<Entry> entries;

  bool operator==(const TripleSet&) const = default;
};

struct Edge {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  double weight = 1.0;

  bool operator==(const Edge&) const = default;
};

struct EdgeList {
  std::size_t num_nodes = 0;
  std::vector<Edge> edges;

  bool operator==(const EdgeList&) const = default;
};

// Update–variable graphs for each task family.

/// One update per row, support = the row's nonzero columns.
UpdateVariableGraph rows_graph(const SparseRows& rows);
/// Update (i, j) touches row-block i and column-block num_rows + j.
UpdateVariableGraph completion_graph(const TripleSet& m);
/// Update (w, w') touches word blocks w and w'.
UpdateVariableGraph cooccurrence_graph(const TripleSet& counts);
/// Update v touches its closed neighbourhood N[v].
UpdateVariableGraph neighbourhood_graph(const EdgeList& g);

/// Symmetric adjacency matrix rows (undirected graph), targets left empty.
SparseRows adjacency_rows(const EdgeList& g);

/// Divides every row by its ℓ2 norm (empty rows stay empty).
SparseRows normalize_rows(SparseRows rows);

}  // namespace su
