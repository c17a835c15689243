#include "su/data.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "su/errors.hpp"

namespace su {

double SparseRows::dot(std::size_t i, std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) s += values[e] * x[indices[e]];
  return s;
}

void SparseRows::add_row(std::vector<std::pair<std::uint32_t, double>> entries, double target) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (k > 0 && entries[k].first == entries[k - 1].first) {
      values.back() += entries[k].second;
      continue;
    }
    indices.push_back(entries[k].first);
    values.push_back(entries[k].second);
    num_cols = std::max<std::size_t>(num_cols, entries[k].first + 1);
  }
  offsets.push_back(indices.size());
  targets.push_back(target);
}

UpdateVariableGraph rows_graph(const SparseRows& rows) {
  std::vector<std::vector<VarId>> supports(rows.num_rows());
  for (std::size_t i = 0; i < rows.num_rows(); ++i) {
    const auto c = rows.cols(i);
    supports[i].assign(c.begin(), c.end());
  }
  return UpdateVariableGraph::build(supports, rows.num_cols);
}

UpdateVariableGraph completion_graph(const TripleSet& m) {
  std::vector<std::vector<VarId>> supports;
  supports.reserve(m.entries.size());
  for (const auto& e : m.entries) {
    if (e.row >= m.num_rows || e.col >= m.num_cols) throw InputError("rating entry outside the matrix");
    supports.push_back({e.row, static_cast<VarId>(m.num_rows + e.col)});
  }
  return UpdateVariableGraph::build(supports, m.num_rows + m.num_cols);
}

UpdateVariableGraph cooccurrence_graph(const TripleSet& counts) {
  std::vector<std::vector<VarId>> supports;
  supports.reserve(counts.entries.size());
  for (const auto& e : counts.entries) supports.push_back({e.row, e.col});
  return UpdateVariableGraph::build(supports, std::max(counts.num_rows, counts.num_cols));
}

UpdateVariableGraph neighbourhood_graph(const EdgeList& g) {
  std::vector<std::vector<VarId>> supports(g.num_nodes);
  for (std::size_t v = 0; v < g.num_nodes; ++v) supports[v].push_back(static_cast<VarId>(v));
  for (const auto& e : g.edges) {
    if (e.src >= g.num_nodes || e.dst >= g.num_nodes) throw InputError("edge endpoint outside the graph");
    supports[e.src].push_back(e.dst);
    supports[e.dst].push_back(e.src);
  }
  return UpdateVariableGraph::build(supports, g.num_nodes);
}

SparseRows adjacency_rows(const EdgeList& g) {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(g.num_nodes);
  for (const auto& e : g.edges) {
    if (e.src >= g.num_nodes || e.dst >= g.num_nodes) throw InputError("edge endpoint outside the graph");
    rows[e.src].emplace_back(e.dst, e.weight);
    if (e.src != e.dst) rows[e.dst].emplace_back(e.src, e.weight);
  }
  SparseRows out;
  for (auto& r : rows) out.add_row(std::move(r), 0.0);
  out.num_cols = g.num_nodes;
  return out;
}

SparseRows normalize_rows(SparseRows rows) {
  for (std::size_t i = 0; i < rows.num_rows(); ++i) {
    double norm = 0.0;
    for (double v : rows.vals(i)) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    for (std::size_t e = rows.offsets[i]; e < rows.offsets[i + 1]; ++e) rows.values[e] /= norm;
  }
  return rows;
}

}  // namespace su
