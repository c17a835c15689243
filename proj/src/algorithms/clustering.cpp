#include "su/algorithms/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>
#include <utility>

#include "su/shared.hpp"

namespace su {

CorrelationClustering::CorrelationClustering(const EdgeList& graph)
    : edges_(&graph), graph_(neighbourhood_graph(graph)) {}

ModelState CorrelationClustering::initial_state(std::uint64_t /*seed*/) const {
  ModelState state;
  state.x.assign(model_size(), std::numeric_limits<double>::infinity());
  return state;
}

void CorrelationClustering::apply(UpdateId v, std::uint64_t /*step*/, ModelState& state) {
  if (!std::isinf(load_relaxed(state.x[v]))) return;
  const double id = static_cast<double>(v);
  for (auto u : graph_.support(v)) {
    if (id < load_relaxed(state.x[u])) store_relaxed(state.x[u], id);
  }
}

std::vector<std::uint64_t> CorrelationClustering::labels(const ModelState& state) {
  std::vector<std::uint64_t> out(state.x.size());
  for (std::size_t v = 0; v < out.size(); ++v) {
    out[v] = std::isinf(state.x[v]) ? v : static_cast<std::uint64_t>(state.x[v]);
  }
  return out;
}

double CorrelationClustering::objective(const ModelState& state) const {
  const auto label = labels(state);
  // Unlabelled vertices are singletons; shift them past every real id.
  std::vector<std::uint64_t> key(label.size());
  for (std::size_t v = 0; v < label.size(); ++v) key[v] = std::isinf(state.x[v]) ? label.size() + v : label[v];

  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& e : edges_->edges) {
    if (e.src == e.dst) continue;
    edges.emplace(std::min(e.src, e.dst), std::max(e.src, e.dst));
  }
  double disagreements = 0.0;
  std::size_t inside = 0;
  for (const auto& [a, b] : edges) {
    if (key[a] == key[b]) {
      ++inside;
    } else {
      disagreements += 1.0;
    }
  }
  std::unordered_map<std::uint64_t, std::size_t> sizes;
  for (auto k : key) ++sizes[k];
  double pairs = 0.0;
  for (const auto& [k, s] : sizes) pairs += 0.5 * static_cast<double>(s) * static_cast<double>(s - 1);
  disagreements += pairs - static_cast<double>(inside);
  return disagreements;
}

}  // namespace su
