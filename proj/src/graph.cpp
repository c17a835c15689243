#include "su/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "su/errors.hpp"

namespace su {

UpdateVariableGraph UpdateVariableGraph::build(const std::vector<std::vector<VarId>>& supports,
                                               std::size_t num_variables) {
  UpdateVariableGraph g;
  const std::size_t n = supports.size();
  g.update_offsets_.assign(n + 1, 0);
  g.var_offsets_.assign(num_variables + 1, 0);

  std::vector<VarId> scratch;
  for (std::size_t i = 0; i < n; ++i) {
    scratch.assign(supports[i].begin(), supports[i].end());
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    if (!scratch.empty() && scratch.back() >= num_variables) {
      throw InputError("update " + std::to_string(i) + " references variable " +
                       std::to_string(scratch.back()) + " but only " +
                       std::to_string(num_variables) + " variables exist");
    }
    g.update_vars_.insert(g.update_vars_.end(), scratch.begin(), scratch.end());
    g.update_offsets_[i + 1] = g.update_vars_.size();
    for (VarId j : scratch) ++g.var_offsets_[j + 1];
  }

  std::partial_sum(g.var_offsets_.begin(), g.var_offsets_.end(), g.var_offsets_.begin());
  g.var_updates_.resize(g.update_vars_.size());
  std::vector<std::size_t> cursor(g.var_offsets_.begin(), g.var_offsets_.end() - 1);
  // Scanning updates in ascending order keeps each variable's list sorted.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t e = g.update_offsets_[i]; e < g.update_offsets_[i + 1]; ++e) {
      g.var_updates_[cursor[g.update_vars_[e]]++] = static_cast<UpdateId>(i);
    }
  }
  return g;
}

namespace {

std::size_t count_neighbours(const UpdateVariableGraph& g, UpdateId i, std::vector<std::uint32_t>& stamp,
                             std::uint32_t mark) {
  std::size_t count = 0;
  stamp[i] = mark;
  for (VarId j : g.support(i)) {
    for (UpdateId k : g.updates_of(j)) {
      if (stamp[k] != mark) {
        stamp[k] = mark;
        ++count;
      }
    }
  }
  return count;
}

}  // namespace

std::size_t conflict_degree_of(const UpdateVariableGraph& g, UpdateId i) {
  std::vector<std::uint32_t> stamp(g.num_updates(), 0);
  return count_neighbours(g, i, stamp, 1);
}

std::size_t compute_conflict_degree(const UpdateVariableGraph& g) {
  const std::size_t n = g.num_updates();
  if (n == 0) return 0;

  // Σ_{j∈S_i}(deg(j) − 1) bounds the conflict degree of i from above; visiting
  // updates by decreasing bound lets us stop once no bound can beat the best.
  std::vector<std::size_t> bound(n);
  for (UpdateId i = 0; i < n; ++i) {
    std::size_t b = 0;
    for (VarId j : g.support(i)) b += g.var_degree(j) - 1;
    bound[i] = std::min(b, n - 1);
  }
  std::vector<UpdateId> order(n);
  std::iota(order.begin(), order.end(), UpdateId{0});
  std::sort(order.begin(), order.end(), [&](UpdateId a, UpdateId b) {
    return bound[a] != bound[b] ? bound[a] > bound[b] : a < b;
  });

  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t mark = 0;
  std::size_t best = 0;
  for (UpdateId i : order) {
    if (bound[i] <= best) break;
    best = std::max(best, count_neighbours(g, i, stamp, ++mark));
    if (best == n - 1) break;
  }
  return best;
}

GraphStats compute_stats(const UpdateVariableGraph& g) {
  GraphStats s;
  const std::size_t n = g.num_updates();
  if (n == 0) return s;
  for (UpdateId i = 0; i < n; ++i) s.max_left_degree = std::max(s.max_left_degree, g.degree(i));
  s.avg_left_degree = static_cast<double>(g.num_edges()) / static_cast<double>(n);
  s.conflict_degree = compute_conflict_degree(g);
  if (s.avg_left_degree > 0.0) {
    s.ratio_ok = static_cast<double>(s.max_left_degree) / s.avg_left_degree <= std::sqrt(static_cast<double>(n));
  }
  return s;
}

}  // namespace su
