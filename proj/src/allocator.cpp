#include "su/allocator.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <tuple>

#include "su/errors.hpp"

namespace su {

std::uint64_t Allocation::max_load() const {
  return core_loads.empty() ? 0 : *std::max_element(core_loads.begin(), core_loads.end());
}

Allocation greedy_allocate(std::span<const std::uint64_t> weights, std::size_t cores) {
  if (cores == 0) throw InputError("allocation needs at least one core");
  Allocation out;
  out.core_of_group.assign(weights.size(), 0);
  out.core_loads.assign(cores, 0);

  std::vector<std::uint32_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return weights[a] > weights[b]; });

  using Slot = std::pair<std::uint64_t, std::uint32_t>;  // (load, core)
  std::priority_queue<Slot, std::vector<Slot>, std::greater<>> least_loaded;
  for (std::uint32_t c = 0; c < cores; ++c) least_loaded.emplace(0, c);

  for (std::uint32_t group : order) {
    auto [load, core] = least_loaded.top();
    least_loaded.pop();
    load += weights[group];
    out.core_of_group[group] = core;
    out.core_loads[core] = load;
    least_loaded.emplace(load, core);
  }
  return out;
}

std::vector<std::uint64_t> group_weights(const ConflictGroups& groups, const UpdateVariableGraph& g,
                                         std::uint64_t kappa) {
  std::vector<std::uint64_t> w(groups.num_groups(), 0);
  for (std::size_t c = 0; c < groups.num_groups(); ++c) {
    for (const auto& item : groups.group(c)) w[c] += g.degree(item.id);
    w[c] *= kappa;
  }
  return w;
}

Allocation greedy_allocate(const ConflictGroups& groups, const UpdateVariableGraph& g, std::size_t cores,
                           std::uint64_t kappa) {
  const auto w = group_weights(groups, g, kappa);
  return greedy_allocate(w, cores);
}

}  // namespace su
