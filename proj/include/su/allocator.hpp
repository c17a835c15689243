#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "su/conflict_groups.hpp"
#include "su/graph.hpp"

namespace su {

struct Allocation {
  std::vector<std::uint32_t> core_of_group;
  std::vector<std::uint64_t> core_loads;

  std::size_t num_cores() const { return core_loads.size(); }
  std::uint64_t max_load() const;
};

/// Longest-processing-time greedy: weights in descending order (ties keep the
/// lower index first), each placed on the least-loaded core (ties go to the
/// lowest core id).
Allocation greedy_allocate(std::span<const std::uint64_t> weights, std::size_t cores);

/// Group weight = κ · Σ over its updates of their support size.
std::vector<std::uint64_t> group_weights(const ConflictGroups& groups, const UpdateVariableGraph& g,
                                         std::uint64_t kappa = 1);

Allocation greedy_allocate(const ConflictGroups& groups, const UpdateVariableGraph& g, std::size_t cores,
                           std::uint64_t kappa = 1);

}  // namespace su
