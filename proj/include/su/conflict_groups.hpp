#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "su/graph.hpp"
#include "su/sampler.hpp"

namespace su {

class WorkerPool;

/// Partition of one batch into variable-disjoint groups.
///
/// Groups are stored flat: group g is items[offsets[g] .. offsets[g+1]).
/// Inside a group labels ascend; groups are ordered by their first label.
struct ConflictGroups {
  std::vector<LabeledUpdate> items;
  std::vector<std::size_t> offsets{0};
  std::size_t batch_index = 0;
  std::size_t induced_edges = 0;  // E_u^i

  std::size_t num_groups() const { return offsets.size() - 1; }
  std::span<const LabeledUpdate> group(std::size_t g) const {
    return {items.data() + offsets[g], items.data() + offsets[g + 1]};
  }
  std::size_t group_size(std::size_t g) const { return offsets[g + 1] - offsets[g]; }
  std::size_t max_group_size() const;
};

enum class CcMethod { kBfs, kPushLabel };

/// Reusable scratch space for computing the groups of many batches on one
/// thread. Scratch arrays are sized by the graph and reset lazily with
/// generation stamps, so each call costs O(E_u^i) rather than O(n + d).
class GroupFinder {
 public:
  explicit GroupFinder(const UpdateVariableGraph& g);

  ConflictGroups bfs(const Batch& batch);

  /// Min-label propagation over the induced bipartite subgraph. With a pool,
  /// items are split across its workers; labels are shared atomics.
  ConflictGroups push_label(const Batch& batch, WorkerPool* pool);

 private:
  struct Induced;
  void build_induced(const Batch& batch, Induced& out);
  void next_generation();

  const UpdateVariableGraph* graph_;
  std::vector<std::uint32_t> var_stamp_;
  std::vector<std::uint32_t> var_local_;
  std::uint32_t generation_ = 0;
};

ConflictGroups find_groups_bfs(const UpdateVariableGraph& g, const Batch& batch);
ConflictGroups find_groups_push_label(const UpdateVariableGraph& g, const Batch& batch, std::size_t threads);

}  // namespace su
