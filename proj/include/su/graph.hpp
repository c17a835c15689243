#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace su {

using UpdateId = std::uint32_t;
using VarId = std::uint32_t;

/// Bipartite incidence between n updates and d model variables.
///
/// Both directions are stored in compressed jagged form (offsets + flat id
/// array); every list is sorted strictly ascending. Immutable once built, so
/// any number of threads may read it concurrently.
class UpdateVariableGraph {
 public:
  UpdateVariableGraph() = default;

  /// Duplicate variable ids inside a support are dropped. Throws InputError
  /// when an id is >= num_variables.
  static UpdateVariableGraph build(const std::vector<std::vector<VarId>>& supports,
                                   std::size_t num_variables);

  std::size_t num_updates() const { return update_offsets_.empty() ? 0 : update_offsets_.size() - 1; }
  std::size_t num_variables() const { return var_offsets_.empty() ? 0 : var_offsets_.size() - 1; }
  std::size_t num_edges() const { return update_vars_.size(); }

  std::span<const VarId> support(UpdateId i) const {
    return {update_vars_.data() + update_offsets_[i], update_vars_.data() + update_offsets_[i + 1]};
  }
  std::span<const UpdateId> updates_of(VarId j) const {
    return {var_updates_.data() + var_offsets_[j], var_updates_.data() + var_offsets_[j + 1]};
  }
  std::size_t degree(UpdateId i) const { return update_offsets_[i + 1] - update_offsets_[i]; }
  std::size_t var_degree(VarId j) const { return var_offsets_[j + 1] - var_offsets_[j]; }

  bool operator==(const UpdateVariableGraph&) const = default;

 private:
  std::vector<std::size_t> update_offsets_;
  std::vector<VarId> update_vars_;
  std::vector<std::size_t> var_offsets_;
  std::vector<UpdateId> var_updates_;
};

struct GraphStats {
  std::size_t max_left_degree = 0;
  double avg_left_degree = 0.0;
  std::size_t conflict_degree = 0;
  bool ratio_ok = true;  // max/avg left degree <= sqrt(n)
};

/// Max degree of the conflict graph, computed without materialising it.
std::size_t compute_conflict_degree(const UpdateVariableGraph& g);

/// Number of other updates sharing at least one variable with update i.
std::size_t conflict_degree_of(const UpdateVariableGraph& g, UpdateId i);

GraphStats compute_stats(const UpdateVariableGraph& g);

}  // namespace su
