#include "su/conflict_groups.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <stdexcept>

#include "su/worker_pool.hpp"

namespace su {

std::size_t ConflictGroups::max_group_size() const {
  std::size_t best = 0;
  for (std::size_t g = 0; g < num_groups(); ++g) best = std::max(best, group_size(g));
  return best;
}

struct GroupFinder::Induced {
  std::vector<std::size_t> item_offsets;  // item -> local variables
  std::vector<std::uint32_t> item_vars;
  std::vector<std::size_t> var_offsets;  // local variable -> items
  std::vector<std::uint32_t> var_items;
  std::size_t num_vars = 0;
};

GroupFinder::GroupFinder(const UpdateVariableGraph& g)
    : graph_(&g), var_stamp_(g.num_variables(), 0), var_local_(g.num_variables(), 0) {}

void GroupFinder::next_generation() {
  if (++generation_ == 0) {
    std::fill(var_stamp_.begin(), var_stamp_.end(), 0);
    generation_ = 1;
  }
}

void GroupFinder::build_induced(const Batch& batch, Induced& out) {
  next_generation();
  const std::size_t b = batch.items.size();
  out.item_offsets.assign(b + 1, 0);
  out.item_vars.clear();
  out.num_vars = 0;
  for (std::size_t k = 0; k < b; ++k) {
    for (VarId j : graph_->support(batch.items[k].id)) {
      if (var_stamp_[j] != generation_) {
        var_stamp_[j] = generation_;
        var_local_[j] = static_cast<std::uint32_t>(out.num_vars++);
      }
      out.item_vars.push_back(var_local_[j]);
    }
    out.item_offsets[k + 1] = out.item_vars.size();
  }

  out.var_offsets.assign(out.num_vars + 1, 0);
  for (std::uint32_t v : out.item_vars) ++out.var_offsets[v + 1];
  for (std::size_t v = 0; v < out.num_vars; ++v) out.var_offsets[v + 1] += out.var_offsets[v];
  out.var_items.resize(out.item_vars.size());
  std::vector<std::size_t> cursor(out.var_offsets.begin(), out.var_offsets.end() - 1);
  for (std::size_t k = 0; k < b; ++k) {
    for (std::size_t e = out.item_offsets[k]; e < out.item_offsets[k + 1]; ++e) {
      out.var_items[cursor[out.item_vars[e]]++] = static_cast<std::uint32_t>(k);
    }
  }
}

ConflictGroups GroupFinder::bfs(const Batch& batch) {
  Induced ind;
  build_induced(batch, ind);

  ConflictGroups out;
  out.batch_index = batch.batch_index;
  out.induced_edges = ind.item_vars.size();
  const std::size_t b = batch.items.size();
  out.items.reserve(b);
  out.offsets.reserve(b + 1);

  std::vector<char> item_seen(b, 0), var_seen(ind.num_vars, 0);
  std::vector<std::uint32_t> component;
  for (std::size_t start = 0; start < b; ++start) {
    if (item_seen[start]) continue;
    component.clear();
    component.push_back(static_cast<std::uint32_t>(start));
    item_seen[start] = 1;
    // component doubles as the BFS queue.
    for (std::size_t head = 0; head < component.size(); ++head) {
      const std::uint32_t k = component[head];
      for (std::size_t e = ind.item_offsets[k]; e < ind.item_offsets[k + 1]; ++e) {
        const std::uint32_t v = ind.item_vars[e];
        if (var_seen[v]) continue;
        var_seen[v] = 1;
        for (std::size_t f = ind.var_offsets[v]; f < ind.var_offsets[v + 1]; ++f) {
          const std::uint32_t other = ind.var_items[f];
          if (!item_seen[other]) {
            item_seen[other] = 1;
            component.push_back(other);
          }
        }
      }
    }
    std::sort(component.begin(), component.end());
    for (std::uint32_t k : component) out.items.push_back(batch.items[k]);
    out.offsets.push_back(out.items.size());
  }
  return out;
}

namespace {

constexpr std::uint32_t kUnlabelled = std::numeric_limits<std::uint32_t>::max();

/// Lowers `slot` to `value` if smaller; true when this call changed it.
bool atomic_min(std::uint32_t& slot, std::uint32_t value) {
  std::atomic_ref<std::uint32_t> ref(slot);
  std::uint32_t current = ref.load(std::memory_order_relaxed);
  while (value < current) {
    if (ref.compare_exchange_weak(current, value, std::memory_order_relaxed)) return true;
  }
  return false;
}

}  // namespace

ConflictGroups GroupFinder::push_label(const Batch& batch, WorkerPool* pool) {
  Induced ind;
  build_induced(batch, ind);
  const std::size_t b = batch.items.size();

  std::vector<std::uint32_t> item_label(b);
  for (std::size_t k = 0; k < b; ++k) item_label[k] = static_cast<std::uint32_t>(k);
  std::vector<std::uint32_t> var_label(ind.num_vars, kUnlabelled);

  const std::size_t workers = pool ? pool->size() : 1;
  std::atomic<bool> changed{true};
  auto sweep = [&](std::size_t worker) {
    const std::size_t lo = b * worker / workers;
    const std::size_t hi = b * (worker + 1) / workers;
    bool local_change = false;
    for (std::size_t k = lo; k < hi; ++k) {
      for (std::size_t e = ind.item_offsets[k]; e < ind.item_offsets[k + 1]; ++e) {
        const std::uint32_t v = ind.item_vars[e];
        const auto mine = std::atomic_ref<std::uint32_t>(item_label[k]).load(std::memory_order_relaxed);
        const auto theirs = std::atomic_ref<std::uint32_t>(var_label[v]).load(std::memory_order_relaxed);
        if (theirs > mine) {
          local_change |= atomic_min(var_label[v], mine);
        } else if (mine > theirs) {
          local_change |= atomic_min(item_label[k], theirs);
        }
      }
    }
    if (local_change) changed.store(true, std::memory_order_relaxed);
  };

  // A component's labels settle within (diameter + 1) sweeps, and the
  // diameter is below the component size, hence below b.
  const std::size_t max_rounds = b + 2;
  std::size_t rounds = 0;
  while (changed.load(std::memory_order_relaxed)) {
    if (++rounds > max_rounds) throw std::logic_error("push-label did not converge");
    changed.store(false, std::memory_order_relaxed);
    if (pool && workers > 1) {
      pool->run(sweep);
    } else {
      sweep(0);
    }
  }

  // Each item now carries the smallest item index of its component.
  ConflictGroups out;
  out.batch_index = batch.batch_index;
  out.induced_edges = ind.item_vars.size();
  std::vector<std::size_t> count(b + 1, 0);
  for (std::size_t k = 0; k < b; ++k) ++count[item_label[k] + 1];
  std::vector<std::size_t> start(b + 1, 0);
  for (std::size_t k = 0; k < b; ++k) start[k + 1] = start[k] + count[k + 1];
  out.items.resize(b);
  std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
  for (std::size_t k = 0; k < b; ++k) out.items[cursor[item_label[k]]++] = batch.items[k];
  for (std::size_t root = 0; root < b; ++root) {
    if (count[root + 1] > 0) out.offsets.push_back(start[root + 1]);
  }
  return out;
}

ConflictGroups find_groups_bfs(const UpdateVariableGraph& g, const Batch& batch) {
  GroupFinder finder(g);
  return finder.bfs(batch);
}

ConflictGroups find_groups_push_label(const UpdateVariableGraph& g, const Batch& batch, std::size_t threads) {
  GroupFinder finder(g);
  if (threads <= 1) return finder.push_label(batch, nullptr);
  WorkerPool pool(threads);
  return finder.push_label(batch, &pool);
}

}  // namespace su
