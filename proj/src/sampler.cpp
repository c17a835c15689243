#include "su/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "su/errors.hpp"

namespace su {

void SamplePlan::validate() const {
  if (num_updates == 0) throw InputError("sample plan needs at least one update");
  if (batch_size < 1 || batch_size > num_updates) {
    throw InputError("batch size must lie in [1, n]");
  }
}

std::size_t prescribed_batch_size(std::size_t n, std::size_t conflict_degree, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  if (n == 0) return 0;
  if (conflict_degree == 0) return n;
  const double b = std::floor((1.0 - epsilon) * static_cast<double>(n) / static_cast<double>(conflict_degree));
  return std::clamp<std::size_t>(static_cast<std::size_t>(b), 1, n);
}

std::vector<UpdateId> epoch_samples(const SamplePlan& plan, std::size_t epoch) {
  std::seed_seq seq{static_cast<std::uint32_t>(plan.seed), static_cast<std::uint32_t>(plan.seed >> 32),
                    static_cast<std::uint32_t>(epoch), static_cast<std::uint32_t>(epoch >> 32)};
  std::mt19937_64 rng(seq);
  std::vector<UpdateId> ids(plan.num_updates);
  if (plan.scheme == SamplingScheme::kWithoutReplacement) {
    std::iota(ids.begin(), ids.end(), UpdateId{0});
    std::shuffle(ids.begin(), ids.end(), rng);
  } else {
    std::uniform_int_distribution<UpdateId> pick(0, static_cast<UpdateId>(plan.num_updates - 1));
    for (auto& id : ids) id = pick(rng);
  }
  return ids;
}

SampleStream::SampleStream(SamplePlan plan) : plan_(plan) { plan_.validate(); }

std::optional<Batch> SampleStream::next_batch() {
  if (cursor_ >= plan_.total_updates()) return std::nullopt;
  const std::size_t n = plan_.num_updates;
  const std::size_t epoch = static_cast<std::size_t>(cursor_ / n);
  if (epoch != loaded_epoch_) {
    epoch_ids_ = epoch_samples(plan_, epoch);
    loaded_epoch_ = epoch;
  }
  const std::size_t offset = static_cast<std::size_t>(cursor_ - static_cast<std::uint64_t>(epoch) * n);
  const std::size_t count = std::min(plan_.batch_size, n - offset);

  Batch batch;
  batch.batch_index = batch_index_++;
  batch.epoch = epoch;
  batch.items.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    batch.items.push_back({cursor_ + k, epoch_ids_[offset + k]});
  }
  cursor_ += count;
  return batch;
}

std::vector<Batch> SampleStream::next_epoch() {
  std::vector<Batch> batches;
  if (cursor_ >= plan_.total_updates()) return batches;
  const std::uint64_t end = (cursor_ / plan_.num_updates + 1) * plan_.num_updates;
  while (cursor_ < end) batches.push_back(*next_batch());
  return batches;
}

}  // namespace su
