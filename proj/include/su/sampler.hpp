#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "su/graph.hpp"

namespace su {

enum class SamplingScheme { kWithReplacement, kWithoutReplacement };

struct SamplePlan {
  SamplingScheme scheme = SamplingScheme::kWithoutReplacement;
  std::size_t num_updates = 0;  // n
  std::size_t batch_size = 1;   // B
  std::size_t epochs = 1;
  std::uint64_t seed = 0;

  /// Both schemes draw n samples per epoch.
  std::uint64_t total_updates() const { return static_cast<std::uint64_t>(epochs) * num_updates; }
  void validate() const;
};

/// One sampled update together with its position in the serial order.
struct LabeledUpdate {
  std::uint64_t label;
  UpdateId id;

  bool operator==(const LabeledUpdate&) const = default;
};

struct Batch {
  std::vector<LabeledUpdate> items;
  std::size_t batch_index = 0;  // global, across epochs
  std::size_t epoch = 0;
};

/// floor((1 − ε)·n/Δ) clamped to [1, n]; n when Δ = 0.
std::size_t prescribed_batch_size(std::size_t n, std::size_t conflict_degree, double epsilon);

/// The serial sample sequence of one epoch: a permutation of 0..n−1, or n
/// i.i.d. uniform draws. Depends only on (scheme, n, seed, epoch).
std::vector<UpdateId> epoch_samples(const SamplePlan& plan, std::size_t epoch);

/// Walks the sample stream batch by batch. Batches never straddle epochs, so
/// the last batch of an epoch may be shorter than B.
class SampleStream {
 public:
  explicit SampleStream(SamplePlan plan);

  /// std::nullopt once all epochs·n samples have been handed out.
  std::optional<Batch> next_batch();

  /// All remaining batches of the current epoch.
  std::vector<Batch> next_epoch();

  std::uint64_t cursor() const { return cursor_; }
  const SamplePlan& plan() const { return plan_; }

 private:
  SamplePlan plan_;
  std::uint64_t cursor_ = 0;
  std::size_t batch_index_ = 0;
  std::size_t loaded_epoch_ = static_cast<std::size_t>(-1);
  std::vector<UpdateId> epoch_ids_;
};

}  // namespace su
