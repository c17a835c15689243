#pragma once

#include <cstdint>
#include <vector>

#include "su/shared.hpp"

namespace su {

/// Closed form of τ skipped updates of the form x ← (1−μ)·x − ν·(1−μ):
///   (1−μ)^τ·x − ν·Σ_{k=1..τ}(1−μ)^k.
/// The sum is evaluated as ν/μ·(1−μ)·(1−(1−μ)^τ), or ν·τ when μ = 0.
/// Non-positive τ leaves x unchanged.
double lazy_catchup(double x, double mu, double nu, std::int64_t tau);

/// Per-variable "last touched" step ρ(j), counted inside the current epoch.
///
/// Racy executions may present steps out of order; pending() then clamps the
/// skipped count at zero.
class LazyClock {
 public:
  void reset(std::size_t variables) { last_.assign(variables, 0); }

  /// Updates skipped by variable j before `step` (1-based), at least 0.
  std::int64_t pending(std::size_t j, std::uint64_t step) const {
    const auto gap = static_cast<std::int64_t>(step) - static_cast<std::int64_t>(load_relaxed(last_[j])) - 1;
    return gap > 0 ? gap : 0;
  }
  /// Updates still owed by j at the end of an epoch of `length` steps.
  std::int64_t owed(std::size_t j, std::uint64_t length) const {
    const auto gap = static_cast<std::int64_t>(length) - static_cast<std::int64_t>(load_relaxed(last_[j]));
    return gap > 0 ? gap : 0;
  }
  void touch(std::size_t j, std::uint64_t step) { store_relaxed(last_[j], step); }
  std::uint64_t last(std::size_t j) const { return last_[j]; }
  std::size_t size() const { return last_.size(); }

 private:
  std::vector<std::uint64_t> last_;
};

}  // namespace su
