#include "su/algorithms/embedding.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "su/errors.hpp"
#include "su/shared.hpp"

namespace su {

WordEmbeddingSgd::WordEmbeddingSgd(const TripleSet& counts, std::size_t rank)
    : counts_(&counts), graph_(cooccurrence_graph(counts)), rank_(rank) {
  if (rank == 0) throw InputError("rank must be positive");
  for (const auto& e : counts.entries) {
    if (!(e.value > 0.0)) throw InputError("co-occurrence counts must be positive");
  }
}

ModelState WordEmbeddingSgd::initial_state(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-0.5, 0.5);
  ModelState state;
  state.x.resize(model_size());
  for (auto& v : state.x) v = uniform(rng) / static_cast<double>(rank_);
  return state;
}

void WordEmbeddingSgd::refresh_offset(const ModelState& state) {
  double num = 0.0, den = 0.0;
  for (const auto& e : counts_->entries) {
    double q = 0.0;
    for (std::size_t k = 0; k < rank_; ++k) {
      const double s = state.x[e.row * rank_ + k] + state.x[e.col * rank_ + k];
      q += s * s;
    }
    num += e.value * (std::log(e.value) - q);
    den += e.value;
  }
  offset_ = den > 0.0 ? num / den : 0.0;
}

void WordEmbeddingSgd::prepare(const ModelState& state) { refresh_offset(state); }

void WordEmbeddingSgd::apply(UpdateId e, std::uint64_t /*step*/, ModelState& state) {
  const auto& entry = counts_->entries[e];
  double* a = state.x.data() + entry.row * rank_;
  double* b = state.x.data() + entry.col * rank_;
  std::vector<double> s(rank_);
  double q = 0.0;
  for (std::size_t k = 0; k < rank_; ++k) {
    s[k] = load_relaxed(a[k]) + load_relaxed(b[k]);
    q += s[k] * s[k];
  }
  const double coef = 4.0 * stepsize_ * entry.value * (std::log(entry.value) - q - offset_);
  for (std::size_t k = 0; k < rank_; ++k) {
    store_relaxed(a[k], load_relaxed(a[k]) + coef * s[k]);
    store_relaxed(b[k], load_relaxed(b[k]) + coef * s[k]);
  }
}

void WordEmbeddingSgd::end_epoch(ModelState& state) { refresh_offset(state); }

double WordEmbeddingSgd::objective(const ModelState& state) const {
  double total = 0.0;
  for (std::size_t e = 0; e < counts_->entries.size(); ++e) {
    const auto& entry = counts_->entries[e];
    double q = 0.0;
    for (std::size_t k = 0; k < rank_; ++k) {
      const double s = state.x[entry.row * rank_ + k] + state.x[entry.col * rank_ + k];
      q += s * s;
    }
    const double r = std::log(entry.value) - q - offset_;
    total += entry.value * r * r;
  }
  return total;
}

}  // namespace su
