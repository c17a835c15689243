#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "su/data.hpp"

namespace su {

// Text formats, whitespace separated, '#' starts a comment line:
//   edge list        "src dst [weight]"
//   triples          "row col value"       (ratings, co-occurrence counts)
//   labeled rows     "label idx:val ..."   (label −1 is read as 0)
// All indices are 0-based. Malformed lines raise ParseError with the line
// number; a file without data lines is an error. Writers emit a leading
// "# shape nodes" or "# shape rows cols" comment, which readers honour.

EdgeList read_edge_list(std::istream& in);
TripleSet read_triples(std::istream& in);
SparseRows read_labeled_rows(std::istream& in);

void write_edge_list(std::ostream& out, const EdgeList& g);
void write_triples(std::ostream& out, const TripleSet& m);
void write_labeled_rows(std::ostream& out, const SparseRows& rows);

enum class DatasetKind {
  kEdgeListGraph,
  kRatingTriples,
  kCooccurrenceCounts,
  kSparseLabeledRows,
  kSyntheticLeastSquares,
  kSyntheticCompletion,
  kSyntheticCooccurrence,
  kSyntheticGraph,
  kSyntheticPowerLaw,
};

/// "kind:path" for files (edges, ratings, cooc, rows) or
/// "kind:key=value,..." for generators (synth-ls, synth-mc, synth-cooc,
/// synth-graph, synth-powerlaw).
struct DatasetSpec {
  DatasetKind kind = DatasetKind::kSyntheticLeastSquares;
  std::filesystem::path path;
  std::map<std::string, std::string> params;

  static DatasetSpec parse(const std::string& text);
  double param(const std::string& key, double fallback) const;
};

/// Exactly one payload is populated, matching the kind's family.
struct Dataset {
  DatasetKind kind = DatasetKind::kSyntheticLeastSquares;
  SparseRows rows;     // least squares, classification
  TripleSet triples;   // ratings, co-occurrence counts
  EdgeList edges;      // graphs
};

Dataset load(const DatasetSpec& spec, std::uint64_t seed = 1);

/// Sparse A with `nnz_per_row` distinct uniformly random columns and N(0,1)
/// values; b = A·x̃ + noise·z̃ with x̃, z̃ standard normal.
SparseRows synth_least_squares(std::size_t rows, std::size_t cols, std::size_t nnz_per_row, std::uint64_t seed,
                               double noise = 0.1, std::vector<double>* planted = nullptr);

/// M = U*·V* (rank r, standard normal factors), each entry observed with
/// probability `density`.
TripleSet synth_completion(std::size_t rows, std::size_t cols, std::size_t rank, double density, std::uint64_t seed);

/// Symmetric co-occurrence counts over `vocab` words, `pairs_per_word`
/// random partners each, counts in [1, max_count]; no diagonal entries.
TripleSet synth_cooccurrence(std::size_t vocab, std::size_t pairs_per_word, std::uint64_t seed, int max_count = 20);

/// Random simple graph with about nodes·avg_degree/2 edges.
EdgeList synth_graph(std::size_t nodes, double avg_degree, std::uint64_t seed);

/// Labeled rows whose feature popularity follows a Zipf law with the given
/// exponent, so a few columns are very dense. Labels come from a planted
/// logistic model.
SparseRows synth_powerlaw_rows(std::size_t rows, std::size_t cols, std::size_t nnz_per_row, double exponent,
                               std::uint64_t seed);

/// Supports where each of n updates picks `per_update` variables and every
/// variable is used by exactly `per_var` updates (n·per_update must be a
/// multiple of per_var). Conflict degree ≤ per_update·(per_var − 1).
std::vector<std::vector<VarId>> synth_regular_supports(std::size_t n, std::size_t per_update, std::size_t per_var,
                                                       std::uint64_t seed);

struct FilterResult {
  SparseRows rows;
  std::size_t removed = 0;
  std::size_t remaining = 0;
  std::vector<std::uint32_t> removed_columns;
};

/// Drops the ⌈fraction·d⌉ columns with the most nonzeros (ties: lower index
/// first) and all their entries. Column numbering is kept.
FilterResult filter_dense_features(const SparseRows& rows, double top_fraction);

}  // namespace su
