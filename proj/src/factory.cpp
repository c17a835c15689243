#include "su/factory.hpp"

#include <random>

#include "su/algorithms/clustering.hpp"
#include "su/algorithms/completion.hpp"
#include "su/algorithms/eigen.hpp"
#include "su/algorithms/embedding.hpp"
#include "su/algorithms/linear.hpp"
#include "su/errors.hpp"

namespace su {
namespace {

bool has_rows(const Dataset& d) { return d.rows.num_rows() > 0; }
bool has_triples(const Dataset& d) { return !d.triples.entries.empty(); }
bool has_edges(const Dataset& d) { return d.edges.num_nodes > 0; }

void require(bool ok, const std::string& name, const char* what) {
  if (!ok) throw InputError(name + " needs a dataset of " + what);
}

}  // namespace

std::vector<std::string> algorithm_names() {
  return {"sgd", "wsgd", "logistic", "saga", "svrg", "svrg-eigen", "mc-sgd", "mc-wsgd", "embedding", "clustering"};
}

std::unique_ptr<Problem> make_problem(const std::string& name, Dataset data, const AlgorithmOptions& options,
                                      std::uint64_t seed) {
  auto p = std::make_unique<Problem>();
  p->data = std::move(data);
  auto& d = p->data;
  if (name == "sgd" || name == "wsgd" || name == "logistic") {
    require(has_rows(d), name, "sparse rows");
    const double l2 = name == "wsgd" ? options.l2 : 0.0;
    p->algorithm = std::make_unique<LinearSgd>(d.rows, name == "logistic" ? Loss::kLogistic : Loss::kSquared, l2,
                                               name == "wsgd");
  } else if (name == "saga") {
    require(has_rows(d), name, "sparse rows");
    p->algorithm = std::make_unique<Saga>(d.rows, options.saga_zero_init ? SagaInit::kZero : SagaInit::kGradientAtStart);
  } else if (name == "svrg") {
    require(has_rows(d), name, "sparse rows");
    p->algorithm = std::make_unique<SparseSvrg>(d.rows);
  } else if (name == "svrg-eigen") {
    if (has_edges(d) && !has_rows(d)) d.rows = adjacency_rows(d.edges);
    require(has_rows(d), name, "sparse rows or a graph");
    d.rows = normalize_rows(std::move(d.rows));
    const double shift = options.shift > 0.0 ? options.shift : 1.1 * estimate_gram_norm(d.rows, 100, seed);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> rhs(d.rows.num_cols);
    for (auto& v : rhs) v = normal(rng);
    p->algorithm = std::make_unique<DenseLinearSvrg>(d.rows, std::move(rhs), shift);
  } else if (name == "mc-sgd" || name == "mc-wsgd") {
    require(has_triples(d), name, "rating triples");
    p->algorithm = std::make_unique<MatrixCompletionSgd>(d.triples, options.rank, name == "mc-wsgd" ? options.l2 : 0.0);
  } else if (name == "embedding") {
    require(has_triples(d), name, "co-occurrence counts");
    p->algorithm = std::make_unique<WordEmbeddingSgd>(d.triples, options.rank);
  } else if (name == "clustering") {
    require(has_edges(d), name, "a graph");
    p->algorithm = std::make_unique<CorrelationClustering>(d.edges);
  } else {
    throw InputError("unknown algorithm: " + name);
  }
  return p;
}

}  // namespace su
