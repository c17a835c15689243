#include "su/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string_view>

#include "su/errors.hpp"

namespace su {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::uint32_t parse_index(std::string_view token, std::size_t line) {
  std::uint32_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("expected a non-negative integer index, got '" + std::string(token) + "'", line);
  }
  return v;
}

double parse_real(std::string_view token, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw ParseError("expected a real number, got '" + std::string(token) + "'", line);
  }
  return v;
}

/// Calls fn(tokens, line_number) for each data line; throws if there is none.
/// A "# shape a [b]" comment fills `shape` with the declared sizes.
template <class Fn>
void for_each_record(std::istream& in, Fn&& fn, std::vector<std::size_t>* shape = nullptr) {
  std::string line;
  std::size_t number = 0;
  std::size_t records = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.front().front() == '#') {
      if (shape && tokens.size() >= 3 && tokens[0] == "#" && tokens[1] == "shape") {
        shape->clear();
        for (std::size_t k = 2; k < tokens.size(); ++k) shape->push_back(parse_index(tokens[k], number));
      }
      continue;
    }
    fn(tokens, number);
    ++records;
  }
  if (records == 0) throw ParseError("no data lines in input", number);
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

EdgeList read_edge_list(std::istream& in) {
  EdgeList g;
  std::vector<std::size_t> shape;
  for_each_record(in, [&](const auto& tok, std::size_t line) {
    if (tok.size() != 2 && tok.size() != 3) throw ParseError("edge line needs 'src dst [weight]'", line);
    Edge e{parse_index(tok[0], line), parse_index(tok[1], line), tok.size() == 3 ? parse_real(tok[2], line) : 1.0};
    g.num_nodes = std::max<std::size_t>(g.num_nodes, std::max(e.src, e.dst) + std::size_t{1});
    g.edges.push_back(e);
  }, &shape);
  if (!shape.empty()) g.num_nodes = std::max(g.num_nodes, shape[0]);
  return g;
}

TripleSet read_triples(std::istream& in) {
  TripleSet m;
  std::vector<std::size_t> shape;
  for_each_record(in, [&](const auto& tok, std::size_t line) {
    if (tok.size() != 3) throw ParseError("triple line needs 'row col value'", line);
    Entry e{parse_index(tok[0], line), parse_index(tok[1], line), parse_real(tok[2], line)};
    m.num_rows = std::max<std::size_t>(m.num_rows, e.row + std::size_t{1});
    m.num_cols = std::max<std::size_t>(m.num_cols, e.col + std::size_t{1});
    m.entries.push_back(e);
  }, &shape);
  if (shape.size() >= 2) {
    m.num_rows = std::max(m.num_rows, shape[0]);
    m.num_cols = std::max(m.num_cols, shape[1]);
  }
  return m;
}

SparseRows read_labeled_rows(std::istream& in) {
  SparseRows rows;
  std::vector<std::size_t> shape;
  for_each_record(in, [&](const auto& tok, std::size_t line) {
    double label = parse_real(tok[0], line);
    if (label == -1.0) label = 0.0;
    if (label != 0.0 && label != 1.0) throw ParseError("label must be 0, 1 or -1", line);
    std::vector<std::pair<std::uint32_t, double>> entries;
    for (std::size_t k = 1; k < tok.size(); ++k) {
      const auto colon = tok[k].find(':');
      if (colon == std::string_view::npos) throw ParseError("feature must be 'idx:val'", line);
      entries.emplace_back(parse_index(tok[k].substr(0, colon), line), parse_real(tok[k].substr(colon + 1), line));
    }
    rows.add_row(std::move(entries), label);
  }, &shape);
  if (shape.size() >= 2) rows.num_cols = std::max(rows.num_cols, shape[1]);
  return rows;
}

void write_edge_list(std::ostream& out, const EdgeList& g) {
  out << "# shape " << g.num_nodes << '\n';
  for (const auto& e : g.edges) out << e.src << ' ' << e.dst << ' ' << format_real(e.weight) << '\n';
}

void write_triples(std::ostream& out, const TripleSet& m) {
  out << "# shape " << m.num_rows << ' ' << m.num_cols << '\n';
  for (const auto& e : m.entries) out << e.row << ' ' << e.col << ' ' << format_real(e.value) << '\n';
}

void write_labeled_rows(std::ostream& out, const SparseRows& rows) {
  out << "# shape " << rows.num_rows() << ' ' << rows.num_cols << '\n';
  for (std::size_t i = 0; i < rows.num_rows(); ++i) {
    out << format_real(rows.targets[i]);
    const auto c = rows.cols(i);
    const auto v = rows.vals(i);
    for (std::size_t k = 0; k < c.size(); ++k) out << ' ' << c[k] << ':' << format_real(v[k]);
    out << '\n';
  }
}

DatasetSpec DatasetSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  DatasetSpec spec;
  static const std::map<std::string, DatasetKind> kinds = {
      {"edges", DatasetKind::kEdgeListGraph},
      {"ratings", DatasetKind::kRatingTriples},
      {"cooc", DatasetKind::kCooccurrenceCounts},
      {"rows", DatasetKind::kSparseLabeledRows},
      {"synth-ls", DatasetKind::kSyntheticLeastSquares},
      {"synth-mc", DatasetKind::kSyntheticCompletion},
      {"synth-cooc", DatasetKind::kSyntheticCooccurrence},
      {"synth-graph", DatasetKind::kSyntheticGraph},
      {"synth-powerlaw", DatasetKind::kSyntheticPowerLaw},
  };
  const auto it = kinds.find(kind);
  if (it == kinds.end()) throw InputError("unknown dataset kind '" + kind + "'");
  spec.kind = it->second;
  if (kind.rfind("synth-", 0) == 0) {
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InputError("generator parameter '" + item + "' needs key=value");
      spec.params[item.substr(0, eq)] = item.substr(eq + 1);
    }
  } else {
    if (rest.empty()) throw InputError("dataset '" + kind + "' needs a file path");
    spec.path = rest;
  }
  return spec;
}

double DatasetSpec::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw InputError("parameter " + key + " is not a number");
  }
}

Dataset load(const DatasetSpec& spec, std::uint64_t seed) {
  Dataset d;
  d.kind = spec.kind;
  auto open = [&] {
    std::ifstream in(spec.path);
    if (!in) throw InputError("cannot open " + spec.path.string());
    return in;
  };
  auto count = [&](const char* key, double fallback) { return static_cast<std::size_t>(spec.param(key, fallback)); };
  const auto s = static_cast<std::uint64_t>(spec.param("seed", static_cast<double>(seed)));
  switch (spec.kind) {
    case DatasetKind::kEdgeListGraph: {
      auto in = open();
      d.edges = read_edge_list(in);
      break;
    }
    case DatasetKind::kRatingTriples:
    case DatasetKind::kCooccurrenceCounts: {
      auto in = open();
      d.triples = read_triples(in);
      break;
    }
    case DatasetKind::kSparseLabeledRows: {
      auto in = open();
      d.rows = read_labeled_rows(in);
      break;
    }
    case DatasetKind::kSyntheticLeastSquares:
      d.rows = synth_least_squares(count("rows", 1000), count("cols", 1000), count("nnz", 5), s, spec.param("noise", 0.1));
      break;
    case DatasetKind::kSyntheticCompletion:
      d.triples = synth_completion(count("rows", 50), count("cols", 50), count("rank", 4), spec.param("density", 0.5), s);
      break;
    case DatasetKind::kSyntheticCooccurrence:
      d.triples = synth_cooccurrence(count("vocab", 100), count("pairs", 5), s);
      break;
    case DatasetKind::kSyntheticGraph:
      d.edges = synth_graph(count("nodes", 1000), spec.param("degree", 4.0), s);
      break;
    case DatasetKind::kSyntheticPowerLaw:
      d.rows = synth_powerlaw_rows(count("rows", 10000), count("cols", 10000), count("nnz", 8),
                                   spec.param("exponent", 1.0), s);
      break;
  }
  return d;
}

SparseRows synth_least_squares(std::size_t rows, std::size_t cols, std::size_t nnz_per_row, std::uint64_t seed,
                               double noise, std::vector<double>* planted) {
  if (nnz_per_row > cols) throw InputError("nnz per row exceeds the number of columns");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> x_true(cols);
  for (auto& v : x_true) v = normal(rng);

  SparseRows a;
  a.num_cols = cols;
  std::vector<std::uint32_t> picked;
  std::uniform_int_distribution<std::uint32_t> col(0, static_cast<std::uint32_t>(cols - 1));
  for (std::size_t i = 0; i < rows; ++i) {
    picked.clear();
    while (picked.size() < nnz_per_row) {
      const auto c = col(rng);
      if (std::find(picked.begin(), picked.end(), c) == picked.end()) picked.push_back(c);
    }
    std::vector<std::pair<std::uint32_t, double>> entries;
    for (auto c : picked) entries.emplace_back(c, normal(rng));
    double b = 0.0;
    for (const auto& [c, v] : entries) b += v * x_true[c];
    b += noise * normal(rng);
    a.add_row(std::move(entries), b);
  }
  a.num_cols = cols;
  if (planted) *planted = std::move(x_true);
  return a;
}

TripleSet synth_completion(std::size_t rows, std::size_t cols, std::size_t rank, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution observe(density);
  std::vector<double> u(rows * rank), v(cols * rank);
  for (auto& e : u) e = normal(rng);
  for (auto& e : v) e = normal(rng);
  TripleSet m;
  m.num_rows = rows;
  m.num_cols = cols;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (!observe(rng)) continue;
      double s = 0.0;
      for (std::size_t k = 0; k < rank; ++k) s += u[i * rank + k] * v[j * rank + k];
      m.entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), s});
    }
  }
  return m;
}

TripleSet synth_cooccurrence(std::size_t vocab, std::size_t pairs_per_word, std::uint64_t seed, int max_count) {
  if (vocab < 2) throw InputError("co-occurrence needs at least two words");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> word(0, static_cast<std::uint32_t>(vocab - 1));
  std::uniform_int_distribution<int> count(1, max_count);
  std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t w = 0; w < vocab; ++w) {
    for (std::size_t k = 0; k < pairs_per_word; ++k) {
      const auto other = word(rng);
      if (other != w) pairs.emplace(std::min(w, other), std::max(w, other));
    }
  }
  TripleSet m;
  m.num_rows = m.num_cols = vocab;
  for (const auto& [a, b] : pairs) {
    const double c = count(rng);
    m.entries.push_back({a, b, c});
    m.entries.push_back({b, a, c});
  }
  return m;
}

EdgeList synth_graph(std::size_t nodes, double avg_degree, std::uint64_t seed) {
  if (nodes < 2) throw InputError("graph needs at least two nodes");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> node(0, static_cast<std::uint32_t>(nodes - 1));
  const auto target = static_cast<std::size_t>(std::llround(static_cast<double>(nodes) * avg_degree / 2.0));
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  EdgeList g;
  g.num_nodes = nodes;
  std::size_t attempts = 0;
  while (g.edges.size() < target && attempts++ < 20 * target + 100) {
    auto a = node(rng), b = node(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (seen.emplace(a, b).second) g.edges.push_back({a, b, 1.0});
  }
  return g;
}

SparseRows synth_powerlaw_rows(std::size_t rows, std::size_t cols, std::size_t nnz_per_row, double exponent,
                               std::uint64_t seed) {
  if (nnz_per_row > cols) throw InputError("nnz per row exceeds the number of columns");
  std::mt19937_64 rng(seed);
  std::vector<double> popularity(cols);
  for (std::size_t k = 0; k < cols; ++k) popularity[k] = std::pow(static_cast<double>(k + 1), -exponent);
  std::discrete_distribution<std::uint32_t> feature(popularity.begin(), popularity.end());
  // Shuffle which column ids are popular so density is not tied to the index.
  std::vector<std::uint32_t> relabel(cols);
  std::iota(relabel.begin(), relabel.end(), 0u);
  std::shuffle(relabel.begin(), relabel.end(), rng);

  std::normal_distribution<double> normal;
  std::vector<double> w(cols);
  for (auto& v : w) v = normal(rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SparseRows out;
  std::vector<std::uint32_t> picked;
  for (std::size_t i = 0; i < rows; ++i) {
    picked.clear();
    while (picked.size() < nnz_per_row) {
      const auto c = relabel[feature(rng)];
      if (std::find(picked.begin(), picked.end(), c) == picked.end()) picked.push_back(c);
    }
    std::vector<std::pair<std::uint32_t, double>> entries;
    double z = 0.0;
    for (auto c : picked) {
      entries.emplace_back(c, 1.0);
      z += w[c];
    }
    const double p = 1.0 / (1.0 + std::exp(-z));
    out.add_row(std::move(entries), unit(rng) < p ? 1.0 : 0.0);
  }
  out.num_cols = cols;
  return out;
}

std::vector<std::vector<VarId>> synth_regular_supports(std::size_t n, std::size_t per_update, std::size_t per_var,
                                                       std::uint64_t seed) {
  if (per_var == 0 || (n * per_update) % per_var != 0) {
    throw InputError("n·per_update must be a positive multiple of per_var");
  }
  const std::size_t slots = n * per_update;
  std::vector<VarId> pool(slots);
  for (std::size_t s = 0; s < slots; ++s) pool[s] = static_cast<VarId>(s / per_var);
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);

  // Swap away repeated variables inside one update where possible.
  std::uniform_int_distribution<std::size_t> any(0, slots - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < per_update; ++a) {
      for (int tries = 0; tries < 64; ++tries) {
        const auto begin = pool.begin() + static_cast<std::ptrdiff_t>(i * per_update);
        const bool repeated = std::count(begin, begin + static_cast<std::ptrdiff_t>(per_update), pool[i * per_update + a]) > 1;
        if (!repeated) break;
        std::swap(pool[i * per_update + a], pool[any(rng)]);
      }
    }
  }
  std::vector<std::vector<VarId>> supports(n);
  for (std::size_t i = 0; i < n; ++i) {
    supports[i].assign(pool.begin() + static_cast<std::ptrdiff_t>(i * per_update),
                       pool.begin() + static_cast<std::ptrdiff_t>((i + 1) * per_update));
  }
  return supports;
}

FilterResult filter_dense_features(const SparseRows& rows, double top_fraction) {
  if (!(top_fraction >= 0.0 && top_fraction < 1.0)) throw InputError("filter fraction must lie in [0, 1)");
  const std::size_t d = rows.num_cols;
  const auto drop = static_cast<std::size_t>(std::ceil(top_fraction * static_cast<double>(d)));

  std::vector<std::size_t> degree(d, 0);
  for (auto c : rows.indices) ++degree[c];
  std::vector<std::uint32_t> order(d);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return degree[a] > degree[b]; });

  FilterResult out;
  out.removed = drop;
  out.remaining = d - drop;
  out.removed_columns.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(drop));
  std::vector<char> removed(d, 0);
  for (auto c : out.removed_columns) removed[c] = 1;
  std::sort(out.removed_columns.begin(), out.removed_columns.end());

  out.rows.num_cols = d;
  for (std::size_t i = 0; i < rows.num_rows(); ++i) {
    const auto c = rows.cols(i);
    const auto v = rows.vals(i);
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (removed[c[k]]) continue;
      out.rows.indices.push_back(c[k]);
      out.rows.values.push_back(v[k]);
    }
    out.rows.offsets.push_back(out.rows.indices.size());
    out.rows.targets.push_back(rows.targets[i]);
  }
  return out;
}

}  // namespace su
