#include "trajclust/sparse_graph.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "trajclust/error.hpp"
#include "trajclust/io.hpp"

namespace trajclust {

const char* to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::kMsg:
      return "MSG";
    case GraphKind::kKeng:
      return "KENG";
    case GraphKind::kGlobalThreshold:
      return "GLOBAL";
  }
  return "?";
}

SparseSimGraph SparseSimGraph::from_edges(std::size_t n_nodes, std::vector<std::size_t> node_sizes,
                                          GraphKind kind, std::vector<Edge> edges) {
  require(node_sizes.size() == n_nodes, ErrorCode::kInvalidInput,
          "node size vector does not match node count");
  for (Edge& e : edges) {
    require(e.u >= 0 && e.v >= 0 && static_cast<std::size_t>(e.u) < n_nodes &&
                static_cast<std::size_t>(e.v) < n_nodes,
            ErrorCode::kInvalidInput, "edge endpoint out of range");
    require(e.u != e.v, ErrorCode::kInvalidInput, "self-edges are not allowed");
    require(e.weight > 0.0, ErrorCode::kInvalidInput, "zero or negative link weight");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < edges.size(); ++i)
    require(edges[i].u != edges[i - 1].u || edges[i].v != edges[i - 1].v,
            ErrorCode::kInvalidInput, "duplicate edge");

  SparseSimGraph g;
  g.node_sizes_ = std::move(node_sizes);
  g.kind_ = kind;
  g.edges_ = std::move(edges);

  std::vector<std::size_t> degree(n_nodes, 0);
  for (const Edge& e : g.edges_) {
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }
  g.offsets_.assign(n_nodes + 1, 0);
  for (std::size_t i = 0; i < n_nodes; ++i) g.offsets_[i + 1] = g.offsets_[i] + degree[i];
  g.adjacency_.resize(g.offsets_.back());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : g.edges_) {
    g.adjacency_[fill[static_cast<std::size_t>(e.u)]++] = {e.v, e.weight};
    g.adjacency_[fill[static_cast<std::size_t>(e.v)]++] = {e.u, e.weight};
  }
  for (std::size_t i = 0; i < n_nodes; ++i) {
    std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
              g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
  return g;
}

std::optional<double> SparseSimGraph::weight(std::size_t i, std::size_t j) const {
  const auto nb = neighbors(i);
  auto it = std::lower_bound(nb.begin(), nb.end(), static_cast<std::int32_t>(j),
                             [](const Neighbor& n, std::int32_t v) { return n.node < v; });
  if (it != nb.end() && it->node == static_cast<std::int32_t>(j)) return it->weight;
  return std::nullopt;
}

SparseSimGraph build_msg(const CoAssocMatrix& mca, const MicroclusterSet& microclusters) {
  require(mca.granularity() == Granularity::kMicrocluster, ErrorCode::kInvalidInput,
          "MSG needs the microcluster-level co-association matrix");
  require(mca.size() == microclusters.size(), ErrorCode::kInvalidInput,
          "co-association matrix does not match the microcluster set");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < mca.size(); ++i)
    for (std::size_t j = i + 1; j < mca.size(); ++j)
      if (mca.count(i, j) > 0)
        edges.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j), mca.value(i, j)});
  return SparseSimGraph::from_edges(mca.size(), microclusters.sizes(), GraphKind::kMsg,
                                    std::move(edges));
}

EliteThresholds elite_thresholds(const SparseSimGraph& msg, std::size_t k) {
  require(k >= 1, ErrorCode::kUsage, "elite neighbor count K must be at least 1");
  std::vector<std::optional<double>> out(msg.n_nodes());
  std::vector<double> w;
  for (std::size_t i = 0; i < msg.n_nodes(); ++i) {
    const auto nb = msg.neighbors(i);
    if (nb.empty()) continue;
    w.clear();
    for (const Neighbor& n : nb) w.push_back(n.weight);
    const std::size_t rank = std::min(k, w.size()) - 1;
    std::nth_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(rank), w.end(),
                     std::greater<>());
    out[i] = w[rank];
  }
  return EliteThresholds(std::move(out));
}

SparseSimGraph build_keng(const SparseSimGraph& msg, std::size_t k) {
  const EliteThresholds thres = elite_thresholds(msg, k);
  std::vector<Edge> kept;
  for (const Edge& e : msg.edges()) {
    // Both endpoints have a link here, so neither threshold is empty.
    const double tu = *thres[static_cast<std::size_t>(e.u)];
    const double tv = *thres[static_cast<std::size_t>(e.v)];
    if (e.weight >= tu || e.weight >= tv) kept.push_back(e);
  }
  return SparseSimGraph::from_edges(msg.n_nodes(), msg.node_sizes(), GraphKind::kKeng,
                                    std::move(kept));
}

double ratio_pl(const SparseSimGraph& msg, const SparseSimGraph& keng) {
  require(msg.n_nodes() == keng.n_nodes(), ErrorCode::kInvalidInput,
          "graphs have different node sets");
  require(msg.n_links() > 0, ErrorCode::kNumeric, "RatioPL undefined: MSG has no links");
  return static_cast<double>(keng.n_links()) / static_cast<double>(msg.n_links());
}

SparseSimGraph build_global_threshold_graph(const SparseSimGraph& msg, double threshold) {
  std::vector<Edge> kept;
  for (const Edge& e : msg.edges())
    if (e.weight >= threshold) kept.push_back(e);
  return SparseSimGraph::from_edges(msg.n_nodes(), msg.node_sizes(), GraphKind::kGlobalThreshold,
                                    std::move(kept));
}

void write_edge_list(std::ostream& out, const SparseSimGraph& graph) {
  out << "n_nodes " << graph.n_nodes() << " kind " << to_string(graph.kind()) << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const Edge& e : graph.edges()) out << e.u << ' ' << e.v << ' ' << e.weight << '\n';
}

void write_edge_list(const std::string& path, const SparseSimGraph& graph) {
  std::ostringstream buf;
  write_edge_list(buf, graph);
  write_file_atomic(path, buf.str());
}

SparseSimGraph read_edge_list(std::istream& in) {
  std::string tag_nodes, tag_kind, kind_name;
  std::size_t n = 0;
  if (!(in >> tag_nodes >> n >> tag_kind >> kind_name) || tag_nodes != "n_nodes" ||
      tag_kind != "kind")
    throw_error(ErrorCode::kInvalidInput, "malformed edge list header");
  GraphKind kind;
  if (kind_name == "MSG")
    kind = GraphKind::kMsg;
  else if (kind_name == "KENG")
    kind = GraphKind::kKeng;
  else if (kind_name == "GLOBAL")
    kind = GraphKind::kGlobalThreshold;
  else
    throw_error(ErrorCode::kInvalidInput, "unknown graph kind '" + kind_name + "'");
  std::vector<Edge> edges;
  Edge e{};
  while (in >> e.u >> e.v >> e.weight) edges.push_back(e);
  require(in.eof(), ErrorCode::kInvalidInput, "malformed edge list line");
  return SparseSimGraph::from_edges(n, std::vector<std::size_t>(n, 1), kind, std::move(edges));
}

}  // namespace trajclust
