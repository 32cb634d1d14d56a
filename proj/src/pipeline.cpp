#include "trajclust/pipeline.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <utility>

#include "trajclust/error.hpp"
#include "trajclust/io.hpp"
#include "trajclust/trajectory.hpp"

namespace trajclust {

namespace {

constexpr std::array<std::pair<Method, const char*>, 7> kMethodNames{{
    {Method::kPtaAl, "pta-al"},
    {Method::kPtaCl, "pta-cl"},
    {Method::kPtaSl, "pta-sl"},
    {Method::kPtgp, "ptgp"},
    {Method::kEacAl, "eac-al"},
    {Method::kEacCl, "eac-cl"},
    {Method::kEacSl, "eac-sl"},
}};

Linkage linkage_of(Method method) {
  switch (method) {
    case Method::kPtaCl:
    case Method::kEacCl:
      return Linkage::kComplete;
    case Method::kPtaSl:
    case Method::kEacSl:
      return Linkage::kSingle;
    default:
      return Linkage::kAverage;
  }
}

bool is_eac(Method method) {
  return method == Method::kEacAl || method == Method::kEacCl || method == Method::kEacSl;
}

SimilarityMatrix load_or_compute_pts(const Ensemble& ensemble, const TransitionMatrix& transition,
                                     const RunConfig& config, std::size_t elite, std::size_t steps,
                                     bool& from_cache) {
  from_cache = false;
  if (config.cache_dir.empty()) return compute_pts(transition, steps);
  const PtsHeader header{transition.size(), steps, elite};
  const std::string path = pts_cache_path(config.cache_dir, ensemble, elite, steps);
  if (auto cached = read_pts_binary(path, header)) {
    from_cache = true;
    return std::move(*cached);
  }
  SimilarityMatrix pts = compute_pts(transition, steps);
  std::error_code ec;
  std::filesystem::create_directories(config.cache_dir, ec);
  if (ec) throw_error(ErrorCode::kIo, "cannot create cache directory " + config.cache_dir + ": " + ec.message());
  write_pts_binary(path, pts, header);
  return pts;
}

}  // namespace

const char* to_string(Method method) {
  for (const auto& [m, name] : kMethodNames)
    if (m == method) return name;
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  for (const auto& [m, text] : kMethodNames)
    if (name == text) return m;
  return std::nullopt;
}

std::string pts_cache_path(const std::string& dir, const Ensemble& ensemble, std::size_t elite_neighbors,
                           std::size_t steps) {
  char name[96];
  std::snprintf(name, sizeof(name), "pts_%016llx_K%zu_T%zu.bin",
                static_cast<unsigned long long>(ensemble.content_hash()), elite_neighbors, steps);
  return (std::filesystem::path(dir) / name).string();
}

RunReport run_pipeline(const Ensemble& ensemble, const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  require(config.k >= 1, ErrorCode::kUsage, "cluster count k must be at least 1");

  RunReport report;
  report.microclusters = build_microclusters(ensemble);
  const MicroclusterSet& mcs = report.microclusters;
  const std::size_t n = mcs.size();
  require(config.k <= n, ErrorCode::kUsage,
          "cluster count k=" + std::to_string(config.k) + " exceeds the number of microclusters (" +
              std::to_string(n) + ")");

  const CoAssocMatrix mca = compute_mca(ensemble, mcs);
  const SparseSimGraph msg = build_msg(mca, mcs);

  const std::size_t auto_value = default_walk_parameter(n);
  report.elite_all = config.elite_neighbors == kParamAll;
  report.elite_neighbors = report.elite_all ? std::max<std::size_t>(n - 1, 1)
                           : config.elite_neighbors == kParamAuto ? auto_value
                                                                  : config.elite_neighbors;
  report.steps = config.steps == kParamAuto ? auto_value : config.steps;

  const SparseSimGraph keng = build_keng(msg, report.elite_neighbors);
  report.msg_links = msg.n_links();
  report.keng_links = keng.n_links();
  if (msg.n_links() > 0) report.ratio_pl = ratio_pl(msg, keng);

  if (is_eac(config.method)) {
    report.consensus = pta(mca.to_similarity(), mcs, config.k, linkage_of(config.method), config.cl_semantics);
    report.consensus.method = std::string("EAC-") + to_string(linkage_of(config.method));
  } else {
    const TransitionMatrix transition = build_transition(keng);
    const SimilarityMatrix pts = load_or_compute_pts(ensemble, transition, config, report.elite_neighbors,
                                                     report.steps, report.pts_from_cache);
    if (config.method == Method::kPtgp) {
      PtgpOptions options;
      options.seed = config.seed;
      options.kmeans_restarts = config.kmeans_restarts;
      report.consensus = ptgp(sim_mc(pts, mcs, ensemble), mcs, config.k, options);
    } else {
      report.consensus = pta(pts, mcs, config.k, linkage_of(config.method), config.cl_semantics);
    }
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace trajclust
