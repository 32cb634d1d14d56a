#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "trajclust/consensus.hpp"
#include "trajclust/ensemble.hpp"
#include "trajclust/sparse_graph.hpp"

namespace trajclust {

enum class Method { kPtaAl, kPtaCl, kPtaSl, kPtgp, kEacAl, kEacCl, kEacSl };

const char* to_string(Method method);
std::optional<Method> parse_method(const std::string& name);

// Sentinels for the elite-neighbor count and walk length.
inline constexpr std::size_t kParamAuto = 0;
inline constexpr std::size_t kParamAll = std::numeric_limits<std::size_t>::max();

struct RunConfig {
  Method method = Method::kPtaAl;
  std::size_t k = 2;
  std::size_t elite_neighbors = kParamAuto;  // kParamAll keeps every MSG link
  std::size_t steps = kParamAuto;
  std::uint64_t seed = 20160101;
  CompleteLinkSemantics cl_semantics = CompleteLinkSemantics::kSum;
  std::size_t kmeans_restarts = 10;
  std::string cache_dir;  // empty disables the PTS cache
};

struct RunReport {
  MicroclusterSet microclusters;
  std::size_t msg_links = 0;
  std::size_t keng_links = 0;
  std::optional<double> ratio_pl;  // nullopt when the MSG has no links
  std::size_t elite_neighbors = 0;  // resolved; n-1 for "all"
  bool elite_all = false;
  std::size_t steps = 0;
  bool pts_from_cache = false;
  ConsensusResult consensus;
  double seconds = 0.0;
};

// Microclusters, MSG, K-ENG, PTS and the chosen consensus function.
RunReport run_pipeline(const Ensemble& ensemble, const RunConfig& config);

// Cache file for a PTS matrix, inside `dir`.
std::string pts_cache_path(const std::string& dir, const Ensemble& ensemble, std::size_t elite_neighbors,
                           std::size_t steps);

}  // namespace trajclust
