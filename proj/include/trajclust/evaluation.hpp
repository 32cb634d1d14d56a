#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trajclust/consensus.hpp"
#include "trajclust/ensemble.hpp"
#include "trajclust/sparse_graph.hpp"

namespace trajclust {

// Mutual information over the geometric mean of the two entropies. Two
// partitions with zero entropy score 0.
double nmi(std::span<const std::int64_t> a, std::span<const std::int64_t> b);
double nmi(std::span<const Label> a, std::span<const Label> b);

// Evidence accumulation: agglomerative clustering straight on the MCA matrix.
ConsensusResult eac_baseline(const Ensemble& ensemble, std::size_t k, Linkage linkage,
                             CompleteLinkSemantics cl_semantics = CompleteLinkSemantics::kSum);

struct AuditBucket {
  std::size_t shared;           // weight = shared / M
  double weight;
  std::uint64_t links;          // object pairs with this co-association weight
  std::uint64_t correct;        // ... that also share a ground-truth class
  double link_fraction;         // links / all nonzero links
  double correct_rate;          // correct / links, 0 for empty buckets
};

// Reliability of co-association links by weight, counted over object pairs:
// a microcluster link (i, j) stands for n_i * n_j object links, and pairs
// inside one microcluster are weight-1 links.
std::vector<AuditBucket> link_audit(const SparseSimGraph& msg, const MicroclusterSet& microclusters,
                                    std::span<const Label> truth);

std::string format_audit_csv(const std::vector<AuditBucket>& buckets);

}  // namespace trajclust
