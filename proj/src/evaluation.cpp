#include "trajclust/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "trajclust/error.hpp"

namespace trajclust {

namespace {

double nmi_canonical(const std::vector<Label>& a, const std::vector<Label>& b) {
  const std::size_t n = a.size();
  const auto ka = static_cast<std::size_t>(*std::max_element(a.begin(), a.end()) + 1);
  const auto kb = static_cast<std::size_t>(*std::max_element(b.begin(), b.end()) + 1);
  std::vector<double> pa(ka, 0.0), pb(kb, 0.0);
  std::unordered_map<std::uint64_t, double> joint;
  for (std::size_t i = 0; i < n; ++i) {
    pa[static_cast<std::size_t>(a[i])] += 1.0;
    pb[static_cast<std::size_t>(b[i])] += 1.0;
    joint[static_cast<std::uint64_t>(a[i]) * kb + static_cast<std::uint64_t>(b[i])] += 1.0;
  }
  const double total = static_cast<double>(n);
  auto entropy = [total](const std::vector<double>& counts) {
    double h = 0.0;
    for (double c : counts)
      if (c > 0.0) h -= (c / total) * std::log(c / total);
    return h;
  };
  const double ha = entropy(pa);
  const double hb = entropy(pb);
  if (ha <= 0.0 || hb <= 0.0) return 0.0;
  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    const double ca = pa[key / kb];
    const double cb = pb[key % kb];
    mi += (c / total) * std::log(c * total / (ca * cb));
  }
  return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
}

}  // namespace

double nmi(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  require(a.size() == b.size(), ErrorCode::kInvalidInput,
          "labelings differ in length (" + std::to_string(a.size()) + " vs " +
              std::to_string(b.size()) + ")");
  require(!a.empty(), ErrorCode::kInvalidInput, "empty labeling");
  return nmi_canonical(canonicalize(a), canonicalize(b));
}

double nmi(std::span<const Label> a, std::span<const Label> b) {
  require(a.size() == b.size(), ErrorCode::kInvalidInput,
          "labelings differ in length (" + std::to_string(a.size()) + " vs " +
              std::to_string(b.size()) + ")");
  require(!a.empty(), ErrorCode::kInvalidInput, "empty labeling");
  return nmi_canonical(canonicalize(a), canonicalize(b));
}

ConsensusResult eac_baseline(const Ensemble& ensemble, std::size_t k, Linkage linkage,
                             CompleteLinkSemantics cl_semantics) {
  const MicroclusterSet mcs = build_microclusters(ensemble);
  const CoAssocMatrix mca = compute_mca(ensemble, mcs);
  ConsensusResult result = pta(mca.to_similarity(), mcs, k, linkage, cl_semantics);
  result.method = std::string("EAC-") + to_string(linkage);
  return result;
}

std::vector<AuditBucket> link_audit(const SparseSimGraph& msg, const MicroclusterSet& microclusters,
                                    std::span<const Label> truth) {
  require(!truth.empty(), ErrorCode::kInvalidInput, "link audit needs ground-truth labels");
  require(truth.size() == microclusters.n_objects(), ErrorCode::kInvalidInput,
          "ground truth has " + std::to_string(truth.size()) + " labels for " +
              std::to_string(microclusters.n_objects()) + " objects");
  require(msg.n_nodes() == microclusters.size(), ErrorCode::kInvalidInput,
          "graph does not match the microcluster set");
  const std::size_t m = microclusters.n_clusterings();

  // Class histogram per microcluster.
  std::vector<std::vector<std::pair<Label, std::uint64_t>>> hist(microclusters.size());
  for (std::size_t c = 0; c < microclusters.size(); ++c) {
    std::unordered_map<Label, std::uint64_t> counts;
    for (std::size_t obj : microclusters.members(c)) ++counts[truth[obj]];
    hist[c].assign(counts.begin(), counts.end());
    std::sort(hist[c].begin(), hist[c].end());
  }
  auto shared_pairs = [&](std::size_t i, std::size_t j) {
    std::uint64_t s = 0;
    auto a = hist[i].begin(), b = hist[j].begin();
    while (a != hist[i].end() && b != hist[j].end()) {
      if (a->first < b->first) {
        ++a;
      } else if (b->first < a->first) {
        ++b;
      } else {
        s += a->second * b->second;
        ++a;
        ++b;
      }
    }
    return s;
  };

  std::vector<AuditBucket> buckets(m);
  for (std::size_t s = 1; s <= m; ++s)
    buckets[s - 1] = {s, static_cast<double>(s) / static_cast<double>(m), 0, 0, 0.0, 0.0};

  for (std::size_t c = 0; c < microclusters.size(); ++c) {
    const std::uint64_t size = microclusters.sizes()[c];
    auto& full = buckets[m - 1];
    full.links += size * (size - 1) / 2;
    for (const auto& [label, count] : hist[c]) full.correct += count * (count - 1) / 2;
  }
  for (const Edge& e : msg.edges()) {
    const auto shared = static_cast<std::size_t>(std::llround(e.weight * static_cast<double>(m)));
    require(shared >= 1 && shared <= m, ErrorCode::kInvalidInput,
            "link weight is not a multiple of 1/M");
    const auto i = static_cast<std::size_t>(e.u), j = static_cast<std::size_t>(e.v);
    auto& bucket = buckets[shared - 1];
    bucket.links += static_cast<std::uint64_t>(microclusters.sizes()[i]) * microclusters.sizes()[j];
    bucket.correct += shared_pairs(i, j);
  }

  std::uint64_t total = 0;
  for (const auto& b : buckets) total += b.links;
  for (auto& b : buckets) {
    b.link_fraction = total ? static_cast<double>(b.links) / static_cast<double>(total) : 0.0;
    b.correct_rate = b.links ? static_cast<double>(b.correct) / static_cast<double>(b.links) : 0.0;
  }
  return buckets;
}

std::string format_audit_csv(const std::vector<AuditBucket>& buckets) {
  std::string out = "weight,links,link_fraction,correct,correct_rate\n";
  char line[160];
  for (const auto& b : buckets) {
    std::snprintf(line, sizeof(line), "%.6f,%llu,%.6f,%llu,%.6f\n", b.weight,
                  static_cast<unsigned long long>(b.links), b.link_fraction,
                  static_cast<unsigned long long>(b.correct), b.correct_rate);
    out += line;
  }
  return out;
}

}  // namespace trajclust
