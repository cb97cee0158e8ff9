#include "dwls/properties.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "dwls/corpus.hpp"
#include "dwls/parallel.hpp"

namespace dwls {
namespace {

struct Utility {
  double value;
  double pctr;
  double payment;
};

Utility utility_at(const Mechanism& mechanism, const QueryInstance& query,
                   std::size_t bidder, double reported_bid) {
  QueryInstance probe = query;
  probe.ads[bidder].bid = reported_bid;
  const auto out = mechanism.run(probe);
  if (!out.payments) throw Error("mechanism does not compute payments");
  const double q = out.internal_pctr.at(bidder);
  const double p = out.payments->at(bidder);
  return {q * query.ads[bidder].bid - p, q, p};
}

// Stable across platforms, unlike std::hash.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <typename PerQuery>
std::vector<ViolationReport> collect(std::span<const QueryInstance> sample,
                                     std::size_t threads, PerQuery&& per_query) {
  std::vector<std::vector<ViolationReport>> slots(sample.size());
  parallel_for(sample.size(), threads, [&](std::size_t q) { slots[q] = per_query(sample[q]); });
  std::vector<ViolationReport> all;
  for (auto& s : slots) {
    std::stable_sort(s.begin(), s.end(), [](const auto& a, const auto& b) {
      return std::tie(a.bidder, a.deviation) < std::tie(b.bidder, b.deviation);
    });
    all.insert(all.end(), s.begin(), s.end());
  }
  return all;
}

}  // namespace

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::ic: return "ic";
    case ViolationKind::monotonicity: return "monotonicity";
    case ViolationKind::scale_free: return "scale_free";
  }
  return "unknown";
}

std::vector<double> ic_deviations(const QueryInstance& query, std::size_t bidder,
                                  std::size_t count, std::uint64_t rng_seed) {
  const auto& ads = query.ads;
  const double b = ads.at(bidder).bid;
  const double c = ads[bidder].base_ctr;
  std::vector<double> out;
  if (c > 0.0) {
    for (std::size_t j = 0; j < ads.size(); ++j) {
      if (j == bidder) continue;
      const double threshold = ads[j].product() / c;
      if (threshold > 0.0) {
        out.push_back(threshold * (1.0 - 1e-6));
        out.push_back(threshold * (1.0 + 1e-6));
      }
    }
  }
  for (int k = 1; k <= 16; ++k) {
    if (k != 4) out.push_back(b * 0.25 * k);
  }
  Rng rng(rng_seed);
  while (out.size() < count) {
    out.push_back(b * std::exp(rng.uniform(std::log(0.25), std::log(4.0))));
  }
  out.resize(count);
  return out;
}

std::vector<ViolationReport> check_ic(const Mechanism& mechanism,
                                      std::span<const QueryInstance> sample,
                                      std::size_t deviations_per_bidder, double tol,
                                      std::uint64_t seed, std::size_t threads) {
  return collect(sample, threads, [&](const QueryInstance& query) {
    std::vector<ViolationReport> found;
    for (std::size_t i = 0; i < query.ads.size(); ++i) {
      const double truthful = utility_at(mechanism, query, i, query.ads[i].bid).value;
      const auto devs = ic_deviations(query, i, deviations_per_bidder,
                                      query_seed(seed ^ fnv1a(query.query_id), i));
      for (double dev : devs) {
        const double deviating = utility_at(mechanism, query, i, dev).value;
        if (truthful < deviating - tol) {
          found.push_back({ViolationKind::ic, query.query_id, i, truthful, deviating,
                           deviating - truthful, dev});
        }
      }
    }
    return found;
  });
}

std::vector<ViolationReport> check_monotone(const Mechanism& mechanism,
                                            std::span<const QueryInstance> sample,
                                            std::span<const double> multipliers,
                                            std::size_t threads) {
  std::vector<double> grid(multipliers.begin(), multipliers.end());
  std::sort(grid.begin(), grid.end());
  return collect(sample, threads, [&](const QueryInstance& query) {
    std::vector<ViolationReport> found;
    for (std::size_t i = 0; i < query.ads.size(); ++i) {
      double previous = -1.0;
      for (double m : grid) {
        QueryInstance probe = query;
        probe.ads[i].bid = query.ads[i].bid * m;
        const double prom = mechanism.run(probe).prominence[i];
        if (prom < previous - kMonotoneTolerance) {
          found.push_back({ViolationKind::monotonicity, query.query_id, i, previous, prom,
                           previous - prom, probe.ads[i].bid});
        }
        previous = prom;
      }
    }
    return found;
  });
}

std::vector<ViolationReport> check_scale_free(const Mechanism& mechanism,
                                              std::span<const QueryInstance> sample,
                                              std::span<const double> scales,
                                              std::size_t threads) {
  return collect(sample, threads, [&](const QueryInstance& query) {
    std::vector<ViolationReport> found;
    const auto base = mechanism.run(query);
    for (double c : scales) {
      if (!(c > 0.0)) throw Error("scale factors must be positive");
      QueryInstance scaled = query;
      for (auto& ad : scaled.ads) ad.bid *= c;
      const auto out = mechanism.run(scaled);
      if (out.ordering != base.ordering) {
        // Report the first slot whose occupant changed.
        std::size_t s = 0;
        while (s < base.ordering.size() && s < out.ordering.size() &&
               base.ordering[s] == out.ordering[s]) {
          ++s;
        }
        const std::size_t bidder = s < base.ordering.size() ? base.ordering[s] : 0;
        found.push_back({ViolationKind::scale_free, query.query_id, bidder,
                         static_cast<double>(base.slot_of(bidder)),
                         static_cast<double>(out.slot_of(bidder)), 1.0, c});
        continue;
      }
      for (std::size_t i = 0; i < query.ads.size(); ++i) {
        const double gap = std::abs(out.prominence[i] - base.prominence[i]);
        if (gap > kScaleTolerance) {
          found.push_back({ViolationKind::scale_free, query.query_id, i, base.prominence[i],
                           out.prominence[i], gap, c});
        }
      }
    }
    return found;
  });
}

std::vector<QueryInstance> sample_queries(std::span<const QueryInstance> corpus,
                                          std::size_t count, std::uint64_t seed) {
  if (count >= corpus.size()) return {corpus.begin(), corpus.end()};
  std::vector<std::size_t> idx(corpus.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(splitmix64(seed));
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(idx[i], idx[rng.uniform_int(i, idx.size() - 1)]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  std::vector<QueryInstance> out;
  out.reserve(count);
  for (std::size_t i : idx) out.push_back(corpus[i]);
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points == 0) return {};
  if (points == 1) return {lo};
  std::vector<double> g(points);
  for (std::size_t k = 0; k < points; ++k) {
    g[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  return g;
}

std::string to_jsonl(std::span<const ViolationReport> reports) {
  std::string out;
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(r.kind);
    j["query_id"] = r.query_id;
    j["bidder"] = r.bidder;
    j["baseline_value"] = r.baseline_value;
    j["deviating_value"] = r.deviating_value;
    j["gap"] = r.gap;
    j["deviation"] = r.deviation;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace dwls
