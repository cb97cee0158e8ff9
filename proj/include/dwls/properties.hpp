#pragma once

// Black-box property checks against any Mechanism: ex-post incentive
// compatibility under the internal CTR model, monotone prominence in the
// own bid, and invariance of the allocation to a common bid scale.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dwls/mechanisms.hpp"

namespace dwls {

enum class ViolationKind { ic, monotonicity, scale_free };

std::string_view to_string(ViolationKind kind);

struct ViolationReport {
  ViolationKind kind = ViolationKind::ic;
  std::string query_id;
  std::size_t bidder = 0;
  double baseline_value = 0.0;   // truthful utility / lower-bid prominence / unscaled value
  double deviating_value = 0.0;
  double gap = 0.0;              // always > the tolerance of the check
  double deviation = 0.0;        // deviating bid, or the bid scale factor

  bool operator==(const ViolationReport&) const = default;
};

/// Deviating bids tried for one bidder: points just below and above every
/// rank threshold, then the multiplicative grid {0.25, 0.5, ..., 4} (without
/// 1), then log-uniform multipliers in [1/4, 4] drawn from `rng_seed`. The
/// first `count` are returned.
std::vector<double> ic_deviations(const QueryInstance& query, std::size_t bidder,
                                  std::size_t count, std::uint64_t rng_seed);

/// For every query, bidder and deviation b', flags
///   u_i(b) < u_i(b', b_-i) - tol,  u_i(x) = q_i(x) * b_i - p_i(x),
/// with q the mechanism's internal pCTR. The mechanism must price.
std::vector<ViolationReport> check_ic(const Mechanism& mechanism,
                                      std::span<const QueryInstance> sample,
                                      std::size_t deviations_per_bidder, double tol,
                                      std::uint64_t seed = 0, std::size_t threads = 1);

/// Sweeps each bidder's bid over `multipliers` (others fixed) and flags any
/// drop in its prominence larger than 1e-12.
std::vector<ViolationReport> check_monotone(const Mechanism& mechanism,
                                            std::span<const QueryInstance> sample,
                                            std::span<const double> multipliers,
                                            std::size_t threads = 1);

/// Flags ordering changes, or prominence changes above 1e-12, when every bid
/// is multiplied by c. Payments are not compared.
std::vector<ViolationReport> check_scale_free(const Mechanism& mechanism,
                                              std::span<const QueryInstance> sample,
                                              std::span<const double> scales,
                                              std::size_t threads = 1);

/// `count` distinct queries chosen with a seeded shuffle (all when count
/// exceeds the corpus), kept in corpus order.
std::vector<QueryInstance> sample_queries(std::span<const QueryInstance> corpus,
                                          std::size_t count, std::uint64_t seed);

/// Evenly spaced multipliers lo, ..., hi.
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

std::string to_jsonl(std::span<const ViolationReport> reports);

inline constexpr double kMonotoneTolerance = 1e-12;
inline constexpr double kScaleTolerance = 1e-12;

}  // namespace dwls
