#pragma once

// Shared domain types for prominence-based ad auctions with word-length
// summaries, plus the factorized CTR model the auction optimizes against.

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dwls {

/// Raised for any contract violation in the library. The message names the
/// failing condition; callers can match on it in tests.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AdCandidate {
  std::string ad_id;
  std::string url;
  std::string text;      // creative, whitespace separated words
  double bid = 0.0;      // per-click value
  double base_ctr = 0.0; // CTR of the full creative shown alone

  double product() const { return bid * base_ctr; }

  bool operator==(const AdCandidate&) const = default;
};

struct QueryInstance {
  std::string query_id;
  std::string query;
  std::vector<AdCandidate> ads;

  bool operator==(const QueryInstance&) const = default;
};

/// Throws if an ad violates its field invariants or ad ids repeat.
void validate(const QueryInstance& query);
void validate(const AdCandidate& ad);

/// Evaluation and auction parameters. `alpha` is always derived from `beta`;
/// construct through `EvalParams::make` so the two cannot drift apart.
struct EvalParams {
  double beta = 0.5;
  double alpha = 2.0;
  double pos_base = 0.9;
  std::size_t word_limit = 60;
  std::size_t max_slots = 4;

  static EvalParams make(double beta, std::size_t word_limit,
                         double pos_base = 0.9, std::size_t max_slots = 4);

  bool infinite_alpha() const { return alpha == std::numeric_limits<double>::infinity(); }
};

/// alpha = 1/(1-beta), infinite at beta = 1.
double alpha_for_beta(double beta);

/// Per-ad simplex weights, indexed like the query's ad list.
struct ProminenceVector {
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double operator[](std::size_t i) const { return weights[i]; }
  double sum() const;
};

/// Position-normalized expected value per ad; zero for ads not shown.
struct EcpmVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

struct AuctionOutcome {
  std::vector<std::size_t> ordering;  // ad indices, slot 1 first
  ProminenceVector prominence;
  std::vector<std::size_t> word_budgets;
  // Absent for mechanisms that do not price (the welfare baselines).
  std::optional<std::vector<double>> payments;
  std::vector<double> internal_pctr;

  /// 1-based slot of ad `i`, or 0 when it is not in the ordering.
  std::size_t slot_of(std::size_t i) const;
};

struct SummaryEntry {
  std::string ad_id;
  std::string summary;
  std::size_t rank = 0;  // 1-based display rank

  bool operator==(const SummaryEntry&) const = default;
};

struct SummaryBundle {
  std::vector<SummaryEntry> entries;
};

/// Internal final pCTR of one shown ad:
///   base_ctr * pos_base^(slot_rank-1) * prom^beta,  with 0^beta = 0.
double internal_final_pctr(double base_ctr, std::size_t slot_rank, double prom,
                           const EvalParams& params);

}  // namespace dwls
