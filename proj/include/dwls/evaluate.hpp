#pragma once

// Evaluation-side CTR model. A rendered summary earns
//   base_ctr * ROUGE-1 recall(summary, creative)^beta * pos_base^(rank-1)
// clicks per impression, and welfare is the bid-weighted sum over shown ads.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dwls/model.hpp"

namespace dwls {

/// Clipped unigram recall of `summary` against `original` using
/// text::rouge_tokens. Throws "empty reference" when `original` has no
/// tokens.
double rouge_recall(std::string_view summary, std::string_view original);

/// Evaluated CTR of an ad rendered at display rank `rank` (1-based).
double eval_ctr(const AdCandidate& ad, std::string_view summary, std::size_t rank,
                const EvalParams& params);

struct AdWelfare {
  std::string ad_id;
  double rouge = 0.0;
  double eval_ctr = 0.0;
  double value_contribution = 0.0;
};

struct WelfareReport {
  std::string query_id;
  std::vector<AdWelfare> per_ad;  // query order; unshown ads contribute 0
  double total_welfare = 0.0;
};

/// Throws when the bundle names an ad the query does not contain.
WelfareReport welfare(const QueryInstance& query, const SummaryBundle& bundle,
                      const EvalParams& params);

}  // namespace dwls
