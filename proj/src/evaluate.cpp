#include "dwls/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "dwls/text.hpp"

namespace dwls {

double rouge_recall(std::string_view summary, std::string_view original) {
  const auto ref = text::rouge_tokens(original);
  if (ref.empty()) throw Error("empty reference");
  std::unordered_map<std::string, std::size_t> remaining;
  for (const auto& t : ref) ++remaining[t];
  std::size_t hits = 0;
  for (const auto& t : text::rouge_tokens(summary)) {
    auto it = remaining.find(t);
    if (it != remaining.end() && it->second > 0) {
      --it->second;
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(ref.size());
}

double eval_ctr(const AdCandidate& ad, std::string_view summary, std::size_t rank,
                const EvalParams& params) {
  if (rank == 0) throw Error("rank must be >= 1");
  const double r = rouge_recall(summary, ad.text);
  if (r <= 0.0) return 0.0;
  return ad.base_ctr * std::pow(r, params.beta) *
         std::pow(params.pos_base, static_cast<double>(rank - 1));
}

WelfareReport welfare(const QueryInstance& query, const SummaryBundle& bundle,
                      const EvalParams& params) {
  WelfareReport report;
  report.query_id = query.query_id;
  report.per_ad.reserve(query.ads.size());
  for (const auto& ad : query.ads) report.per_ad.push_back({ad.ad_id, 0.0, 0.0, 0.0});

  for (const auto& entry : bundle.entries) {
    const auto it = std::find_if(query.ads.begin(), query.ads.end(),
                                 [&](const AdCandidate& a) { return a.ad_id == entry.ad_id; });
    if (it == query.ads.end()) {
      throw Error("bundle references unknown ad_id " + entry.ad_id);
    }
    auto& row = report.per_ad[static_cast<std::size_t>(it - query.ads.begin())];
    row.rouge = rouge_recall(entry.summary, it->text);
    row.eval_ctr = eval_ctr(*it, entry.summary, entry.rank, params);
    row.value_contribution = row.eval_ctr * it->bid;
  }
  // Summed in query order so the total does not depend on bundle order.
  for (const auto& row : report.per_ad) report.total_welfare += row.value_contribution;
  return report;
}

}  // namespace dwls
