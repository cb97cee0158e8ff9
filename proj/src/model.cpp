#include "dwls/model.hpp"

#include <cmath>
#include <numeric>
#include <set>

namespace dwls {

void validate(const AdCandidate& ad) {
  if (!(ad.bid >= 0.0) || !std::isfinite(ad.bid)) {
    throw Error("ad " + ad.ad_id + ": bid must be finite and nonnegative");
  }
  if (!(ad.base_ctr >= 0.0 && ad.base_ctr <= 1.0)) {
    throw Error("ad " + ad.ad_id + ": base_ctr must lie in [0,1]");
  }
  if (ad.text.find_first_not_of(" \t\r\n\v\f") == std::string::npos) {
    throw Error("ad " + ad.ad_id + ": empty creative text");
  }
}

void validate(const QueryInstance& query) {
  std::set<std::string> seen;
  for (const auto& ad : query.ads) {
    validate(ad);
    if (!seen.insert(ad.ad_id).second) {
      throw Error("query " + query.query_id + ": duplicate ad_id " + ad.ad_id);
    }
  }
}

double alpha_for_beta(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw Error("beta must lie in (0,1]");
  if (beta == 1.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (1.0 - beta);
}

EvalParams EvalParams::make(double beta, std::size_t word_limit, double pos_base,
                            std::size_t max_slots) {
  if (!(pos_base > 0.0 && pos_base <= 1.0)) throw Error("pos_base must lie in (0,1]");
  if (max_slots == 0) throw Error("max_slots must be positive");
  EvalParams p;
  p.beta = beta;
  p.alpha = alpha_for_beta(beta);
  p.pos_base = pos_base;
  p.word_limit = word_limit;
  p.max_slots = max_slots;
  return p;
}

double ProminenceVector::sum() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

std::size_t AuctionOutcome::slot_of(std::size_t i) const {
  for (std::size_t s = 0; s < ordering.size(); ++s) {
    if (ordering[s] == i) return s + 1;
  }
  return 0;
}

double internal_final_pctr(double base_ctr, std::size_t slot_rank, double prom,
                           const EvalParams& params) {
  if (slot_rank == 0) throw Error("slot_rank must be >= 1");
  if (prom <= 0.0) return 0.0;
  const double pos = std::pow(params.pos_base, static_cast<double>(slot_rank - 1));
  return base_ctr * pos * std::pow(prom, params.beta);
}

}  // namespace dwls
