#pragma once

// Welfare-maximizing allocation for dynamic word-length summaries: sort ads
// by bid x base CTR, discount by position, then split the word budget with
// the generalized proportional rule Prom_i ∝ ecpm_i^alpha.

#include <cstddef>
#include <span>
#include <vector>

#include "dwls/model.hpp"

namespace dwls {

/// Indices of the top min(n, k) ads by bid*base_ctr, descending. Ties go to
/// the lower input index.
std::vector<std::size_t> rank_ads(std::span<const AdCandidate> ads, std::size_t k);

/// ecpm_i = bid_i * base_ctr_i * pos_base^(slot-1) for shown ads, else 0.
EcpmVector compute_ecpm(std::span<const AdCandidate> ads,
                        std::span<const std::size_t> ordering,
                        const EvalParams& params);

/// Generalized proportional allocation. For infinite alpha all weight goes to
/// the max-ecpm ad(s), split equally among exact ties.
ProminenceVector gpa_allocate(const EcpmVector& ecpm, double alpha);

/// The alpha-norm of ecpm with alpha = 1/(1-beta); the best achievable
/// sum_i ecpm_i * Prom_i^beta over the simplex. beta must lie in (0,1).
double optimal_welfare(const EcpmVector& ecpm, double beta);

/// sum_i ecpm_i * Prom_i^beta for an arbitrary prominence vector.
double internal_welfare(const EcpmVector& ecpm, const ProminenceVector& prom,
                        double beta);

/// Integer word budgets by largest remainder. The total is
/// round(L * sum(prom)); leftover words go to the largest fractional parts
/// (ties to the lower index), except that an ad whose exact share is below
/// one word never receives a leftover word while some ad with a share of at
/// least one word exists.
std::vector<std::size_t> words_from_prominence(const ProminenceVector& prom,
                                               std::size_t word_limit);

struct GpaAllocation {
  std::vector<std::size_t> ordering;
  EcpmVector ecpm;
  ProminenceVector prominence;
};

/// rank -> ecpm -> GPA in one call. Throws "degenerate instance" when every
/// shown ad has zero bid*base_ctr.
GpaAllocation allocate_gpa(std::span<const AdCandidate> ads, const EvalParams& params);

}  // namespace dwls
