#pragma once

// Brute-force reference implementations and deliberately broken mechanisms
// used by the unit and acceptance tests. Nothing here reuses the library's
// allocation or pricing code paths.

#include <cstdint>
#include <vector>

#include "dwls/corpus.hpp"
#include "dwls/mechanisms.hpp"

namespace oracle {

/// q_i(y): rank, discount and allocate from scratch with bidder i at bid y.
double pctr_at(std::size_t bidder, double y, const std::vector<dwls::AdCandidate>& ads,
               const dwls::EvalParams& params);

struct TrapezoidPayment {
  double payment = 0.0;
  // Rigorous bound on the discretization error: the integrand is monotone,
  // so |trapezoid - integral| <= h * (q(b) - q(0)) / 2.
  double error_bound = 0.0;
};

/// b*q(b) minus the trapezoid rule over `points` equally spaced bids in [0,b].
TrapezoidPayment payment(std::size_t bidder, const std::vector<dwls::AdCandidate>& ads,
                         const dwls::EvalParams& params, std::size_t points = 100000);

/// Smallest lattice resolution m with C(m+n-1, n-1) >= points.
std::size_t simplex_resolution(std::size_t n, std::size_t points);

/// max over the lattice {x : x_i = k_i/m, sum k_i = m} of sum ecpm_i x_i^beta.
double simplex_best(const std::vector<double>& ecpm, double beta, std::size_t resolution);

/// Random instance of 1..max_ads ads with lognormal bids and uniform CTRs.
dwls::QueryInstance random_query(dwls::Rng& rng, std::size_t max_ads, std::size_t words = 40);

/// GPA allocation with a pay-your-bid rule p_i = b_i * q_i.
class FirstPriceGpa final : public dwls::Mechanism {
 public:
  explicit FirstPriceGpa(dwls::EvalParams p) : params_(p) {}
  std::string_view name() const override { return "first_price_gpa"; }
  dwls::AuctionOutcome run(const dwls::QueryInstance& query) const override;
  const dwls::EvalParams& params() const override { return params_; }

 private:
  dwls::EvalParams params_;
};

/// GPA run on reciprocal bids: prominence falls as the own bid rises.
class InvertedGpa final : public dwls::Mechanism {
 public:
  explicit InvertedGpa(dwls::EvalParams p) : params_(p) {}
  std::string_view name() const override { return "inverted_gpa"; }
  dwls::AuctionOutcome run(const dwls::QueryInstance& query) const override;
  const dwls::EvalParams& params() const override { return params_; }

 private:
  dwls::EvalParams params_;
};

/// Equal prominence for everyone in input order, zero payments.
class ConstantMechanism final : public dwls::Mechanism {
 public:
  explicit ConstantMechanism(dwls::EvalParams p) : params_(p) {}
  std::string_view name() const override { return "constant"; }
  dwls::AuctionOutcome run(const dwls::QueryInstance& query) const override;
  const dwls::EvalParams& params() const override { return params_; }

 private:
  dwls::EvalParams params_;
};

/// GPA on bid + 1: monotone, but not invariant to a common bid scale.
class ShiftedGpa final : public dwls::Mechanism {
 public:
  explicit ShiftedGpa(dwls::EvalParams p) : params_(p) {}
  std::string_view name() const override { return "shifted_gpa"; }
  dwls::AuctionOutcome run(const dwls::QueryInstance& query) const override;
  const dwls::EvalParams& params() const override { return params_; }

 private:
  dwls::EvalParams params_;
};

}  // namespace oracle
