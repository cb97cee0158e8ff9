#pragma once

// End-to-end mechanisms behind one interface: the GPA word-length auction
// and two welfare baselines (greedy full-creative packing and equal-length
// position auction).

#include <memory>
#include <string_view>

#include "dwls/evaluate.hpp"
#include "dwls/model.hpp"
#include "dwls/pricing.hpp"
#include "dwls/summarize.hpp"

namespace dwls {

enum class MechanismKind { gpa_dwls, greedy, pos_fixed_length };

MechanismKind parse_mechanism_kind(std::string_view name);
std::string_view to_string(MechanismKind kind);

struct MechanismSpec {
  MechanismKind kind = MechanismKind::gpa_dwls;
  EvalParams params;
  SummarizerSpec summarizer;
  bool compute_payments = false;
  double payment_tol = kDefaultPaymentTolerance;

  /// Payments are only defined for gpa_dwls.
  void validate() const;
};

class Mechanism {
 public:
  virtual ~Mechanism() = default;
  virtual std::string_view name() const = 0;
  virtual AuctionOutcome run(const QueryInstance& query) const = 0;
  virtual const EvalParams& params() const = 0;
};

/// Ordering by bid*base_ctr, GPA prominence, rounded word budgets, and
/// Myerson payments when requested.
AuctionOutcome run_gpa(const QueryInstance& query, const MechanismSpec& spec);

/// Full creatives only, first-fit in bid*base_ctr order: an ad that does not
/// fit in the remaining words is skipped and later ads are still tried.
AuctionOutcome run_greedy(const QueryInstance& query, const MechanismSpec& spec);

/// Top min(n,k) ads each get floor(L/m) words; leftover words go one each to
/// the highest-ranked ads.
AuctionOutcome run_pos_fixed(const QueryInstance& query, const MechanismSpec& spec);

std::unique_ptr<Mechanism> make_mechanism(const MechanismSpec& spec);

struct Simulation {
  AuctionOutcome outcome;
  SummaryBundle bundle;
  WelfareReport report;
};

/// run -> render -> evaluate for one query.
Simulation simulate(const QueryInstance& query, const Mechanism& mechanism,
                    const Summarizer& summarizer, const EvalParams& eval_params);

/// sum_i bid_i * internal_pctr_i: the welfare the auction's own CTR model
/// predicts for an outcome.
double predicted_welfare(const QueryInstance& query, const AuctionOutcome& outcome);

}  // namespace dwls
