#include "dwls/mechanisms.hpp"

#include "dwls/allocation.hpp"
#include "dwls/text.hpp"

namespace dwls {
namespace {

double share(std::size_t words, std::size_t limit) {
  return limit == 0 ? 0.0 : static_cast<double>(words) / static_cast<double>(limit);
}

// Baselines report prominence as budget/L and model CTR with it.
void fill_from_budgets(const QueryInstance& query, const EvalParams& params,
                       AuctionOutcome& out) {
  const std::size_t n = query.ads.size();
  out.prominence.weights.assign(n, 0.0);
  out.internal_pctr.assign(n, 0.0);
  for (std::size_t s = 0; s < out.ordering.size(); ++s) {
    const std::size_t i = out.ordering[s];
    out.prominence.weights[i] = share(out.word_budgets[i], params.word_limit);
    out.internal_pctr[i] =
        internal_final_pctr(query.ads[i].base_ctr, s + 1, out.prominence[i], params);
  }
}

class SpecMechanism final : public Mechanism {
 public:
  explicit SpecMechanism(MechanismSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

  std::string_view name() const override { return to_string(spec_.kind); }
  const EvalParams& params() const override { return spec_.params; }

  AuctionOutcome run(const QueryInstance& query) const override {
    switch (spec_.kind) {
      case MechanismKind::gpa_dwls: return run_gpa(query, spec_);
      case MechanismKind::greedy: return run_greedy(query, spec_);
      case MechanismKind::pos_fixed_length: return run_pos_fixed(query, spec_);
    }
    throw Error("unknown mechanism kind");
  }

 private:
  MechanismSpec spec_;
};

}  // namespace

MechanismKind parse_mechanism_kind(std::string_view name) {
  if (name == "gpa_dwls") return MechanismKind::gpa_dwls;
  if (name == "greedy") return MechanismKind::greedy;
  if (name == "pos_fixed_length") return MechanismKind::pos_fixed_length;
  throw Error("unknown mechanism: " + std::string(name));
}

std::string_view to_string(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::gpa_dwls: return "gpa_dwls";
    case MechanismKind::greedy: return "greedy";
    case MechanismKind::pos_fixed_length: return "pos_fixed_length";
  }
  return "unknown";
}

void MechanismSpec::validate() const {
  if (compute_payments && kind != MechanismKind::gpa_dwls) {
    throw Error("payments are only defined for gpa_dwls");
  }
  if (compute_payments && !(payment_tol > 0.0)) throw Error("payment_tol must be positive");
}

AuctionOutcome run_gpa(const QueryInstance& query, const MechanismSpec& spec) {
  const auto& params = spec.params;
  const auto alloc = allocate_gpa(query.ads, params);
  AuctionOutcome out;
  out.ordering = alloc.ordering;
  out.prominence = alloc.prominence;
  out.word_budgets = words_from_prominence(out.prominence, params.word_limit);
  out.internal_pctr.assign(query.ads.size(), 0.0);
  for (std::size_t s = 0; s < out.ordering.size(); ++s) {
    const std::size_t i = out.ordering[s];
    out.internal_pctr[i] =
        internal_final_pctr(query.ads[i].base_ctr, s + 1, out.prominence[i], params);
  }
  if (spec.compute_payments) {
    out.payments = myerson_payments(query.ads, params, spec.payment_tol);
  }
  return out;
}

AuctionOutcome run_greedy(const QueryInstance& query, const MechanismSpec& spec) {
  const auto& params = spec.params;
  const auto ranked = rank_ads(query.ads, query.ads.size());
  AuctionOutcome out;
  out.word_budgets.assign(query.ads.size(), 0);
  std::size_t remaining = params.word_limit;
  for (std::size_t i : ranked) {
    if (out.ordering.size() == params.max_slots) break;
    const std::size_t len = text::word_count(query.ads[i].text);
    if (len == 0 || len > remaining) continue;
    out.ordering.push_back(i);
    out.word_budgets[i] = len;
    remaining -= len;
  }
  fill_from_budgets(query, params, out);
  return out;
}

AuctionOutcome run_pos_fixed(const QueryInstance& query, const MechanismSpec& spec) {
  const auto& params = spec.params;
  AuctionOutcome out;
  out.ordering = rank_ads(query.ads, params.max_slots);
  out.word_budgets.assign(query.ads.size(), 0);
  const std::size_t m = out.ordering.size();
  const std::size_t each = params.word_limit / m;
  const std::size_t leftover = params.word_limit - each * m;
  for (std::size_t s = 0; s < m; ++s) {
    out.word_budgets[out.ordering[s]] = each + (s < leftover ? 1 : 0);
  }
  fill_from_budgets(query, params, out);
  return out;
}

std::unique_ptr<Mechanism> make_mechanism(const MechanismSpec& spec) {
  return std::make_unique<SpecMechanism>(spec);
}

Simulation simulate(const QueryInstance& query, const Mechanism& mechanism,
                    const Summarizer& summarizer, const EvalParams& eval_params) {
  Simulation sim;
  sim.outcome = mechanism.run(query);
  sim.bundle = render_bundle(query.ads, sim.outcome, summarizer);
  sim.report = welfare(query, sim.bundle, eval_params);
  return sim;
}

double predicted_welfare(const QueryInstance& query, const AuctionOutcome& outcome) {
  double w = 0.0;
  for (std::size_t i = 0; i < query.ads.size(); ++i) {
    w += query.ads[i].bid * outcome.internal_pctr.at(i);
  }
  return w;
}

}  // namespace dwls
