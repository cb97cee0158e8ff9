#pragma once

// Batch experiments: run mechanisms over a corpus for a grid of word limits
// and compression exponents, aggregate welfare, and emit CSV/SVG artifacts.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dwls/corpus.hpp"
#include "dwls/mechanisms.hpp"

namespace dwls {

struct ExperimentConfig {
  CorpusSpec corpus;
  std::optional<std::string> corpus_path;  // load instead of generating
  std::vector<std::size_t> l_values{20, 40, 60, 80, 100, 120, 160};
  std::vector<double> betas{1.0 / 2.0, 1.0 / 3.0, 1.0 / 4.0};
  std::vector<MechanismKind> mechanisms{MechanismKind::gpa_dwls, MechanismKind::greedy,
                                        MechanismKind::pos_fixed_length};
  SummarizerSpec summarizer;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  double pos_base = 0.9;
  std::size_t max_slots = 4;
  std::size_t threads = 1;
  bool plots = true;
  double payment_tol = kDefaultPaymentTolerance;

  void validate() const;
};

/// Reads a flat JSON object whose keys mirror ExperimentConfig (corpus
/// fields are top-level: n_queries, ads_min, ...). Keys absent from the file
/// keep the values already in `base`; unknown keys are an error.
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// The corpus an experiment runs on: loaded from corpus_path, or generated
/// from `corpus` with its seed replaced by `seed`.
Corpus experiment_corpus(const ExperimentConfig& config);

struct ResultRow {
  std::size_t l = 0;
  double beta = 0.0;
  MechanismKind mechanism = MechanismKind::gpa_dwls;
  double mean_welfare = 0.0;
  double std_err = 0.0;
  std::size_t n_queries = 0;
};

/// One row per (L, beta, mechanism), in that nesting order. Baseline
/// allocations and summaries are built once per L and scored per beta.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, const Corpus& corpus);

/// Loads or generates the corpus, runs, and writes results.csv (plus one
/// welfare_beta_<beta>.svg per beta when plots are on) under out_dir.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

struct PaymentRow {
  std::string query_id;
  std::string ad_id;
  double bid = 0.0;
  double prominence = 0.0;
  std::size_t budget = 0;
  double payment = 0.0;
  double internal_pctr = 0.0;
};

/// GPA payments for every ad of every query at one (L, beta). Throws if any
/// row breaks 0 <= payment <= bid * internal_pctr.
std::vector<PaymentRow> report_payments(const ExperimentConfig& config, const Corpus& corpus,
                                        std::size_t word_limit, double beta);

inline constexpr const char* kResultsHeader = "l,beta,mechanism,mean_welfare,std_err,n_queries";
inline constexpr const char* kPaymentsHeader =
    "query_id,ad_id,bid,prominence,budget,payment,internal_pctr";

std::string results_csv(std::span<const ResultRow> rows);
std::string payments_csv(std::span<const PaymentRow> rows);

/// Standalone SVG line chart of mean welfare against L for one beta.
std::string welfare_plot_svg(std::span<const ResultRow> rows, double beta);

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// Pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> values);

/// Accepts decimals or fractions such as "1/3".
double parse_real(const std::string& s);

}  // namespace dwls
