// dwls command-line tool: gen | run | pay | check.
//
// Settings are layered: built-in defaults, then --config (flat JSON), then
// individual flags.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dwls/harness.hpp"
#include "dwls/properties.hpp"

namespace {

struct Flags {
  std::string config;
  std::uint64_t seed = 0;
  std::vector<std::size_t> l_values;
  std::vector<std::string> betas;
  std::vector<std::string> mechanisms;
  std::string out;
  std::string summarizer;
  std::string endpoint;
  std::size_t threads = 1;
  std::string corpus;
  std::size_t queries = 0;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "flat JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--queries", f.queries, "number of queries")->check(CLI::PositiveNumber);
}

void add_grid(CLI::App* cmd, Flags& f) {
  cmd->add_option("--l", f.l_values, "total word limit(s)");
  cmd->add_option("--beta", f.betas, "compression exponent(s), e.g. 0.5 or 1/3");
  cmd->add_option("--corpus", f.corpus, "corpus JSONL to load instead of generating");
}

dwls::ExperimentConfig resolve(const CLI::App* cmd, const Flags& f) {
  dwls::ExperimentConfig cfg;
  if (!f.config.empty()) cfg = dwls::load_config(f.config, cfg);
  const auto given = [&](const char* name) {
    const auto* opt = cmd->get_option_no_throw(name);
    return opt && opt->count() > 0;
  };
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--out")) cfg.out_dir = f.out;
  if (given("--threads")) cfg.threads = f.threads;
  if (given("--queries")) cfg.corpus.n_queries = f.queries;
  if (given("--l")) cfg.l_values = f.l_values;
  if (given("--beta")) {
    cfg.betas.clear();
    for (const auto& b : f.betas) cfg.betas.push_back(dwls::parse_real(b));
  }
  if (given("--mechanism")) {
    cfg.mechanisms.clear();
    for (const auto& m : f.mechanisms) cfg.mechanisms.push_back(dwls::parse_mechanism_kind(m));
  }
  if (given("--summarizer")) cfg.summarizer.kind = dwls::parse_summarizer_kind(f.summarizer);
  if (given("--endpoint")) cfg.summarizer.endpoint = f.endpoint;
  if (given("--corpus")) cfg.corpus_path = f.corpus;
  return cfg;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dwls::Error("cannot write " + path.string());
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic word-length sponsored search auctions"};
  app.require_subcommand(1);

  Flags f;

  auto* gen = app.add_subcommand("gen", "generate a synthetic corpus (writes <out>/corpus.jsonl)");
  add_common(gen, f);

  auto* run = app.add_subcommand("run", "welfare experiment over an L x beta grid");
  add_common(run, f);
  add_grid(run, f);
  run->add_option("--mechanism", f.mechanisms, "gpa_dwls | greedy | pos_fixed_length");
  run->add_option("--summarizer", f.summarizer, "truncation | frequency_greedy | external_llm");
  run->add_option("--endpoint", f.endpoint, "external summarizer URL");

  auto* pay = app.add_subcommand("pay", "GPA payments per ad (first --l and --beta)");
  add_common(pay, f);
  add_grid(pay, f);

  std::size_t deviations = 20;
  double tol = 1e-5;
  std::size_t sample = 200;
  auto* check = app.add_subcommand("check", "IC, monotonicity and scale-freeness checks");
  add_common(check, f);
  add_grid(check, f);
  check->add_option("--sample", sample, "queries to check")->check(CLI::PositiveNumber);
  check->add_option("--deviations", deviations, "deviations per bidder");
  check->add_option("--tol", tol, "IC tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto cfg = resolve(gen, f);
      cfg.corpus.validate();
      const auto corpus = dwls::experiment_corpus(cfg);
      const auto path = std::filesystem::path(cfg.out_dir) / "corpus.jsonl";
      write_text(path, dwls::to_jsonl(corpus));
      std::cout << "wrote " << corpus.size() << " queries to " << path.string() << "\n";
      return 0;
    }

    if (run->parsed()) {
      const auto cfg = resolve(run, f);
      const auto rows = dwls::run_experiment(cfg);
      std::cout << dwls::results_csv(rows);
      return 0;
    }

    if (pay->parsed()) {
      auto cfg = resolve(pay, f);
      cfg.validate();
      const auto corpus = dwls::experiment_corpus(cfg);
      const auto rows =
          dwls::report_payments(cfg, corpus, cfg.l_values.front(), cfg.betas.front());
      const auto path = std::filesystem::path(cfg.out_dir) / "payments.csv";
      write_text(path, dwls::payments_csv(rows));
      std::cout << "wrote " << rows.size() << " rows to " << path.string() << "\n";
      return 0;
    }

    if (check->parsed()) {
      auto cfg = resolve(check, f);
      cfg.validate();
      const auto corpus = dwls::experiment_corpus(cfg);
      const auto chosen = dwls::sample_queries(corpus, sample, cfg.seed);
      std::vector<dwls::ViolationReport> all;
      for (std::size_t l : cfg.l_values) {
        for (double beta : cfg.betas) {
          dwls::MechanismSpec spec;
          spec.params = dwls::EvalParams::make(beta, l, cfg.pos_base, cfg.max_slots);
          spec.compute_payments = true;
          spec.payment_tol = cfg.payment_tol;
          const auto mech = dwls::make_mechanism(spec);
          const auto grid = dwls::linear_grid(0.1, 5.0, 25);
          const std::vector<double> scales{0.5, 2.0, 10.0};
          for (auto part : {dwls::check_ic(*mech, chosen, deviations, tol, cfg.seed, cfg.threads),
                            dwls::check_monotone(*mech, chosen, grid, cfg.threads),
                            dwls::check_scale_free(*mech, chosen, scales, cfg.threads)}) {
            all.insert(all.end(), part.begin(), part.end());
          }
          std::cout << "L=" << l << " beta=" << dwls::format_double(beta) << " checked\n";
        }
      }
      const auto path = std::filesystem::path(cfg.out_dir) / "violations.jsonl";
      write_text(path, dwls::to_jsonl(all));
      std::cout << all.size() << " violation(s); details in " << path.string() << "\n";
      return all.empty() ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
