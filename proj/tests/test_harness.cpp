#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dwls/harness.hpp"
#include "support/builders.hpp"

using namespace dwls;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("dwls_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string write_config(const std::string& name, const std::string& body) {
  const auto p = scratch(name);
  std::ofstream(p) << body;
  return p.string();
}

ExperimentConfig small_config(std::size_t queries) {
  ExperimentConfig cfg;
  cfg.corpus.n_queries = queries;
  cfg.seed = 8;
  cfg.l_values = {20, 60};
  cfg.plots = false;
  return cfg;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config file overrides defaults and keeps the rest") {
  ExperimentConfig base;
  base.threads = 3;
  const auto path = write_config(
      "cfg.json", R"({"n_queries": 12, "seed": 4, "betas": [0.5], "l_values": [30, 90],
                      "mechanisms": ["greedy"], "out_dir": "x", "plots": false})");
  const auto cfg = load_config(path, base);
  CHECK(cfg.corpus.n_queries == 12);
  CHECK(cfg.seed == 4);
  CHECK(cfg.betas == std::vector<double>{0.5});
  CHECK(cfg.l_values == std::vector<std::size_t>{30, 90});
  CHECK(cfg.mechanisms == std::vector<MechanismKind>{MechanismKind::greedy});
  CHECK(cfg.threads == 3);
  CHECK(cfg.out_dir == "x");
  CHECK_FALSE(cfg.plots);
}

TEST_CASE("config errors") {
  CHECK_THROWS_WITH_AS(load_config(write_config("c1.json", R"({"nqueries": 3})")),
                       doctest::Contains("unknown key"), Error);
  CHECK_THROWS_WITH_AS(load_config(write_config("c2.json", R"({"seed": "abc"})")),
                       doctest::Contains("seed"), Error);
  CHECK_THROWS_WITH_AS(load_config(write_config("c3.json", R"({"mechanisms": ["vcg"]})")),
                       doctest::Contains("unknown mechanism"), Error);
  CHECK_THROWS_AS(load_config(write_config("c4.json", "{")), Error);
  CHECK_THROWS_AS(load_config("/nonexistent/dwls.json"), Error);

  auto cfg = small_config(2);
  cfg.betas = {1.5};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = small_config(2);
  cfg.l_values.clear();
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("one query, one ad, everything fits") {
  Corpus corpus{build::query({2.0}, {0.3}, {25})};
  auto cfg = small_config(1);
  cfg.l_values = {40};
  const auto rows = run_experiment(cfg, corpus);
  CHECK(rows.size() == 9);
  for (const auto& r : rows) {
    CHECK(r.mean_welfare == doctest::Approx(0.6));
    CHECK(r.std_err == 0.0);
    CHECK(r.n_queries == 1);
  }
}

TEST_CASE("rows come in L, beta, mechanism order and greedy ignores beta") {
  auto cfg = small_config(40);
  const auto corpus = experiment_corpus(cfg);
  const auto rows = run_experiment(cfg, corpus);
  REQUIRE(rows.size() == 2 * 3 * 3);
  CHECK(rows[0].l == 20);
  CHECK(rows[0].beta == 0.5);
  CHECK(rows[0].mechanism == MechanismKind::gpa_dwls);
  CHECK(rows[1].mechanism == MechanismKind::greedy);
  CHECK(rows[3].beta == doctest::Approx(1.0 / 3.0));
  CHECK(rows[9].l == 60);
  for (std::size_t base = 0; base < rows.size(); base += 9) {
    CHECK(rows[base + 1].mean_welfare == rows[base + 4].mean_welfare);
    CHECK(rows[base + 1].mean_welfare == rows[base + 7].mean_welfare);
  }
}

TEST_CASE("results do not depend on the worker count") {
  auto cfg = small_config(60);
  const auto corpus = experiment_corpus(cfg);
  const auto one = results_csv(run_experiment(cfg, corpus));
  cfg.threads = 4;
  CHECK(results_csv(run_experiment(cfg, corpus)) == one);
}

TEST_CASE("run writes csv and plots") {
  auto cfg = small_config(10);
  cfg.plots = true;
  cfg.betas = {0.5};
  cfg.out_dir = scratch("out").string();
  run_experiment(cfg);
  std::ifstream csv(fs::path(cfg.out_dir) / "results.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "l,beta,mechanism,mean_welfare,std_err,n_queries");
  std::ifstream svg(fs::path(cfg.out_dir) / "welfare_beta_0.5000.svg");
  std::stringstream ss;
  ss << svg.rdbuf();
  CHECK(ss.str().find("<polyline") != std::string::npos);
  CHECK(ss.str().find("pos_fixed_length") != std::string::npos);

  const auto blocker = scratch("blocker");
  std::ofstream(blocker) << "x";
  cfg.out_dir = (blocker / "sub").string();
  CHECK_THROWS_AS(run_experiment(cfg), Error);
}

TEST_CASE("payment table") {
  ExperimentConfig cfg;
  Corpus singles{build::query({2.0}, {0.3}), build::query({0.7}, {0.9})};
  singles[1].query_id = "t1";
  for (const auto& row : report_payments(cfg, singles, 60, 0.5)) CHECK(row.payment == 0.0);

  auto gen = small_config(30);
  const auto corpus = experiment_corpus(gen);
  const auto rows = report_payments(cfg, corpus, 60, 0.5);
  Corpus doubled = corpus;
  for (auto& q : doubled) {
    for (auto& ad : q.ads) ad.bid *= 2.0;
  }
  const auto rows2 = report_payments(cfg, doubled, 60, 0.5);
  REQUIRE(rows.size() == rows2.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].payment >= 0.0);
    CHECK(rows[i].payment <= rows[i].bid * rows[i].internal_pctr + 1e-12);
    CHECK(rows2[i].prominence == doctest::Approx(rows[i].prominence).epsilon(1e-12));
    CHECK(rows2[i].budget == rows[i].budget);
    CHECK(rows2[i].payment == doctest::Approx(2.0 * rows[i].payment).epsilon(1e-6));
  }
  const auto csv = payments_csv(rows);
  CHECK(csv.rfind("query_id,ad_id,bid,prominence,budget,payment,internal_pctr\n", 0) == 0);
}

TEST_CASE("number helpers") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(parse_real("0.25") == 0.25);
  CHECK(parse_real("1/3") == 1.0 / 3.0);
  CHECK_THROWS_AS(parse_real("1/0"), Error);
  CHECK_THROWS_AS(parse_real("half"), Error);
  CHECK_THROWS_AS(parse_real("0.5x"), Error);
  std::vector<double> v(1001, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100.1));
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

}
