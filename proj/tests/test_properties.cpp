#include <doctest.h>

#include <algorithm>

#include "dwls/properties.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace dwls;

namespace {

std::vector<QueryInstance> small_sample(std::size_t n, std::uint64_t seed) {
  CorpusSpec spec;
  spec.n_queries = n;
  spec.seed = seed;
  return generate(spec);
}

MechanismSpec gpa_spec(double beta, bool pay = true) {
  MechanismSpec s;
  s.params = EvalParams::make(beta, 60);
  s.compute_payments = pay;
  return s;
}

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("deviation sets") {
  const auto q = build::query({5.0, 1.0, 4.0}, {0.3, 0.9, 0.2});
  const auto devs = ic_deviations(q, 0, 20, 1);
  REQUIRE(devs.size() == 20);
  CHECK(devs[0] == doctest::Approx(3.0 * (1 - 1e-6)));
  CHECK(devs[1] == doctest::Approx(3.0 * (1 + 1e-6)));
  CHECK(devs[2] == doctest::Approx(8.0 / 3.0 * (1 - 1e-6)));
  CHECK(std::find(devs.begin(), devs.end(), 5.0) == devs.end());
  CHECK(devs == ic_deviations(q, 0, 20, 1));
  CHECK(ic_deviations(q, 0, 3, 1).size() == 3);
  const auto many = ic_deviations(q, 0, 40, 9);
  for (double d : many) {
    CHECK(d > 0.0);
    CHECK(d <= 4.0 * 5.0 * (1 + 1e-12));
  }
}

TEST_CASE("GPA passes the IC check") {
  const auto sample = small_sample(25, 3);
  for (double beta : {0.25, 0.5}) {
    const auto mech = make_mechanism(gpa_spec(beta));
    CHECK(check_ic(*mech, sample, 20, 1e-5).empty());
  }
}

TEST_CASE("single-bidder queries never violate IC") {
  std::vector<QueryInstance> sample{build::query({1.3}, {0.4}), build::query({0.2}, {0.9})};
  sample[1].query_id = "t1";
  const auto mech = make_mechanism(gpa_spec(0.5));
  CHECK(check_ic(*mech, sample, 30, 1e-9).empty());
}

TEST_CASE("first-price fixture is caught") {
  const auto sample = small_sample(10, 4);
  const oracle::FirstPriceGpa fp(EvalParams::make(0.5, 60));
  const auto found = check_ic(fp, sample, 20, 1e-5);
  REQUIRE_FALSE(found.empty());
  for (const auto& v : found) {
    CHECK(v.kind == ViolationKind::ic);
    CHECK(v.gap > 1e-5);
    CHECK(v.gap == doctest::Approx(v.deviating_value - v.baseline_value));
  }
  // Determinism across worker counts.
  CHECK(check_ic(fp, sample, 20, 1e-5, 0, 3) == found);
}

TEST_CASE("IC check needs payments") {
  const auto mech = make_mechanism(gpa_spec(0.5, false));
  CHECK_THROWS_AS(check_ic(*mech, small_sample(2, 1), 5, 1e-5), Error);
}

TEST_CASE("monotonicity") {
  const auto sample = small_sample(20, 5);
  const auto grid = linear_grid(0.1, 5.0, 25);
  for (double beta : {0.25, 1.0 / 3.0, 0.5, 1.0}) {
    const auto mech = make_mechanism(gpa_spec(beta, false));
    CHECK(check_monotone(*mech, sample, grid).empty());
  }
  const auto params = EvalParams::make(0.5, 60);
  CHECK(check_monotone(oracle::ConstantMechanism(params), sample, grid).empty());
  const auto inverted = check_monotone(oracle::InvertedGpa(params), sample, grid);
  REQUIRE_FALSE(inverted.empty());
  CHECK(inverted.front().kind == ViolationKind::monotonicity);
  CHECK(inverted.front().baseline_value > inverted.front().deviating_value);
}

TEST_CASE("scale-freeness") {
  const auto sample = small_sample(20, 6);
  const std::vector<double> scales{0.5, 2.0, 10.0};
  for (double beta : {0.25, 0.5}) {
    const auto mech = make_mechanism(gpa_spec(beta));
    CHECK(check_scale_free(*mech, sample, scales).empty());
  }
  MechanismSpec greedy;
  greedy.kind = MechanismKind::greedy;
  greedy.params = EvalParams::make(0.5, 60);
  CHECK(check_scale_free(*make_mechanism(greedy), sample, scales).empty());

  const auto shifted = check_scale_free(oracle::ShiftedGpa(EvalParams::make(0.5, 60)), sample,
                                        scales);
  CHECK_FALSE(shifted.empty());
  CHECK_THROWS_AS(check_scale_free(*make_mechanism(gpa_spec(0.5)), sample,
                                   std::vector<double>{0.0}),
                  Error);
}

TEST_CASE("sampling and grids") {
  const auto corpus = small_sample(30, 7);
  const auto s = sample_queries(corpus, 10, 1);
  REQUIRE(s.size() == 10);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i - 1].query_id < s[i].query_id);
  CHECK(sample_queries(corpus, 10, 1) == s);
  CHECK(sample_queries(corpus, 100, 1).size() == 30);

  const auto g = linear_grid(1.0, 2.0, 5);
  CHECK(g == std::vector<double>{1.0, 1.25, 1.5, 1.75, 2.0});
  CHECK(linear_grid(1.0, 2.0, 0).empty());
}

TEST_CASE("reports serialize one per line") {
  std::vector<ViolationReport> r{{ViolationKind::ic, "q0001", 2, 0.5, 0.75, 0.25, 3.0}};
  CHECK(to_jsonl(r) ==
        "{\"kind\":\"ic\",\"query_id\":\"q0001\",\"bidder\":2,\"baseline_value\":0.5,"
        "\"deviating_value\":0.75,\"gap\":0.25,\"deviation\":3.0}\n");
}

}
