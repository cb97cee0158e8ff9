#pragma once

// Seeded synthetic corpora of queries with 2-4 ads each, and their JSONL
// persistence.
//
// Reproducibility contract: query q draws from its own generator, seeded with
// query_seed(master, q) = splitmix64(master + (q + 1) * 0x9E3779B97F4A7C15).
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard; every distribution transform below is written out here instead
// of using <random>'s implementation-defined distributions.
//
// Per query the draws happen in this order: topic index, ad count, then for
// each ad: bid, base CTR, creative length, creative words.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "dwls/model.hpp"

namespace dwls {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t query_seed(std::uint64_t master, std::uint64_t query_index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// [0,1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi);
  /// Inclusive range, unbiased (rejection sampling).
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
  /// Box-Muller; consumes two uniforms per call.
  double normal();
  /// exp(mu + sigma * N(0,1)): mu and sigma parameterize the underlying normal.
  double lognormal(double mu, double sigma);

 private:
  std::mt19937_64 engine_;
};

struct CorpusSpec {
  std::size_t n_queries = 1000;
  std::uint64_t seed = 0;
  std::size_t ads_min = 2;
  std::size_t ads_max = 4;
  double bid_mu = 0.5;
  double bid_sigma = 1.0;
  double ctr_lo = 0.0;
  double ctr_hi = 1.0;
  std::size_t words_min = 30;
  std::size_t words_max = 60;
  // Creatives made of pairwise-distinct tokens, so that a k-word prefix has
  // ROUGE-1 recall exactly k/n. Used for calibration corpora.
  bool distinct_tokens = false;

  void validate() const;
};

using Corpus = std::vector<QueryInstance>;

Corpus generate(const CorpusSpec& spec);

/// One query per line:
/// {"query_id","query","ads":[{"ad_id","url","text","bid","base_ctr"}]}
std::string to_jsonl(const Corpus& corpus);
Corpus from_jsonl(std::istream& in);

void save(const Corpus& corpus, const std::string& path);
Corpus load(const std::string& path);

}  // namespace dwls
