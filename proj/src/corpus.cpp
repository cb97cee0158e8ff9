#include "dwls/corpus.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "dwls/text.hpp"

namespace dwls {
namespace {

struct Topic {
  std::string_view key;    // single lowercase token
  std::string_view query;  // user query text
  std::string_view noun;   // inserted into fragments
};

constexpr std::array<Topic, 24> kTopics{{
    {"golf", "learning golf", "golf lessons"},
    {"espresso", "best espresso machine", "espresso machines"},
    {"running", "running shoes for flat feet", "running shoes"},
    {"spanish", "learn spanish online", "Spanish courses"},
    {"hotel", "cheap hotels in lisbon", "hotel rooms"},
    {"laptop", "laptop for video editing", "laptops"},
    {"yoga", "yoga classes near me", "yoga classes"},
    {"mattress", "memory foam mattress", "mattresses"},
    {"guitar", "beginner acoustic guitar", "guitars"},
    {"insurance", "car insurance quotes", "insurance plans"},
    {"bike", "electric bike commuting", "electric bikes"},
    {"camera", "mirrorless camera deals", "cameras"},
    {"plumber", "emergency plumber", "plumbing repairs"},
    {"tax", "file taxes online", "tax software"},
    {"dog", "dog training tips", "dog training"},
    {"garden", "raised garden beds", "garden kits"},
    {"tent", "family camping tent", "tents"},
    {"piano", "piano lessons for adults", "piano lessons"},
    {"skincare", "skincare for dry skin", "skincare products"},
    {"moving", "long distance movers", "moving services"},
    {"headphones", "noise cancelling headphones", "headphones"},
    {"coffee", "coffee subscription", "coffee beans"},
    {"solar", "home solar panels", "solar panels"},
    {"cruise", "caribbean cruise deals", "cruises"},
}};

constexpr std::array<std::string_view, 40> kFragments{{
    "Discover {noun} built for real results.",
    "Trusted by thousands of happy customers nationwide.",
    "Free shipping on every order this week.",
    "Compare {noun} side by side before committing.",
    "Our experts answer questions around the clock.",
    "Enjoy a risk free thirty day trial.",
    "Save up to forty percent during spring clearance.",
    "Certified professionals guide each step patiently.",
    "Flexible monthly payments with zero hidden fees.",
    "Rated five stars across independent review sites.",
    "Get personalized recommendations matched to your goals.",
    "Book online in minutes from any device.",
    "Premium quality meets surprisingly affordable pricing.",
    "Join our loyalty program and earn rewards.",
    "Local teams deliver fast friendly service.",
    "Sustainably sourced materials protect our planet.",
    "Award winning design loved by critics.",
    "Upgrade today and feel the difference immediately.",
    "Beginners welcome, no experience required.",
    "Exclusive bundles available only through us.",
    "Satisfaction guaranteed or your money back.",
    "Browse hundreds of {noun} in stock now.",
    "Family owned since nineteen eighty two.",
    "Limited spots remain for this season.",
    "Tailored plans adapt as your needs change.",
    "Secure checkout keeps your information private.",
    "See why reviewers call our {noun} unbeatable.",
    "Weekend appointments make scheduling easy.",
    "Lightweight, durable, and ready for adventure.",
    "Instant quotes without lengthy phone calls.",
    "Members unlock early access to new arrivals.",
    "Helpful video tutorials accompany every purchase.",
    "Price match promise on identical items.",
    "Gift cards make thoughtful presents for anyone.",
    "Hassle free returns within sixty days.",
    "Modern technology simplifies complicated chores.",
    "Visit our showroom for hands on demos.",
    "Eco conscious packaging reduces household waste.",
    "Start small, scale up whenever ready.",
    "Pick up {noun} curbside at convenient locations.",
}};

std::string fill(std::string_view fragment, std::string_view noun) {
  std::string out(fragment);
  const auto pos = out.find("{noun}");
  if (pos != std::string::npos) out.replace(pos, 6, noun);
  return out;
}

std::string templated_creative(Rng& rng, const Topic& topic, std::size_t length) {
  std::array<std::size_t, kFragments.size()> order{};
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  // Fisher-Yates with the corpus generator.
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[rng.uniform_int(0, i)]);
  }
  std::string body;
  std::size_t next = 0;
  while (text::word_count(body) < length) {
    if (!body.empty()) body += ' ';
    body += fill(kFragments[order[next % order.size()]], topic.noun);
    ++next;
  }
  return text::first_words(body, length);
}

std::string distinct_creative(const Topic& topic, std::size_t ad_index, std::size_t length) {
  std::string body;
  for (std::size_t w = 0; w < length; ++w) {
    if (w) body += ' ';
    body += std::string(topic.key) + "x" + std::to_string(ad_index + 1) + "w" +
            std::to_string(w + 1);
  }
  return body;
}

std::string pad(std::size_t value, int width) {
  auto s = std::to_string(value);
  if (static_cast<int>(s.size()) < width) s.insert(0, width - s.size(), '0');
  return s;
}

template <typename T>
T field(const nlohmann::json& obj, const char* name, std::size_t line) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw Error("line " + std::to_string(line) + ": missing field '" + name + "'");
  }
  try {
    return obj.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error("line " + std::to_string(line) + ": field '" + name + "' has wrong type");
  }
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t query_seed(std::uint64_t master, std::uint64_t query_index) {
  return splitmix64(master + (query_index + 1) * 0x9E3779B97F4A7C15ULL);
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

std::uint64_t Rng::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  if (hi < lo) throw Error("empty integer range");
  const std::uint64_t span = hi - lo;
  if (span == ~std::uint64_t{0}) return next_u64();
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range);
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return lo + x % range;
}

double Rng::normal() {
  const double u1 = 1.0 - uniform01();  // (0,1]
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }

void CorpusSpec::validate() const {
  if (ads_min == 0 || ads_min > ads_max) throw Error("ads_per_query range is empty");
  if (words_min == 0 || words_min > words_max) throw Error("creative_words range is empty");
  if (!(bid_sigma > 0.0)) throw Error("bid sigma must be positive");
  if (!(ctr_lo >= 0.0 && ctr_lo <= ctr_hi && ctr_hi <= 1.0)) {
    throw Error("ctr range must lie within [0,1]");
  }
}

Corpus generate(const CorpusSpec& spec) {
  spec.validate();
  Corpus corpus;
  corpus.reserve(spec.n_queries);
  for (std::size_t q = 0; q < spec.n_queries; ++q) {
    Rng rng(query_seed(spec.seed, q));
    const Topic& topic = kTopics[rng.uniform_int(0, kTopics.size() - 1)];
    const auto n_ads = rng.uniform_int(spec.ads_min, spec.ads_max);
    QueryInstance query;
    query.query_id = "q" + pad(q, 4);
    query.query = std::string(topic.query);
    for (std::size_t a = 0; a < n_ads; ++a) {
      AdCandidate ad;
      ad.ad_id = query.query_id + "-a" + std::to_string(a + 1);
      ad.url = "https://ads.example.com/" + std::string(topic.key) + "/" + ad.ad_id;
      ad.bid = rng.lognormal(spec.bid_mu, spec.bid_sigma);
      ad.base_ctr = rng.uniform(spec.ctr_lo, spec.ctr_hi);
      const auto length = rng.uniform_int(spec.words_min, spec.words_max);
      ad.text = spec.distinct_tokens ? distinct_creative(topic, a, length)
                                     : templated_creative(rng, topic, length);
      query.ads.push_back(std::move(ad));
    }
    corpus.push_back(std::move(query));
  }
  return corpus;
}

std::string to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& q : corpus) {
    nlohmann::ordered_json line;
    line["query_id"] = q.query_id;
    line["query"] = q.query;
    line["ads"] = nlohmann::ordered_json::array();
    for (const auto& ad : q.ads) {
      nlohmann::ordered_json a;
      a["ad_id"] = ad.ad_id;
      a["url"] = ad.url;
      a["text"] = ad.text;
      a["bid"] = ad.bid;
      a["base_ctr"] = ad.base_ctr;
      line["ads"].push_back(std::move(a));
    }
    out += line.dump();
    out += '\n';
  }
  return out;
}

Corpus from_jsonl(std::istream& in) {
  Corpus corpus;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error("line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
    }
    QueryInstance q;
    q.query_id = field<std::string>(obj, "query_id", line_no);
    q.query = field<std::string>(obj, "query", line_no);
    const auto ads = field<nlohmann::json>(obj, "ads", line_no);
    if (!ads.is_array()) throw Error("line " + std::to_string(line_no) + ": 'ads' must be an array");
    for (const auto& a : ads) {
      AdCandidate ad;
      ad.ad_id = field<std::string>(a, "ad_id", line_no);
      ad.url = field<std::string>(a, "url", line_no);
      ad.text = field<std::string>(a, "text", line_no);
      ad.bid = field<double>(a, "bid", line_no);
      ad.base_ctr = field<double>(a, "base_ctr", line_no);
      q.ads.push_back(std::move(ad));
    }
    try {
      validate(q);
    } catch (const Error& e) {
      throw Error("line " + std::to_string(line_no) + ": " + e.what());
    }
    corpus.push_back(std::move(q));
  }
  return corpus;
}

void save(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << to_jsonl(corpus);
  if (!out) throw Error("write failed: " + path);
}

Corpus load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  return from_jsonl(in);
}

}  // namespace dwls
