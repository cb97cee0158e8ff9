#include "dwls/summarize.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <httplib.h>
#include <json.hpp>

#include "dwls/text.hpp"
#include "prompt_template.hpp"

namespace dwls {

SummarizerKind parse_summarizer_kind(std::string_view name) {
  if (name == "truncation") return SummarizerKind::truncation;
  if (name == "frequency_greedy") return SummarizerKind::frequency_greedy;
  if (name == "external_llm") return SummarizerKind::external_llm;
  throw Error("unknown summarizer: " + std::string(name));
}

std::string_view to_string(SummarizerKind kind) {
  switch (kind) {
    case SummarizerKind::truncation: return "truncation";
    case SummarizerKind::frequency_greedy: return "frequency_greedy";
    case SummarizerKind::external_llm: return "external_llm";
  }
  return "unknown";
}

void SummarizerSpec::validate() const {
  const bool external = kind == SummarizerKind::external_llm;
  if (external && !endpoint) throw Error("external_llm summarizer requires an endpoint");
  if (!external && endpoint) throw Error("endpoint is only valid for external_llm");
  if (timeout_ms <= 0) throw Error("timeout_ms must be positive");
}

std::string Summarizer::summarize(std::string_view creative, std::size_t budget,
                                  std::string_view ad_id) const {
  if (budget == 0) return {};
  if (text::word_count(creative) <= budget) return std::string(creative);
  auto out = compress(creative, budget, ad_id);
  if (text::word_count(out) > budget) out = text::first_words(out, budget);
  return out;
}

std::string TruncationSummarizer::compress(std::string_view creative, std::size_t budget,
                                           std::string_view) const {
  return text::first_words(creative, budget);
}

std::string FrequencyGreedySummarizer::compress(std::string_view creative,
                                                std::size_t budget,
                                                std::string_view) const {
  const auto ws = text::words(creative);
  std::vector<std::string> keys(ws.size());
  std::map<std::string, std::size_t> freq;
  std::map<std::string, std::size_t> first;
  std::vector<std::size_t> occurrence(ws.size());
  for (std::size_t p = 0; p < ws.size(); ++p) {
    for (auto& tok : text::rouge_tokens(ws[p])) keys[p] += tok;
    occurrence[p] = freq[keys[p]]++;
    first.try_emplace(keys[p], p);
  }
  std::vector<std::size_t> order(ws.size());
  for (std::size_t p = 0; p < ws.size(); ++p) order[p] = p;
  // Words without any alphanumeric content add nothing to recall: last.
  const auto priority = [&](std::size_t p) {
    return std::make_tuple(keys[p].empty(), occurrence[p], ~freq[keys[p]], first[keys[p]], p);
  };
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return priority(a) < priority(b); });
  order.resize(budget);
  std::sort(order.begin(), order.end());

  std::string out;
  for (std::size_t p : order) {
    if (!out.empty()) out += ' ';
    out += ws[p];
  }
  return out;
}

std::string_view default_prompt_template() { return detail::kPromptTemplate; }

ExternalLlmSummarizer::ExternalLlmSummarizer(const SummarizerSpec& spec)
    : timeout_ms_(spec.timeout_ms), fallback_(spec.fallback_to_truncation) {
  spec.validate();
  if (spec.kind != SummarizerKind::external_llm) throw Error("spec is not external_llm");
  const std::string& url = *spec.endpoint;
  const auto scheme = url.find("://");
  if (scheme == std::string::npos || url.substr(0, scheme) != "http") {
    throw Error("endpoint must be an http:// URL: " + url);
  }
  const auto slash = url.find('/', scheme + 3);
  base_url_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url.substr(slash);

  if (spec.prompt_template_path) {
    std::ifstream in(*spec.prompt_template_path);
    if (!in) throw Error("cannot read prompt template " + *spec.prompt_template_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    template_ = ss.str();
  } else {
    template_ = std::string(default_prompt_template());
  }
}

std::string ExternalLlmSummarizer::render_prompt(std::string_view creative,
                                                 std::size_t budget) const {
  std::string out = template_;
  const auto replace_all = [&out](std::string_view key, const std::string& value) {
    for (auto pos = out.find(key); pos != std::string::npos;
         pos = out.find(key, pos + value.size())) {
      out.replace(pos, key.size(), value);
    }
  };
  replace_all("{{creative}}", std::string(creative));
  replace_all("{{word_budget}}", std::to_string(budget));
  return out;
}

std::string ExternalLlmSummarizer::compress(std::string_view creative, std::size_t budget,
                                            std::string_view ad_id) const {
  const nlohmann::json request = {{"creative", std::string(creative)},
                                  {"word_budget", budget},
                                  {"prompt", render_prompt(creative, budget)}};
  const std::string body = request.dump();

  httplib::Client client(base_url_);
  const auto seconds = timeout_ms_ / 1000;
  const auto micros = (timeout_ms_ % 1000) * 1000;
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);

  std::string last_error;
  for (int attempt = 0; attempt <= kExternalRetries; ++attempt) {
    auto res = client.Post(path_, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    try {
      const auto reply = nlohmann::json::parse(res->body);
      return reply.at("summary").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      last_error = std::string("bad response: ") + e.what();
    }
  }
  if (fallback_) return text::first_words(creative, budget);
  throw SummarizerError(std::string(ad_id), last_error);
}

std::unique_ptr<Summarizer> make_summarizer(const SummarizerSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case SummarizerKind::truncation: return std::make_unique<TruncationSummarizer>();
    case SummarizerKind::frequency_greedy:
      return std::make_unique<FrequencyGreedySummarizer>();
    case SummarizerKind::external_llm: return std::make_unique<ExternalLlmSummarizer>(spec);
  }
  throw Error("unknown summarizer kind");
}

std::string summarize(std::string_view creative, std::size_t budget,
                      const SummarizerSpec& spec) {
  return make_summarizer(spec)->summarize(creative, budget);
}

SummaryBundle render_bundle(std::span<const AdCandidate> ads, const AuctionOutcome& outcome,
                            const Summarizer& summarizer) {
  SummaryBundle bundle;
  std::size_t rank = 0;
  for (std::size_t i : outcome.ordering) {
    if (i >= ads.size() || i >= outcome.word_budgets.size()) {
      throw Error("outcome ordering index out of range");
    }
    const std::size_t budget = outcome.word_budgets[i];
    if (budget == 0) continue;
    auto summary = summarizer.summarize(ads[i].text, budget, ads[i].ad_id);
    if (text::word_count(summary) == 0) continue;
    bundle.entries.push_back({ads[i].ad_id, std::move(summary), ++rank});
  }
  return bundle;
}

}  // namespace dwls
