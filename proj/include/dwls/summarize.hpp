#pragma once

// Summarizers turn one creative plus a word budget into a summary of at most
// that many words. Built-ins are deterministic; the external client talks to
// an LLM service over HTTP and truncates whatever comes back to the budget.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "dwls/model.hpp"

namespace dwls {

enum class SummarizerKind { truncation, frequency_greedy, external_llm };

SummarizerKind parse_summarizer_kind(std::string_view name);
std::string_view to_string(SummarizerKind kind);

struct SummarizerSpec {
  SummarizerKind kind = SummarizerKind::truncation;
  std::optional<std::string> endpoint;  // http://host:port/path
  int timeout_ms = 10000;
  std::optional<std::string> prompt_template_path;
  bool fallback_to_truncation = false;

  void validate() const;
};

/// External summarization failed after all retries.
class SummarizerError : public Error {
 public:
  SummarizerError(std::string ad_id, const std::string& what)
      : Error("summarizer failed for ad " + ad_id + ": " + what), ad_id_(std::move(ad_id)) {}
  const std::string& ad_id() const { return ad_id_; }

 private:
  std::string ad_id_;
};

class Summarizer {
 public:
  virtual ~Summarizer() = default;

  /// At most `budget` words; "" for budget 0; the creative verbatim when it
  /// already fits.
  std::string summarize(std::string_view creative, std::size_t budget,
                        std::string_view ad_id = {}) const;

 protected:
  /// Called only with 0 < budget < word_count(creative).
  virtual std::string compress(std::string_view creative, std::size_t budget,
                               std::string_view ad_id) const = 0;
};

/// First `budget` words.
class TruncationSummarizer final : public Summarizer {
 protected:
  std::string compress(std::string_view creative, std::size_t budget,
                       std::string_view ad_id) const override;
};

/// Picks words to maximize unigram recall: one occurrence of each distinct
/// term by descending frequency (ties by first occurrence), then second
/// occurrences in the same order, and so on. Output keeps original order.
class FrequencyGreedySummarizer final : public Summarizer {
 protected:
  std::string compress(std::string_view creative, std::size_t budget,
                       std::string_view ad_id) const override;
};

/// POSTs {"creative","word_budget","prompt"} and expects {"summary"}.
/// Non-200 responses and transport errors are retried 3 times.
class ExternalLlmSummarizer final : public Summarizer {
 public:
  explicit ExternalLlmSummarizer(const SummarizerSpec& spec);

  const std::string& prompt_template() const { return template_; }
  std::string render_prompt(std::string_view creative, std::size_t budget) const;

 protected:
  std::string compress(std::string_view creative, std::size_t budget,
                       std::string_view ad_id) const override;

 private:
  std::string base_url_;
  std::string path_;
  int timeout_ms_;
  bool fallback_;
  std::string template_;
};

inline constexpr int kExternalRetries = 3;

/// The few-shot prompt bundled with the library.
std::string_view default_prompt_template();

std::unique_ptr<Summarizer> make_summarizer(const SummarizerSpec& spec);

std::string summarize(std::string_view creative, std::size_t budget,
                      const SummarizerSpec& spec);

/// Summaries in outcome.ordering order. Zero-budget ads and empty summaries
/// are omitted; ranks run 1..m over what remains.
SummaryBundle render_bundle(std::span<const AdCandidate> ads, const AuctionOutcome& outcome,
                            const Summarizer& summarizer);

}  // namespace dwls
