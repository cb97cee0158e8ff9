#pragma once

// Word and token splitting shared by the summarizers and the ROUGE scorer.

#include <string>
#include <string_view>
#include <vector>

namespace dwls::text {

/// Maximal runs of non-whitespace characters. This is the unit word budgets
/// are counted in.
std::vector<std::string_view> words(std::string_view s);

std::size_t word_count(std::string_view s);

/// The first `n` words joined by single spaces.
std::string first_words(std::string_view s, std::size_t n);

/// ROUGE tokens: maximal ASCII alphanumeric runs, lowercased. Punctuation
/// and other bytes separate tokens.
std::vector<std::string> rouge_tokens(std::string_view s);

}  // namespace dwls::text
