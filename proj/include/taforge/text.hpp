#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace taforge::text {

// CRLF/CR -> LF.
std::string normalize_newlines(std::string_view s);

// Collapse runs of 3+ newlines down to 2 (at most one blank line).
std::string collapse_blank_lines(std::string_view s);

// Whitespace-delimited words.
std::vector<std::string_view> split_words(std::string_view s);
std::size_t count_words(std::string_view s);

// Collapse all whitespace runs to single spaces and trim; used for quote matching.
std::string normalize_ws(std::string_view s);

std::string to_lower(std::string_view s);

// Lowercase alphanumeric tokens with punctuation stripped; stopwords removed.
std::vector<std::string> content_tokens(std::string_view s, const std::set<std::string>& stopwords);

// Split into units whose concatenation is byte-identical to the input.
// Paragraph units end at a blank-line separator (which they carry); sentence
// units end after [.!?]+ and any following whitespace.
std::vector<std::string> split_paragraph_units(std::string_view s);
std::vector<std::string> split_sentence_units(std::string_view s);

// Word-level longest-common-subsequence ratio: LCS(words(a), words(b)) / |words(a)|.
// 0 when a has no words.
double lcs_word_ratio(std::string_view a, std::string_view b);

}  // namespace taforge::text
