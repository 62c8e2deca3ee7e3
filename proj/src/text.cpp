#include "taforge/text.hpp"

#include <algorithm>
#include <cctype>

namespace taforge::text {

std::string normalize_newlines(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

std::string collapse_blank_lines(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  int run = 0;
  for (char c : s) {
    if (c == '\n') {
      if (++run <= 2) out.push_back(c);
    } else {
      run = 0;
      out.push_back(c);
    }
  }
  return out;
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) words.push_back(s.substr(start, i - start));
  }
  return words;
}

std::size_t count_words(std::string_view s) { return split_words(s).size(); }

std::string normalize_ws(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_space = true;  // trims leading whitespace
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!in_space) out.push_back(' ');
      in_space = true;
    } else {
      out.push_back(c);
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string> content_tokens(std::string_view s, const std::set<std::string>& stopwords) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && !stopwords.count(cur)) tokens.push_back(cur);
    cur.clear();
  };
  for (char ch : s) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> split_paragraph_units(std::string_view s) {
  std::vector<std::string> units;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '\n') {
      std::size_t j = i + 1;
      while (j < s.size() && (s[j] == '\n' || s[j] == ' ' || s[j] == '\t')) ++j;
      // A separator is a newline run containing at least one extra newline.
      std::size_t newlines = 1;
      for (std::size_t k = i + 1; k < j; ++k)
        if (s[k] == '\n') ++newlines;
      if (newlines >= 2) {
        units.emplace_back(s.substr(start, j - start));
        start = j;
        i = j;
        continue;
      }
    }
    ++i;
  }
  if (start < s.size()) units.emplace_back(s.substr(start));
  return units;
}

std::vector<std::string> split_sentence_units(std::string_view s) {
  std::vector<std::string> units;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '.' || s[i] == '!' || s[i] == '?') {
      std::size_t j = i + 1;
      while (j < s.size() && (s[j] == '.' || s[j] == '!' || s[j] == '?')) ++j;
      if (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) {
        while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        units.emplace_back(s.substr(start, j - start));
        start = j;
        i = j;
        continue;
      }
      i = j;
      continue;
    }
    ++i;
  }
  if (start < s.size()) units.emplace_back(s.substr(start));
  return units;
}

double lcs_word_ratio(std::string_view a, std::string_view b) {
  auto wa = split_words(a);
  auto wb = split_words(b);
  if (wa.empty()) return 0.0;
  // Rolling two-row LCS; |wa| is typically a short quote.
  std::vector<std::size_t> prev(wb.size() + 1, 0), cur(wb.size() + 1, 0);
  for (std::size_t i = 1; i <= wa.size(); ++i) {
    for (std::size_t j = 1; j <= wb.size(); ++j) {
      if (wa[i - 1] == wb[j - 1])
        cur[j] = prev[j - 1] + 1;
      else
        cur[j] = std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[wb.size()]) / static_cast<double>(wa.size());
}

}  // namespace taforge::text
