#pragma once

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace relp {

// Ordered lowercase tokens of one text.
using TokenSequence = std::vector<std::string>;

// Sparse n-gram counts keyed by space-joined token windows.
using FeatureVector = std::map<std::string, int>;

namespace detail {

inline bool ascii_punct(char c) {
  auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) != 0;
}

inline bool ascii_space(char c) {
  auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::isspace(u) != 0;
}

}  // namespace detail

// Lowercases, drops URL tokens, splits on whitespace, and trims leading and
// trailing ASCII punctuation from each token; a leading '#' or '@' survives
// the trim. Bytes outside ASCII pass through untouched.
inline TokenSequence tokenize(std::string_view text) {
  std::string lower(text);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  TokenSequence out;
  std::size_t i = 0;
  const std::size_t n = lower.size();
  while (i < n) {
    while (i < n && detail::ascii_space(lower[i])) ++i;
    std::size_t j = i;
    while (j < n && !detail::ascii_space(lower[j])) ++j;
    if (j > i) {
      std::string_view tok = std::string_view(lower).substr(i, j - i);
      if (!tok.starts_with("http://") && !tok.starts_with("https://")) {
        std::size_t b = 0;
        std::size_t e = tok.size();
        while (e > b && detail::ascii_punct(tok[e - 1])) --e;
        while (b < e && detail::ascii_punct(tok[b]) && tok[b] != '#' && tok[b] != '@') ++b;
        if (e > b) out.emplace_back(tok.substr(b, e - b));
      }
    }
    i = j;
  }
  return out;
}

// Counts every contiguous n-gram with n_min <= n <= n_max.
inline FeatureVector extract_ngrams(const TokenSequence& tokens, int n_min = 1, int n_max = 3) {
  if (n_min < 1 || n_min > n_max) throw std::invalid_argument("require 1 <= n_min <= n_max");
  FeatureVector counts;
  const int len = static_cast<int>(tokens.size());
  for (int n = n_min; n <= n_max && n <= len; ++n) {
    for (int start = 0; start + n <= len; ++start) {
      std::string key = tokens[static_cast<std::size_t>(start)];
      for (int k = 1; k < n; ++k) {
        key += ' ';
        key += tokens[static_cast<std::size_t>(start + k)];
      }
      ++counts[key];
    }
  }
  return counts;
}

// The one feature path shared by every training and prediction route.
inline FeatureVector extract_features(const std::string& text) {
  return extract_ngrams(tokenize(text));
}

}  // namespace relp
