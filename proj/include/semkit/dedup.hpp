#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace semkit {

// Unit-cost edit distance over code points.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein(std::string_view a_utf8, std::string_view b_utf8);

// Edit distance charging substitutions cost 2 (insert/delete cost 1).
std::size_t levenshtein_sub2(std::u32string_view a, std::u32string_view b);

// (|a| + |b| - sub2 distance) / (|a| + |b|); two empty strings give 1.0.
double lev_ratio(std::u32string_view a, std::u32string_view b);
double lev_ratio(std::string_view a_utf8, std::string_view b_utf8);

struct SimilarityHit {
  std::size_t train_line = 0;  // 1-based
  std::string eval_split;
  std::size_t eval_line = 0;  // 1-based
  double ratio = 0.0;
};

struct DedupConfig {
  double gamma = 0.70;      // removal threshold; removed iff ratio > gamma
  bool word_level = false;  // compare whitespace-split words, not characters
  int jobs = 1;
};

struct NamedCorpus {
  std::string name;
  std::vector<std::string> sentences;
};

struct FilterResult {
  std::vector<std::string> kept;      // input order
  std::vector<SimilarityHit> removed;  // one maximizing hit per removed line
};

// Drops every train sentence whose maximum ratio against any eval sentence
// strictly exceeds gamma. Refuses empty eval sets.
FilterResult filter_leakage(const std::vector<std::string>& train,
                            const std::vector<NamedCorpus>& eval_sets,
                            const DedupConfig& config);

}  // namespace semkit
