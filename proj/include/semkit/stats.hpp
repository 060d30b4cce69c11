#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace semkit {

struct LabeledStats {
  std::size_t lines = 0;
  double avg_length = 0.0;   // mean non-whitespace code points
  double error_ratio = 0.0;  // fraction labeled incorrect
};

// Input: (sentence, label) with label in {correct, incorrect}.
LabeledStats labeled_stats(
    const std::vector<std::pair<std::string, std::string>>& sentence_label);

struct PairStats {
  std::size_t lines = 0;
  double avg_length_src = 0.0;
  double avg_length_tgt = 0.0;
  double avg_edit_tokens = 0.0;  // whitespace-tokenized edits
  double avg_edit_chars = 0.0;   // code-point edits, whitespace stripped
};

PairStats pair_stats(
    const std::vector<std::pair<std::string, std::string>>& src_tgt);

}  // namespace semkit
