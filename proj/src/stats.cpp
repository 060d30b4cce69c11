#include "semkit/stats.hpp"

#include "semkit/edits.hpp"
#include "semkit/errors.hpp"
#include "semkit/utf8.hpp"

namespace semkit {
namespace {

double visible_length(const std::string& s) {
  std::u32string cps = utf8::decode(s);
  std::size_t n = 0;
  for (char32_t c : cps)
    if (c != U' ' && c != U'\t') ++n;
  return static_cast<double>(n);
}

std::string strip_spaces(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s)
    if (c != ' ' && c != '\t') out.push_back(c);
  return out;
}

}  // namespace

LabeledStats labeled_stats(
    const std::vector<std::pair<std::string, std::string>>& sentence_label) {
  if (sentence_label.empty()) throw ValidationError("no labeled sentences");
  LabeledStats stats;
  stats.lines = sentence_label.size();
  double length_sum = 0.0;
  std::size_t incorrect = 0;
  for (const auto& [sentence, label] : sentence_label) {
    length_sum += visible_length(sentence);
    if (label == "incorrect") ++incorrect;
    else if (label != "correct")
      throw ValidationError("unknown label '" + label +
                            "' (expected correct/incorrect)");
  }
  stats.avg_length = length_sum / static_cast<double>(stats.lines);
  stats.error_ratio =
      static_cast<double>(incorrect) / static_cast<double>(stats.lines);
  return stats;
}

PairStats pair_stats(
    const std::vector<std::pair<std::string, std::string>>& src_tgt) {
  if (src_tgt.empty()) throw ValidationError("no sentence pairs");
  PairStats stats;
  stats.lines = src_tgt.size();
  double src_sum = 0.0, tgt_sum = 0.0;
  std::vector<TokenPair> token_pairs, char_pairs;
  token_pairs.reserve(src_tgt.size());
  char_pairs.reserve(src_tgt.size());
  for (const auto& [src, tgt] : src_tgt) {
    src_sum += visible_length(src);
    tgt_sum += visible_length(tgt);
    token_pairs.push_back({split_tokens(src), split_tokens(tgt)});
    char_pairs.push_back(
        {char_tokens(strip_spaces(src)), char_tokens(strip_spaces(tgt))});
  }
  stats.avg_length_src = src_sum / static_cast<double>(stats.lines);
  stats.avg_length_tgt = tgt_sum / static_cast<double>(stats.lines);
  stats.avg_edit_tokens = avg_edit_stat(token_pairs);
  stats.avg_edit_chars = avg_edit_stat(char_pairs);
  return stats;
}

}  // namespace semkit
