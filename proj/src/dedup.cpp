#include "semkit/dedup.hpp"

#include <algorithm>
#include <cctype>
#include <thread>
#include <unordered_map>

#include "semkit/errors.hpp"
#include "semkit/utf8.hpp"

namespace semkit {
namespace {

// Two-row DP; `sub_cost` is 1 for plain distance, 2 for the ratio variant.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b,
                          std::size_t sub_cost) {
  if (a.size() < b.size()) std::swap(a, b);  // keep rows short
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : sub_cost);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  return edit_distance(a, b, 1);
}

std::size_t levenshtein(std::string_view a_utf8, std::string_view b_utf8) {
  return levenshtein(utf8::decode(a_utf8), utf8::decode(b_utf8));
}

std::size_t levenshtein_sub2(std::u32string_view a, std::u32string_view b) {
  return edit_distance(a, b, 2);
}

double lev_ratio(std::u32string_view a, std::u32string_view b) {
  std::size_t total = a.size() + b.size();
  if (total == 0) return 1.0;
  return static_cast<double>(total - levenshtein_sub2(a, b)) /
         static_cast<double>(total);
}

double lev_ratio(std::string_view a_utf8, std::string_view b_utf8) {
  return lev_ratio(utf8::decode(a_utf8), utf8::decode(b_utf8));
}

namespace {

// With substitutions at cost 2, the ratio equals 2*LCS/(|a|+|b|), so
// 2*min(|a|,|b|)/(|a|+|b|) caps it. Skipping pairs whose cap cannot beat
// the current best (or gamma) never changes the removal set or the
// reported maximizing hit.
double ratio_upper_bound(std::size_t la, std::size_t lb) {
  std::size_t total = la + lb;
  if (total == 0) return 1.0;
  return 2.0 * static_cast<double>(std::min(la, lb)) /
         static_cast<double>(total);
}

struct EvalEntry {
  std::u32string symbols;
  std::size_t set_index;
  std::size_t line;  // 1-based within its set
};

struct TrainOutcome {
  bool removed = false;
  SimilarityHit hit;
};

}  // namespace

FilterResult filter_leakage(const std::vector<std::string>& train,
                            const std::vector<NamedCorpus>& eval_sets,
                            const DedupConfig& config) {
  if (config.gamma < 0.0 || config.gamma > 1.0)
    throw ValidationError("gamma must lie in [0, 1]");
  if (eval_sets.empty())
    throw ValidationError("no eval sets given; refusing a vacuous filter");
  for (const auto& set : eval_sets) {
    if (set.sentences.empty())
      throw ValidationError("eval set '" + set.name +
                            "' is empty; refusing a vacuous filter");
  }

  // Word-level mode interns whitespace-separated words as symbols so the
  // same DP applies; default is raw code points.
  std::unordered_map<std::string, char32_t> intern;
  auto to_symbols = [&](const std::string& s) -> std::u32string {
    if (!config.word_level) return utf8::decode(s);
    std::u32string out;
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
        ++i;
      std::size_t start = i;
      while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])))
        ++i;
      if (i > start) {
        auto [it, inserted] = intern.emplace(
            s.substr(start, i - start),
            static_cast<char32_t>(intern.size() + 1));
        out.push_back(it->second);
      }
    }
    return out;
  };

  std::vector<EvalEntry> eval_entries;
  for (std::size_t si = 0; si < eval_sets.size(); ++si) {
    const auto& sentences = eval_sets[si].sentences;
    for (std::size_t li = 0; li < sentences.size(); ++li)
      eval_entries.push_back({to_symbols(sentences[li]), si, li + 1});
  }

  std::vector<std::u32string> train_symbols;
  train_symbols.reserve(train.size());
  for (const auto& s : train) train_symbols.push_back(to_symbols(s));

  std::vector<TrainOutcome> outcomes(train.size());
  auto scan = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t ti = lo; ti < hi; ++ti) {
      const std::u32string& a = train_symbols[ti];
      double best = -1.0;
      const EvalEntry* best_entry = nullptr;
      for (const auto& entry : eval_entries) {
        double cap = ratio_upper_bound(a.size(), entry.symbols.size());
        if (cap <= best || cap <= config.gamma) continue;
        double r = lev_ratio(a, entry.symbols);
        if (r > best) {  // first maximizer wins ties
          best = r;
          best_entry = &entry;
        }
      }
      if (best_entry != nullptr && best > config.gamma) {
        outcomes[ti].removed = true;
        outcomes[ti].hit = {ti + 1, eval_sets[best_entry->set_index].name,
                            best_entry->line, best};
      }
    }
  };

  int jobs = std::max(config.jobs, 1);
  if (jobs == 1 || train.size() < 2) {
    scan(0, train.size());
  } else {
    std::size_t chunk =
        (train.size() + static_cast<std::size_t>(jobs) - 1) /
        static_cast<std::size_t>(jobs);
    std::vector<std::thread> workers;
    for (std::size_t lo = 0; lo < train.size(); lo += chunk)
      workers.emplace_back(scan, lo, std::min(lo + chunk, train.size()));
    for (auto& w : workers) w.join();
  }

  FilterResult result;
  for (std::size_t ti = 0; ti < train.size(); ++ti) {
    if (outcomes[ti].removed)
      result.removed.push_back(outcomes[ti].hit);
    else
      result.kept.push_back(train[ti]);
  }
  return result;
}

}  // namespace semkit
