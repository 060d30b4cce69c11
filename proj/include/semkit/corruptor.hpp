#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semkit/deptree.hpp"

namespace semkit {

struct CorruptionRecord {
  std::string source;
  std::string corrupted;
  std::string rule;  // adv_att | conjunction | drop_spo
  std::vector<CharSpan> affected_spans;  // code-point spans in source
  std::optional<std::string> dropped_role;  // subject | predicate | object
  std::uint64_t seed = 0;
};

struct ConjunctionLexicon {
  std::vector<std::string> entries;

  static ConjunctionLexicon defaults();
  // One word per line; blank lines and #-comments skipped.
  static ConjunctionLexicon from_file(const std::string& path);
  void validate() const;
};

// Swaps a verb's contiguous ADV subtree with the contiguous ATT subtree of
// its VOB object, so the adverbial lands in front of the object and the
// attribute in front of the verb.
std::optional<CorruptionRecord> corrupt_adv_att(const DepTree& t,
                                                std::uint64_t seed);

// Moves a clause subject across the first lexicon conjunction, in whichever
// direction breaks the placement rule (shared subject belongs before the
// conjunction, distinct subjects after it).
std::optional<CorruptionRecord> corrupt_conjunction(
    const DepTree& t, const ConjunctionLexicon& lex, std::uint64_t seed);

// Deletes the subject subtree, object subtree or predicate token, chosen
// uniformly among candidates that carry no entity (MISC NER tag or xpos in
// {nh, ni, ns}).
std::optional<CorruptionRecord> corrupt_drop_spo(const DepTree& t,
                                                 std::uint64_t seed);

// Checks the record's corrupted surface against span arithmetic on the
// source: reorders must equal the claimed rotation/swap, deletions the
// claimed excision, and the surface must actually have changed.
bool placement_violated(const CorruptionRecord& rec);

struct RuleWeights {
  double adv_att = 1.0;
  double conjunction = 1.0;
  double drop_spo = 1.0;
};

struct CorruptorConfig {
  RuleWeights weights;
  double rate = 1.0;  // per-sentence selection probability
  std::uint64_t seed = 0;
  ConjunctionLexicon lexicon = ConjunctionLexicon::defaults();
  int jobs = 1;
};

// Selects each sentence with probability rate, draws a rule by normalized
// weights and falls through to the remaining positive-weight rules (heaviest
// first) when the draw does not apply. Output order equals input order; all
// randomness comes from seeds derived per sentence id.
std::vector<CorruptionRecord> corrupt_batch(const std::vector<DepTree>& trees,
                                            const CorruptorConfig& config);

}  // namespace semkit
