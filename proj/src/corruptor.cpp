#include "semkit/corruptor.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <thread>

#include "semkit/errors.hpp"
#include "semkit/rng.hpp"
#include "semkit/utf8.hpp"

namespace semkit {

ConjunctionLexicon ConjunctionLexicon::defaults() {
  return {{"不仅", "不但", "虽然", "但是", "而且", "因为", "所以", "如果",
           "即使", "无论"}};
}

ConjunctionLexicon ConjunctionLexicon::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon file: " + path);
  ConjunctionLexicon lex;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lex.entries.push_back(line);
  }
  lex.validate();
  return lex;
}

void ConjunctionLexicon::validate() const {
  if (entries.empty()) throw ValidationError("conjunction lexicon is empty");
  std::set<std::string> seen(entries.begin(), entries.end());
  if (seen.size() != entries.size())
    throw ValidationError("conjunction lexicon contains duplicates");
}

namespace {

std::u32string swap_spans(const std::u32string& s, CharSpan a, CharSpan b) {
  if (b.begin < a.begin) std::swap(a, b);
  std::u32string out;
  out.reserve(s.size());
  out.append(s, 0, a.begin);
  out.append(s, b.begin, b.length());
  out.append(s, a.end, b.begin - a.end);
  out.append(s, a.begin, a.length());
  out.append(s, b.end, s.size() - b.end);
  return out;
}

// Moves the substring at `piece` directly behind (or, when the piece comes
// after, directly in front of) the anchor span.
std::u32string rotate_across(const std::u32string& s, CharSpan piece,
                             CharSpan anchor) {
  std::u32string out;
  out.reserve(s.size());
  if (piece.end <= anchor.begin) {
    out.append(s, 0, piece.begin);
    out.append(s, piece.end, anchor.end - piece.end);
    out.append(s, piece.begin, piece.length());
    out.append(s, anchor.end, s.size() - anchor.end);
  } else {
    out.append(s, 0, anchor.begin);
    out.append(s, piece.begin, piece.length());
    out.append(s, anchor.begin, piece.begin - anchor.begin);
    out.append(s, piece.end, s.size() - piece.end);
  }
  return out;
}

std::u32string excise(const std::u32string& s,
                      const std::vector<CharSpan>& spans) {
  std::u32string out;
  std::size_t pos = 0;
  for (const CharSpan& span : spans) {  // sorted, disjoint
    out.append(s, pos, span.begin - pos);
    pos = span.end;
  }
  out.append(s, pos, s.size() - pos);
  return out;
}

bool disjoint(CharSpan a, CharSpan b) {
  return a.end <= b.begin || b.end <= a.begin;
}

void check_spans(const std::vector<CharSpan>& spans, std::size_t len,
                 std::size_t expect) {
  if (spans.size() != expect)
    throw ValidationError("unexpected affected_spans count");
  for (const CharSpan& s : spans)
    if (s.begin >= s.end || s.end > len)
      throw ValidationError("affected span outside the source");
}

bool has_entity(const Token& tok) {
  if (tok.xpos == "nh" || tok.xpos == "ni" || tok.xpos == "ns") return true;
  if (tok.misc == "_") return false;
  std::size_t pos = 0;
  while (pos <= tok.misc.size()) {
    std::size_t next = tok.misc.find('|', pos);
    std::string entry = tok.misc.substr(
        pos, next == std::string::npos ? std::string::npos : next - pos);
    if (entry.rfind("NER=", 0) == 0 && entry != "NER=O") return true;
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return false;
}

}  // namespace

std::optional<CorruptionRecord> corrupt_adv_att(const DepTree& t,
                                                std::uint64_t seed) {
  const std::u32string& text = t.text32();
  struct Plan {
    CharSpan adv, att;
    std::u32string corrupted;
  };
  std::vector<Plan> plans;
  for (std::size_t v = 1; v <= t.size(); ++v) {
    if (!verb_like(t.token(v))) continue;
    std::vector<CharSpan> adv_spans;
    for (std::size_t child : t.children(v)) {
      if (t.token(child).deprel != "ADV") continue;
      SubtreeSpan sub = subtree_span(t, child);
      if (sub.contiguous) adv_spans.push_back(sub.span);
    }
    if (adv_spans.empty()) continue;
    for (std::size_t obj : t.children(v)) {
      if (t.token(obj).deprel != "VOB") continue;
      for (std::size_t att : t.children(obj)) {
        if (t.token(att).deprel != "ATT") continue;
        SubtreeSpan sub = subtree_span(t, att);
        if (!sub.contiguous) continue;
        for (const CharSpan& adv : adv_spans) {
          if (!disjoint(adv, sub.span)) continue;
          std::u32string corrupted = swap_spans(text, adv, sub.span);
          if (corrupted == text) continue;
          plans.push_back({adv, sub.span, std::move(corrupted)});
        }
      }
    }
  }
  if (plans.empty()) return std::nullopt;
  Rng rng(seed);
  const Plan& plan = plans[rng.below(plans.size())];
  CorruptionRecord rec;
  rec.source = t.text();
  rec.corrupted = utf8::encode(plan.corrupted);
  rec.rule = "adv_att";
  rec.affected_spans = {plan.adv, plan.att};
  rec.seed = seed;
  return rec;
}

std::optional<CorruptionRecord> corrupt_conjunction(
    const DepTree& t, const ConjunctionLexicon& lex, std::uint64_t seed) {
  lex.validate();
  const std::u32string& text = t.text32();
  std::size_t conj = 0;
  for (std::size_t i = 1; i <= t.size(); ++i) {
    if (std::find(lex.entries.begin(), lex.entries.end(), t.token(i).form) !=
        lex.entries.end()) {
      conj = i;
      break;
    }
  }
  if (conj == 0) return std::nullopt;
  CharSpan cspan = t.token(conj).span;

  struct Subject {
    CharSpan span;
    std::u32string content;
  };
  std::vector<Subject> before, after;
  for (std::size_t i = 1; i <= t.size(); ++i) {
    if (t.token(i).deprel != "SBV") continue;
    SubtreeSpan sub = subtree_span(t, i);
    if (!sub.contiguous) continue;
    Subject s{sub.span, text.substr(sub.span.begin, sub.span.length())};
    if (sub.span.end <= cspan.begin) before.push_back(s);
    else if (sub.span.begin >= cspan.end) after.push_back(s);
  }

  CharSpan moved;
  if (!before.empty()) {
    // Shared subject before the conjunction; later clauses may repeat it
    // verbatim or omit it.
    const Subject* nearest = &before.front();
    for (const Subject& s : before)
      if (s.span.end > nearest->span.end) nearest = &s;
    for (const Subject& s : after)
      if (s.content != nearest->content) return std::nullopt;
    moved = nearest->span;
  } else {
    // Distinct subjects: the first clause's subject sits after its
    // conjunction; confirm a later, different subject exists.
    if (after.size() < 2) return std::nullopt;
    const Subject* first = &after.front();
    for (const Subject& s : after)
      if (s.span.begin < first->span.begin) first = &s;
    bool differs = false;
    for (const Subject& s : after)
      if (s.span.begin > first->span.begin && s.content != first->content)
        differs = true;
    if (!differs) return std::nullopt;
    moved = first->span;
  }

  std::u32string corrupted = rotate_across(text, moved, cspan);
  if (corrupted == text) return std::nullopt;
  CorruptionRecord rec;
  rec.source = t.text();
  rec.corrupted = utf8::encode(corrupted);
  rec.rule = "conjunction";
  rec.affected_spans = {moved, cspan};
  rec.seed = seed;
  return rec;
}

std::optional<CorruptionRecord> corrupt_drop_spo(const DepTree& t,
                                                 std::uint64_t seed) {
  SpoRoles roles = find_spo(t);
  struct Candidate {
    const char* role;
    std::vector<CharSpan> spans;
  };
  std::vector<Candidate> candidates;
  auto consider = [&](const char* role, std::size_t index, bool whole_subtree) {
    std::vector<std::size_t> members;
    if (whole_subtree) members = subtree_span(t, index).indices;
    else members.push_back(index);
    for (std::size_t m : members)
      if (has_entity(t.token(m))) return;
    // group member tokens into maximal contiguous runs of positions
    std::vector<CharSpan> spans;
    std::size_t run_start = members.front();
    std::size_t prev = members.front();
    for (std::size_t k = 1; k <= members.size(); ++k) {
      if (k < members.size() && members[k] == prev + 1) {
        prev = members[k];
        continue;
      }
      spans.push_back(
          {t.token(run_start).span.begin, t.token(prev).span.end});
      if (k < members.size()) run_start = prev = members[k];
    }
    candidates.push_back({role, std::move(spans)});
  };
  if (roles.subject) consider("subject", *roles.subject, true);
  consider("predicate", roles.predicate, false);
  if (roles.object) consider("object", *roles.object, true);
  if (candidates.empty()) return std::nullopt;

  Rng rng(seed);
  const Candidate& pick = candidates[rng.below(candidates.size())];
  std::u32string corrupted = excise(t.text32(), pick.spans);
  if (corrupted == t.text32()) return std::nullopt;
  CorruptionRecord rec;
  rec.source = t.text();
  rec.corrupted = utf8::encode(corrupted);
  rec.rule = "drop_spo";
  rec.affected_spans = pick.spans;
  rec.dropped_role = pick.role;
  rec.seed = seed;
  return rec;
}

bool placement_violated(const CorruptionRecord& rec) {
  std::u32string src = utf8::decode(rec.source);
  std::u32string cor = utf8::decode(rec.corrupted);
  if (src == cor) return false;
  if (rec.rule == "adv_att") {
    check_spans(rec.affected_spans, src.size(), 2);
    if (!disjoint(rec.affected_spans[0], rec.affected_spans[1]))
      throw ValidationError("adv_att spans overlap");
    return cor == swap_spans(src, rec.affected_spans[0], rec.affected_spans[1]);
  }
  if (rec.rule == "conjunction") {
    check_spans(rec.affected_spans, src.size(), 2);
    if (!disjoint(rec.affected_spans[0], rec.affected_spans[1]))
      throw ValidationError("conjunction spans overlap");
    return cor ==
           rotate_across(src, rec.affected_spans[0], rec.affected_spans[1]);
  }
  if (rec.rule == "drop_spo") {
    if (rec.affected_spans.empty())
      throw ValidationError("drop_spo without affected spans");
    check_spans(rec.affected_spans, src.size(), rec.affected_spans.size());
    for (std::size_t k = 1; k < rec.affected_spans.size(); ++k)
      if (rec.affected_spans[k - 1].end > rec.affected_spans[k].begin)
        throw ValidationError("drop_spo spans unsorted or overlapping");
    if (!rec.dropped_role.has_value())
      throw ValidationError("drop_spo without dropped_role");
    return cor == excise(src, rec.affected_spans);
  }
  throw ValidationError("unknown corruption rule: " + rec.rule);
}

namespace {

struct RuleEntry {
  const char* name;
  double weight;
};

std::optional<CorruptionRecord> apply_rule(const DepTree& t, const char* rule,
                                           const ConjunctionLexicon& lex,
                                           std::uint64_t rule_seed) {
  if (std::string_view(rule) == "adv_att") return corrupt_adv_att(t, rule_seed);
  if (std::string_view(rule) == "conjunction")
    return corrupt_conjunction(t, lex, rule_seed);
  return corrupt_drop_spo(t, rule_seed);
}

}  // namespace

std::vector<CorruptionRecord> corrupt_batch(const std::vector<DepTree>& trees,
                                            const CorruptorConfig& config) {
  const RuleWeights& w = config.weights;
  if (w.adv_att < 0 || w.conjunction < 0 || w.drop_spo < 0)
    throw ValidationError("rule weights must be non-negative");
  double sum = w.adv_att + w.conjunction + w.drop_spo;
  if (sum <= 0) throw ValidationError("rule weights must not all be zero");
  if (config.rate <= 0.0 || config.rate > 1.0)
    throw ValidationError("rate must lie in (0, 1]");
  config.lexicon.validate();

  std::vector<RuleEntry> rules = {{"adv_att", w.adv_att},
                                  {"conjunction", w.conjunction},
                                  {"drop_spo", w.drop_spo}};

  std::vector<std::optional<CorruptionRecord>> outcomes(trees.size());
  auto process = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      const DepTree& t = trees[k];
      std::string id = t.sent_id().value_or("s" + std::to_string(k + 1));
      std::uint64_t sentence_seed = derive_seed(config.seed, id + "#corrupt");
      Rng rng(sentence_seed);
      if (rng.unit() >= config.rate) continue;

      double u = rng.unit() * sum;
      std::size_t drawn = 0;
      double acc = 0.0;
      for (std::size_t r = 0; r < rules.size(); ++r) {
        if (rules[r].weight <= 0) continue;
        acc += rules[r].weight;
        drawn = r;  // settles on the last positive weight if u == sum
        if (u < acc) break;
      }

      // Drawn rule first, then the other positive-weight rules, heavy first.
      std::vector<std::size_t> attempt_order = {drawn};
      std::vector<std::size_t> rest;
      for (std::size_t r = 0; r < rules.size(); ++r)
        if (r != drawn && rules[r].weight > 0) rest.push_back(r);
      std::stable_sort(rest.begin(), rest.end(),
                       [&](std::size_t a, std::size_t b) {
                         return rules[a].weight > rules[b].weight;
                       });
      attempt_order.insert(attempt_order.end(), rest.begin(), rest.end());

      for (std::size_t r : attempt_order) {
        std::uint64_t rule_seed = derive_seed(sentence_seed, rules[r].name);
        auto rec = apply_rule(t, rules[r].name, config.lexicon, rule_seed);
        if (rec.has_value()) {
          outcomes[k] = std::move(rec);
          break;
        }
      }
    }
  };

  int jobs = std::max(config.jobs, 1);
  if (jobs == 1 || trees.size() < 2) {
    process(0, trees.size());
  } else {
    std::size_t chunk = (trees.size() + static_cast<std::size_t>(jobs) - 1) /
                        static_cast<std::size_t>(jobs);
    std::vector<std::thread> workers;
    for (std::size_t lo = 0; lo < trees.size(); lo += chunk)
      workers.emplace_back(process, lo, std::min(lo + chunk, trees.size()));
    for (auto& worker : workers) worker.join();
  }

  std::vector<CorruptionRecord> records;
  for (auto& outcome : outcomes)
    if (outcome.has_value()) records.push_back(std::move(*outcome));
  return records;
}

}  // namespace semkit
