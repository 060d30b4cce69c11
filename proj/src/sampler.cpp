#include "semkit/sampler.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

#include "json.hpp"
#include "semkit/errors.hpp"
#include "semkit/rng.hpp"

namespace semkit {

const std::vector<std::string>& default_relation_set() {
  static const std::vector<std::string> kSet = {
      "SBV", "VOB", "IOB", "FOB", "DBL", "ATT",
      "ADV", "CMP", "COO", "POB", "LAD", "RAD"};
  return kSet;
}

namespace {

void check_config(const SamplerConfig& cfg) {
  if (cfg.pairs_per_sentence == 0)
    throw ValidationError("pairs_per_sentence must be positive");
  if (cfg.relation_set.empty())
    throw ValidationError("relation_set must not be empty");
  std::set<std::string> seen(cfg.relation_set.begin(), cfg.relation_set.end());
  if (seen.size() != cfg.relation_set.size())
    throw ValidationError("relation_set contains duplicates");
  if (cfg.others_cap == 0) throw ValidationError("others_cap must be positive");
}

std::string resolve_id(const DepTree& t, std::string_view source_id) {
  if (!source_id.empty()) return std::string(source_id);
  return t.sent_id().value_or("");
}

struct Candidate {
  std::size_t i = 0;  // 1-based token indices
  std::size_t j = 0;
};

struct Pool {
  std::string label;
  std::vector<Candidate> candidates;
};

// Round-robin over a shuffled class order: position p of the visit order
// owns every p-th unit of the budget; classes that run dry forfeit their
// remaining turns rather than passing them on.
std::vector<PairExample> draw(const DepTree& t, const std::string& task,
                              const std::string& source_id,
                              std::vector<Pool> pools,
                              const SamplerConfig& cfg, Rng& rng) {
  for (Pool& pool : pools) rng.shuffle(pool.candidates);
  std::erase_if(pools, [](const Pool& p) { return p.candidates.empty(); });
  std::vector<std::size_t> order(pools.size());
  for (std::size_t p = 0; p < order.size(); ++p) order[p] = p;
  rng.shuffle(order);

  std::vector<PairExample> out;
  if (pools.empty()) return out;
  std::size_t target = cfg.pairs_per_sentence;
  std::size_t k = pools.size();
  std::vector<std::size_t> quota(k), taken(k, 0);
  for (std::size_t p = 0; p < k; ++p)
    quota[p] = target / k + (p < target % k ? 1 : 0);

  std::size_t max_quota = target / k + (target % k != 0 ? 1 : 0);
  for (std::size_t cycle = 0; cycle < max_quota; ++cycle) {
    for (std::size_t p = 0; p < k; ++p) {
      Pool& pool = pools[order[p]];
      if (cycle >= quota[p] || taken[p] >= pool.candidates.size()) continue;
      const Candidate& cand = pool.candidates[taken[p]++];
      PairExample ex;
      ex.text = t.text();
      ex.span_i = t.token(cand.i).span;
      ex.span_j = t.token(cand.j).span;
      ex.task = task;
      ex.label = pool.label;
      ex.source_id = source_id;
      out.push_back(std::move(ex));
    }
  }
  return out;
}

std::vector<PairExample> sample_structure(const DepTree& t,
                                          const SamplerConfig& cfg,
                                          std::string_view source_id,
                                          bool with_others) {
  check_config(cfg);
  std::string id = resolve_id(t, source_id);
  std::string task = with_others ? "DSP+" : "DSP";
  Rng rng(derive_seed(cfg.seed, id + "#" + task));

  std::string child_label =
      cfg.orientation == Orientation::kHeadIsParent ? "child" : "parent";
  std::string parent_label =
      cfg.orientation == Orientation::kHeadIsParent ? "parent" : "child";
  Pool child_pool{child_label, {}};
  Pool parent_pool{parent_label, {}};
  for (const Token& tok : t.tokens()) {
    if (tok.head == 0) continue;
    child_pool.candidates.push_back({tok.index, tok.head});
    parent_pool.candidates.push_back({tok.head, tok.index});
  }

  std::vector<Pool> pools;
  pools.push_back(std::move(child_pool));
  pools.push_back(std::move(parent_pool));
  if (with_others) {
    Pool others{"others", {}};
    std::size_t seen = 0;
    for (std::size_t i = 1; i <= t.size(); ++i) {
      for (std::size_t j = 1; j <= t.size(); ++j) {
        if (i == j) continue;
        if (relationship(t, i, j, cfg.orientation) != Relationship::kOthers)
          continue;
        ++seen;
        if (others.candidates.size() < cfg.others_cap) {
          others.candidates.push_back({i, j});
        } else {
          std::uint64_t r = rng.below(seen);
          if (r < cfg.others_cap)
            others.candidates[static_cast<std::size_t>(r)] = {i, j};
        }
      }
    }
    pools.push_back(std::move(others));
  }
  return draw(t, task, id, std::move(pools), cfg, rng);
}

}  // namespace

std::vector<PairExample> sample_dsp(const DepTree& t, const SamplerConfig& cfg,
                                    std::string_view source_id) {
  return sample_structure(t, cfg, source_id, false);
}

std::vector<PairExample> sample_dsp_plus(const DepTree& t,
                                         const SamplerConfig& cfg,
                                         std::string_view source_id) {
  return sample_structure(t, cfg, source_id, true);
}

std::vector<PairExample> sample_drp(const DepTree& t, const SamplerConfig& cfg,
                                    std::string_view source_id) {
  check_config(cfg);
  std::string id = resolve_id(t, source_id);
  Rng rng(derive_seed(cfg.seed, id + "#DRP"));

  std::vector<Pool> pools;
  for (const std::string& label : cfg.relation_set) pools.push_back({label, {}});
  for (const Token& tok : t.tokens()) {
    if (tok.head == 0) continue;
    for (std::size_t p = 0; p < cfg.relation_set.size(); ++p) {
      if (tok.deprel == cfg.relation_set[p]) {
        pools[p].candidates.push_back({tok.head, tok.index});
        break;
      }
    }
  }
  return draw(t, "DRP", id, std::move(pools), cfg, rng);
}

std::vector<PairExample> sample_dsrp(const DepTree& t, const SamplerConfig& cfg,
                                     bool plus, std::string_view source_id) {
  std::vector<PairExample> out =
      plus ? sample_dsp_plus(t, cfg, source_id) : sample_dsp(t, cfg, source_id);
  std::vector<PairExample> relations = sample_drp(t, cfg, source_id);
  out.insert(out.end(), std::make_move_iterator(relations.begin()),
             std::make_move_iterator(relations.end()));
  return out;
}

std::size_t write_examples(const std::vector<PairExample>& examples,
                           std::ostream& out) {
  for (const PairExample& ex : examples) {
    nlohmann::ordered_json j;
    j["text"] = ex.text;
    j["span_i"] = {ex.span_i.begin, ex.span_i.end};
    j["span_j"] = {ex.span_j.begin, ex.span_j.end};
    j["task"] = ex.task;
    j["label"] = ex.label;
    j["source_id"] = ex.source_id;
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("failed writing examples");
  return examples.size();
}

std::vector<PairExample> read_examples(std::istream& in) {
  std::vector<PairExample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      PairExample ex;
      ex.text = j.at("text").get<std::string>();
      ex.span_i = {j.at("span_i").at(0).get<std::size_t>(),
                   j.at("span_i").at(1).get<std::size_t>()};
      ex.span_j = {j.at("span_j").at(0).get<std::size_t>(),
                   j.at("span_j").at(1).get<std::size_t>()};
      ex.task = j.at("task").get<std::string>();
      ex.label = j.at("label").get<std::string>();
      ex.source_id = j.at("source_id").get<std::string>();
      out.push_back(std::move(ex));
    } catch (const nlohmann::json::exception& err) {
      throw ParseError(lineno, std::string("bad example record: ") + err.what());
    }
  }
  return out;
}

}  // namespace semkit
