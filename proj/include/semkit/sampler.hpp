#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "semkit/deptree.hpp"

namespace semkit {

struct PairExample {
  std::string text;
  CharSpan span_i;
  CharSpan span_j;
  std::string task;   // DSP, DSP+ or DRP
  std::string label;  // child/parent/others or a relation label
  std::string source_id;

  friend bool operator==(const PairExample&, const PairExample&) = default;
};

// The 12 most frequent LTP relations excluding HED and WP.
const std::vector<std::string>& default_relation_set();

struct SamplerConfig {
  std::size_t pairs_per_sentence = 4;
  std::vector<std::string> relation_set = default_relation_set();
  std::uint64_t seed = 0;
  Orientation orientation = Orientation::kHeadIsParent;
  // Enumeration cap for distance->1 pairs; excess is reservoir-sampled.
  std::size_t others_cap = 10000;
};

// Every sampler derives its stream as hash(seed, source_id "#" task), so
// per-sentence runs are independent and parallel-safe. Classes are drawn
// round-robin in a shuffled visit order, without replacement and without
// backfilling classes that run dry. source_id falls back to the tree's
// sent_id comment when the argument is empty.
std::vector<PairExample> sample_dsp(const DepTree& t, const SamplerConfig& cfg,
                                    std::string_view source_id = {});
std::vector<PairExample> sample_dsp_plus(const DepTree& t,
                                         const SamplerConfig& cfg,
                                         std::string_view source_id = {});
std::vector<PairExample> sample_drp(const DepTree& t, const SamplerConfig& cfg,
                                    std::string_view source_id = {});
std::vector<PairExample> sample_dsrp(const DepTree& t, const SamplerConfig& cfg,
                                     bool plus,
                                     std::string_view source_id = {});

// One JSON object per line, fields in fixed order:
// text, span_i, span_j, task, label, source_id. Returns the line count.
std::size_t write_examples(const std::vector<PairExample>& examples,
                           std::ostream& out);
std::vector<PairExample> read_examples(std::istream& in);

}  // namespace semkit
