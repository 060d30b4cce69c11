#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semkit/edits.hpp"

namespace semkit {

// (1+β²)pr / (β²p + r); 0 when the denominator vanishes.
double f_beta(double p, double r, double beta);

struct SentenceScore {
  std::string id;
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  int chosen_annotator = 0;
};

struct ScoreReport {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  double precision = 1.0;  // tp/(tp+fp), 1.0 when no edits proposed
  double recall = 1.0;     // tp/(tp+fn), 1.0 when no edits expected
  double f = 1.0;
  double beta = 0.5;
  std::vector<SentenceScore> per_sentence;
};

// Alignment lattice between a source and a hypothesis. Nodes sit between
// alignment atoms; besides one edge per atom (a free match or an atomic
// edit), every run of edits with at most max_unchanged matched tokens
// strictly inside collapses into one compound edit edge. Public so tests
// can enumerate whole-lattice paths independently.
struct LatticeEdge {
  std::size_t to = 0;
  bool is_match = false;
  Edit edit;  // meaningful when !is_match
};

struct EditLattice {
  std::size_t nodes = 1;  // ids 0..nodes-1; start 0, final nodes-1
  std::vector<std::vector<LatticeEdge>> out;
};

EditLattice build_edit_lattice(const std::vector<std::string>& src,
                               const std::vector<std::string>& hyp,
                               int max_unchanged);

struct M2ScoreOptions {
  double beta = 0.5;
  int max_unchanged = 2;
  bool cumulative = true;  // pick references by cumulative F in corpus order
  bool keep_per_sentence = true;
};

ScoreReport m2_score(const std::vector<std::vector<std::string>>& sources,
                     const std::vector<std::vector<std::string>>& hypotheses,
                     const std::vector<M2Record>& references,
                     const M2ScoreOptions& options = {});

struct ClsReport {
  double precision = 0.0;  // of the "incorrect" class
  double recall = 0.0;
  double f1 = 0.0;
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  long long tn = 0;
  // Types with zero gold support are absent rather than zero.
  std::map<std::string, double> per_type_recall;
  std::map<std::string, long long> per_type_support;
};

extern const std::vector<std::string> kErrorTypes;

ClsReport cls_metrics(const std::vector<std::string>& preds,
                      const std::vector<std::string>& golds);

ClsReport per_type_recall(
    const std::vector<std::string>& preds,
    const std::vector<std::string>& golds,
    const std::vector<std::optional<std::string>>& types);

}  // namespace semkit
