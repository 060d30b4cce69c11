#include "semkit/metrics.hpp"

#include <algorithm>
#include <tuple>

#include "semkit/errors.hpp"

namespace semkit {

double f_beta(double p, double r, double beta) {
  if (p < 0.0 || p > 1.0) throw ValidationError("precision outside [0, 1]");
  if (r < 0.0 || r > 1.0) throw ValidationError("recall outside [0, 1]");
  if (beta <= 0.0) throw ValidationError("beta must be positive");
  double b2 = beta * beta;
  double denom = b2 * p + r;
  if (denom == 0.0) return 0.0;
  return (1.0 + b2) * p * r / denom;
}

EditLattice build_edit_lattice(const std::vector<std::string>& src,
                               const std::vector<std::string>& hyp,
                               int max_unchanged) {
  if (max_unchanged < 0) throw ValidationError("max_unchanged must be >= 0");
  std::vector<AlignOp> ops = align_tokens(src, hyp);
  std::size_t atoms = ops.size();

  // Source/target positions at every node (between atoms).
  std::vector<std::size_t> spos(atoms + 1, 0), tpos(atoms + 1, 0);
  for (std::size_t a = 0; a < atoms; ++a) {
    spos[a + 1] = spos[a] + (ops[a] == AlignOp::kIns ? 0 : 1);
    tpos[a + 1] = tpos[a] + (ops[a] == AlignOp::kDel ? 0 : 1);
  }

  auto make_edit = [&](std::size_t from_atom, std::size_t to_atom) {
    Edit e;
    e.start = spos[from_atom];
    e.end = spos[to_atom + 1];
    e.replacement.assign(
        hyp.begin() + static_cast<std::ptrdiff_t>(tpos[from_atom]),
        hyp.begin() + static_cast<std::ptrdiff_t>(tpos[to_atom + 1]));
    return e;
  };

  EditLattice lattice;
  lattice.nodes = atoms + 1;
  lattice.out.assign(lattice.nodes, {});
  for (std::size_t a = 0; a < atoms; ++a) {
    LatticeEdge edge;
    edge.to = a + 1;
    if (ops[a] == AlignOp::kMatch) {
      edge.is_match = true;
    } else {
      edge.edit = make_edit(a, a);
    }
    lattice.out[a].push_back(std::move(edge));
    if (ops[a] == AlignOp::kMatch) continue;

    int inside = 0;
    for (std::size_t b = a + 1; b < atoms; ++b) {
      if (ops[b] == AlignOp::kMatch) {
        ++inside;
        continue;
      }
      if (inside > max_unchanged) break;
      lattice.out[a].push_back(LatticeEdge{b + 1, false, make_edit(a, b)});
    }
  }
  return lattice;
}

namespace {

using EditKey = std::tuple<std::size_t, std::size_t>;

EditKey span_of(const Edit& e) { return {e.start, e.end}; }

struct PathValue {
  long long tp = -1;  // -1 marks unreachable
  long long edits = 0;

  bool better_than(const PathValue& other) const {
    if (tp != other.tp) return tp > other.tp;
    return edits < other.edits;
  }
};

struct PathResult {
  long long tp = 0;
  long long edits = 0;
};

// Best (max tp, then min edit count) path through the lattice against one
// reference. Gold spans are unique and path spans non-decreasing, so a
// monotone gold pointer yields the exact multiset intersection; it is part
// of the DP state to handle duplicate zero-width insertions.
PathResult best_path(const EditLattice& lattice, const std::vector<Edit>& gold) {
  std::size_t g_states = gold.size() + 1;
  std::vector<std::vector<PathValue>> dp(
      lattice.nodes, std::vector<PathValue>(g_states));
  dp[0][0] = {0, 0};
  for (std::size_t node = 0; node + 1 < lattice.nodes; ++node) {
    for (std::size_t g = 0; g < g_states; ++g) {
      const PathValue cur = dp[node][g];
      if (cur.tp < 0) continue;
      for (const LatticeEdge& edge : lattice.out[node]) {
        std::size_t g2 = g;
        PathValue next = cur;
        if (!edge.is_match) {
          while (g2 < gold.size() && span_of(gold[g2]) < span_of(edge.edit))
            ++g2;
          if (g2 < gold.size() && span_of(gold[g2]) == span_of(edge.edit) &&
              gold[g2].replacement == edge.edit.replacement) {
            ++next.tp;
            ++g2;
          }
          ++next.edits;
        }
        if (next.better_than(dp[edge.to][g2])) dp[edge.to][g2] = next;
      }
    }
  }
  PathValue best;
  for (std::size_t g = 0; g < g_states; ++g)
    if (dp[lattice.nodes - 1][g].better_than(best))
      best = dp[lattice.nodes - 1][g];
  return {best.tp, best.edits};
}

struct Counts {
  long long tp = 0, fp = 0, fn = 0;
};

double f_of(const Counts& c, double beta) {
  double p = (c.tp + c.fp) == 0
                 ? 1.0
                 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  double r = (c.tp + c.fn) == 0
                 ? 1.0
                 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  return f_beta(p, r, beta);
}

}  // namespace

ScoreReport m2_score(const std::vector<std::vector<std::string>>& sources,
                     const std::vector<std::vector<std::string>>& hypotheses,
                     const std::vector<M2Record>& references,
                     const M2ScoreOptions& options) {
  if (sources.size() != hypotheses.size() ||
      sources.size() != references.size())
    throw ValidationError("sources, hypotheses and references differ in length");
  if (options.beta <= 0.0) throw ValidationError("beta must be positive");
  if (options.max_unchanged < 0)
    throw ValidationError("max_unchanged must be >= 0");

  ScoreReport report;
  report.beta = options.beta;
  Counts total;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    const M2Record& record = references[k];
    if (sources[k] != record.source_tokens)
      throw ValidationError("sentence " + std::to_string(k + 1) +
                            ": source does not match its M2 record");
    if (record.references.empty())
      throw ValidationError("sentence " + std::to_string(k + 1) +
                            ": M2 record without references");
    EditLattice lattice =
        build_edit_lattice(sources[k], hypotheses[k], options.max_unchanged);

    bool have_choice = false;
    Counts chosen;
    int chosen_annotator = 0;
    double chosen_f = 0.0;
    for (const EditSet& ref : record.references) {
      PathResult pr = best_path(lattice, ref.edits);
      Counts cand{pr.tp, pr.edits - pr.tp,
                  static_cast<long long>(ref.edits.size()) - pr.tp};
      Counts scored = options.cumulative
                          ? Counts{total.tp + cand.tp, total.fp + cand.fp,
                                   total.fn + cand.fn}
                          : cand;
      double f = f_of(scored, options.beta);
      if (!have_choice || f > chosen_f ||
          (f == chosen_f && ref.annotator < chosen_annotator)) {
        have_choice = true;
        chosen = cand;
        chosen_annotator = ref.annotator;
        chosen_f = f;
      }
    }
    total.tp += chosen.tp;
    total.fp += chosen.fp;
    total.fn += chosen.fn;
    if (options.keep_per_sentence)
      report.per_sentence.push_back({std::to_string(k + 1), chosen.tp,
                                     chosen.fp, chosen.fn, chosen_annotator});
  }

  report.tp = total.tp;
  report.fp = total.fp;
  report.fn = total.fn;
  report.precision =
      (total.tp + total.fp) == 0
          ? 1.0
          : static_cast<double>(total.tp) /
                static_cast<double>(total.tp + total.fp);
  report.recall = (total.tp + total.fn) == 0
                      ? 1.0
                      : static_cast<double>(total.tp) /
                            static_cast<double>(total.tp + total.fn);
  report.f = f_beta(report.precision, report.recall, options.beta);
  return report;
}

const std::vector<std::string> kErrorTypes = {
    "word order", "missing",   "collocation", "redundant",
    "confusion",  "fuzziness", "illogic"};

namespace {

bool is_incorrect(const std::string& label, std::size_t index) {
  if (label == "incorrect") return true;
  if (label == "correct") return false;
  throw ValidationError("line " + std::to_string(index + 1) +
                        ": unknown label '" + label +
                        "' (expected correct/incorrect)");
}

}  // namespace

ClsReport cls_metrics(const std::vector<std::string>& preds,
                      const std::vector<std::string>& golds) {
  if (preds.size() != golds.size())
    throw ValidationError("predictions and golds differ in length");
  ClsReport report;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    bool p = is_incorrect(preds[i], i);
    bool g = is_incorrect(golds[i], i);
    if (p && g) ++report.tp;
    else if (p && !g) ++report.fp;
    else if (!p && g) ++report.fn;
    else ++report.tn;
  }
  report.precision =
      (report.tp + report.fp) == 0
          ? 0.0
          : static_cast<double>(report.tp) /
                static_cast<double>(report.tp + report.fp);
  report.recall = (report.tp + report.fn) == 0
                      ? 0.0
                      : static_cast<double>(report.tp) /
                            static_cast<double>(report.tp + report.fn);
  report.f1 = f_beta(report.precision, report.recall, 1.0);
  return report;
}

ClsReport per_type_recall(
    const std::vector<std::string>& preds,
    const std::vector<std::string>& golds,
    const std::vector<std::optional<std::string>>& types) {
  if (types.size() != golds.size())
    throw ValidationError("type tags and golds differ in length");
  ClsReport report = cls_metrics(preds, golds);
  std::map<std::string, long long> detected;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    if (!types[i].has_value()) continue;
    const std::string& tag = *types[i];
    if (std::find(kErrorTypes.begin(), kErrorTypes.end(), tag) ==
        kErrorTypes.end())
      throw ValidationError("line " + std::to_string(i + 1) +
                            ": unknown error type '" + tag + "'");
    if (!is_incorrect(golds[i], i)) continue;
    ++report.per_type_support[tag];
    if (is_incorrect(preds[i], i)) ++detected[tag];
  }
  for (const auto& [tag, support] : report.per_type_support)
    report.per_type_recall[tag] =
        static_cast<double>(detected[tag]) / static_cast<double>(support);
  return report;
}

}  // namespace semkit
