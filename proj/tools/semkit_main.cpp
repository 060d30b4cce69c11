#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "semkit/baseline.hpp"
#include "semkit/conllu.hpp"
#include "semkit/corruptor.hpp"
#include "semkit/dedup.hpp"
#include "semkit/deptree.hpp"
#include "semkit/edits.hpp"
#include "semkit/errors.hpp"
#include "semkit/metrics.hpp"
#include "semkit/sampler.hpp"
#include "semkit/stats.hpp"

namespace {

using namespace semkit;

constexpr const char* kVersion = "semkit 1.0.0 (conllu 1, m2 1, jsonl 1)";

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

std::vector<DepTree> load_trees(const std::string& path, bool lenient) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  ConlluOptions options;
  options.lenient = lenient;
  std::vector<std::string> warnings;
  std::vector<DepTree> trees = parse_conllu(in, options, &warnings);
  for (const std::string& w : warnings) std::cerr << path << ": " << w << '\n';
  return trees;
}

// id falls back to the record's position when no sent_id comment exists.
std::string tree_id(const DepTree& t, std::size_t index) {
  return t.sent_id().value_or("s" + std::to_string(index + 1));
}

std::string fmt1(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", x);
  return buf;
}

std::string pct1(double fraction) { return fmt1(fraction * 100.0); }

std::string beta_label(double beta) {
  std::ostringstream os;
  os << beta;
  return "F" + os.str();
}

std::vector<std::pair<std::string, std::string>> read_tsv2(
    const std::string& path) {
  std::vector<std::pair<std::string, std::string>> rows;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError(lineno, path + ": expected two tab-separated columns");
    rows.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return rows;
}

std::string strip_spaces(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s)
    if (c != ' ' && c != '\t') out.push_back(c);
  return out;
}

// ---------------------------------------------------------------- ingest

struct IngestOpts {
  std::string input;
  std::string output;
  bool lenient = false;
};

void run_ingest(const IngestOpts& opt) {
  std::vector<DepTree> trees = load_trees(opt.input, opt.lenient);
  std::size_t tokens = 0;
  for (const DepTree& t : trees) tokens += t.size();
  if (!opt.output.empty()) {
    std::ofstream out = open_out(opt.output);
    serialize_conllu(trees, out);
    finish_out(out, opt.output);
  }
  std::cerr << "ok: " << trees.size() << " sentences, " << tokens
            << " tokens\n";
}

// ----------------------------------------------------------------- dedup

struct DedupOpts {
  std::string train;
  std::vector<std::string> against;
  std::string output;
  std::string report;
  double gamma = 0.70;
  bool word_level = false;
  int jobs = 1;
};

void run_dedup(const DedupOpts& opt) {
  std::vector<NamedCorpus> eval_sets;
  for (const std::string& spec : opt.against) {
    std::string name, path;
    std::size_t eq = spec.find('=');
    if (eq != std::string::npos && eq > 0 &&
        spec.find('/') > eq) {  // explicit name=path
      name = spec.substr(0, eq);
      path = spec.substr(eq + 1);
    } else {
      path = spec;
      name = std::filesystem::path(spec).stem().string();
    }
    eval_sets.push_back({name, read_lines(path)});
  }
  std::vector<std::string> train = read_lines(opt.train);

  DedupConfig config;
  config.gamma = opt.gamma;
  config.word_level = opt.word_level;
  config.jobs = opt.jobs;
  FilterResult result = filter_leakage(train, eval_sets, config);

  std::string out_path =
      opt.output.empty() ? opt.train + ".kept" : opt.output;
  std::string report_path =
      opt.report.empty() ? opt.train + ".hits.tsv" : opt.report;
  std::ofstream out = open_out(out_path);
  for (const std::string& line : result.kept) out << line << '\n';
  finish_out(out, out_path);
  std::ofstream rep = open_out(report_path);
  rep << "train_line\teval_split\teval_line\tratio\n";
  for (const SimilarityHit& hit : result.removed) {
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.6f", hit.ratio);
    rep << hit.train_line << '\t' << hit.eval_split << '\t' << hit.eval_line
        << '\t' << ratio << '\n';
  }
  finish_out(rep, report_path);
  std::cerr << "kept " << result.kept.size() << " of " << train.size()
            << " (removed " << result.removed.size() << ")\n";
}

// ---------------------------------------------------------------- corrupt

struct CorruptOpts {
  std::string input;
  std::string output;
  std::string tsv;
  std::string lexicon;
  std::vector<double> weights = {1.0, 1.0, 1.0};
  double rate = 1.0;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool lenient = false;
};

void run_corrupt(const CorruptOpts& opt) {
  std::vector<DepTree> trees = load_trees(opt.input, opt.lenient);
  CorruptorConfig config;
  if (opt.weights.size() != 3)
    throw ValidationError("--weights needs exactly three values");
  config.weights = {opt.weights[0], opt.weights[1], opt.weights[2]};
  config.rate = opt.rate;
  config.seed = opt.seed;
  config.jobs = opt.jobs;
  if (!opt.lexicon.empty())
    config.lexicon = ConjunctionLexicon::from_file(opt.lexicon);
  std::cerr << "seed = " << opt.seed << '\n';

  std::vector<CorruptionRecord> records = corrupt_batch(trees, config);
  std::ofstream out = open_out(opt.output);
  for (const CorruptionRecord& rec : records) {
    nlohmann::ordered_json j;
    j["source"] = rec.source;
    j["corrupted"] = rec.corrupted;
    j["rule"] = rec.rule;
    nlohmann::ordered_json spans = nlohmann::ordered_json::array();
    for (const CharSpan& s : rec.affected_spans)
      spans.push_back({s.begin, s.end});
    j["spans"] = spans;
    j["dropped_role"] =
        rec.dropped_role ? nlohmann::ordered_json(*rec.dropped_role)
                         : nlohmann::ordered_json(nullptr);
    j["seed"] = rec.seed;
    out << j.dump() << '\n';
  }
  finish_out(out, opt.output);
  if (!opt.tsv.empty()) {
    std::ofstream tsv = open_out(opt.tsv);
    for (const CorruptionRecord& rec : records)
      tsv << rec.corrupted << '\t' << rec.source << '\n';
    finish_out(tsv, opt.tsv);
  }
  std::cerr << "corrupted " << records.size() << " of " << trees.size()
            << " sentences\n";
}

// ----------------------------------------------------------------- sample

struct SampleOpts {
  std::string input;
  std::string output;
  std::string task = "dsp";
  std::string relations;
  std::size_t pairs = 4;
  std::uint64_t seed = 0;
  std::string orientation = "head-parent";
  int jobs = 1;
  bool lenient = false;
};

void run_sample(const SampleOpts& opt) {
  std::vector<DepTree> trees = load_trees(opt.input, opt.lenient);
  SamplerConfig cfg;
  cfg.pairs_per_sentence = opt.pairs;
  cfg.seed = opt.seed;
  cfg.orientation = opt.orientation == "flipped" ? Orientation::kFlipped
                                                 : Orientation::kHeadIsParent;
  if (!opt.relations.empty()) {
    cfg.relation_set.clear();
    for (const std::string& line : read_lines(opt.relations))
      if (!line.empty()) cfg.relation_set.push_back(line);
  }
  std::cerr << "seed = " << opt.seed << '\n';

  auto sample_one = [&](const DepTree& t,
                        const std::string& id) -> std::vector<PairExample> {
    if (opt.task == "dsp") return sample_dsp(t, cfg, id);
    if (opt.task == "dsp+") return sample_dsp_plus(t, cfg, id);
    if (opt.task == "drp") return sample_drp(t, cfg, id);
    if (opt.task == "dsrp") return sample_dsrp(t, cfg, false, id);
    return sample_dsrp(t, cfg, true, id);  // dsrp+
  };

  std::vector<std::vector<PairExample>> per_tree(trees.size());
  auto process = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k)
      per_tree[k] = sample_one(trees[k], tree_id(trees[k], k));
  };
  int jobs = std::max(opt.jobs, 1);
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

  std::ofstream out = open_out(opt.output);
  std::size_t total = 0;
  for (const auto& examples : per_tree) total += write_examples(examples, out);
  finish_out(out, opt.output);
  std::cerr << "wrote " << total << " examples\n";
}

// --------------------------------------------------------------- score m2

struct ScoreM2Opts {
  std::string source;
  std::string hypothesis;
  std::string ref;
  std::string json;
  double beta = 0.5;
  int max_unchanged = 2;
  bool per_sentence_refs = false;
  bool char_level = false;
  bool detail = false;
};

void run_score_m2(const ScoreM2Opts& opt) {
  auto tokenize = [&](const std::string& line) {
    return opt.char_level ? char_tokens(strip_spaces(line))
                          : split_tokens(line);
  };
  std::vector<std::vector<std::string>> sources, hyps;
  for (const std::string& line : read_lines(opt.source))
    sources.push_back(tokenize(line));
  for (const std::string& line : read_lines(opt.hypothesis))
    hyps.push_back(tokenize(line));
  std::ifstream ref_in(opt.ref);
  if (!ref_in) throw IoError("cannot open " + opt.ref);
  std::vector<M2Record> refs = read_m2(ref_in);

  M2ScoreOptions options;
  options.beta = opt.beta;
  options.max_unchanged = opt.max_unchanged;
  options.cumulative = !opt.per_sentence_refs;
  ScoreReport report = m2_score(sources, hyps, refs, options);

  std::cout << "TP = " << report.tp << ", FP = " << report.fp
            << ", FN = " << report.fn << '\n';
  std::string flabel = beta_label(opt.beta);
  std::cout << "Precision = " << pct1(report.precision) << '\n';
  std::cout << "Recall    = " << pct1(report.recall) << '\n';
  std::cout << flabel;
  for (std::size_t pad = flabel.size(); pad < 9; ++pad) std::cout << ' ';
  std::cout << " = " << pct1(report.f) << '\n';
  if (opt.detail) {
    std::cout << "id\ttp\tfp\tfn\tannotator\n";
    for (const SentenceScore& s : report.per_sentence)
      std::cout << s.id << '\t' << s.tp << '\t' << s.fp << '\t' << s.fn << '\t'
                << s.chosen_annotator << '\n';
  }
  if (!opt.json.empty()) {
    nlohmann::ordered_json j;
    j["tp"] = report.tp;
    j["fp"] = report.fp;
    j["fn"] = report.fn;
    j["precision"] = report.precision;
    j["recall"] = report.recall;
    j["f"] = report.f;
    j["beta"] = report.beta;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const SentenceScore& s : report.per_sentence) {
      nlohmann::ordered_json row;
      row["id"] = s.id;
      row["tp"] = s.tp;
      row["fp"] = s.fp;
      row["fn"] = s.fn;
      row["annotator"] = s.chosen_annotator;
      rows.push_back(std::move(row));
    }
    j["per_sentence"] = rows;
    std::ofstream out = open_out(opt.json);
    out << j.dump(2) << '\n';
    finish_out(out, opt.json);
  }
}

// -------------------------------------------------------------- score cls

struct ScoreClsOpts {
  std::string pred;
  std::string gold;
  std::string types;
  std::string json;
};

void run_score_cls(const ScoreClsOpts& opt) {
  auto gold_rows = read_tsv2(opt.gold);
  auto pred_rows = read_tsv2(opt.pred);
  std::map<std::string, std::string> pred_map;
  for (const auto& [id, label] : pred_rows)
    if (!pred_map.emplace(id, label).second)
      throw ValidationError("duplicate prediction id: " + id);
  std::map<std::string, std::string> type_map;
  if (!opt.types.empty()) {
    for (const auto& [id, tag] : read_tsv2(opt.types))
      if (!type_map.emplace(id, tag).second)
        throw ValidationError("duplicate type id: " + id);
  }

  std::vector<std::string> preds, golds;
  std::vector<std::optional<std::string>> types;
  std::set<std::string> gold_ids;
  for (const auto& [id, label] : gold_rows) {
    if (!gold_ids.insert(id).second)
      throw ValidationError("duplicate gold id: " + id);
    auto it = pred_map.find(id);
    if (it == pred_map.end())
      throw ValidationError("missing prediction for id: " + id);
    golds.push_back(label);
    preds.push_back(it->second);
    auto ty = type_map.find(id);
    types.push_back(ty == type_map.end()
                        ? std::optional<std::string>{}
                        : std::optional<std::string>{ty->second});
  }
  if (pred_map.size() != gold_rows.size())
    throw ValidationError("predictions for unknown ids present");
  for (const auto& [id, tag] : type_map)
    if (!gold_ids.count(id))
      throw ValidationError("type tag for unknown id: " + id);

  ClsReport report = opt.types.empty() ? cls_metrics(preds, golds)
                                       : per_type_recall(preds, golds, types);
  std::cout << "TP = " << report.tp << ", FP = " << report.fp
            << ", FN = " << report.fn << ", TN = " << report.tn << '\n';
  std::cout << "Precision = " << pct1(report.precision) << '\n';
  std::cout << "Recall    = " << pct1(report.recall) << '\n';
  std::cout << "F1        = " << pct1(report.f1) << '\n';
  if (!report.per_type_recall.empty()) {
    std::cout << "Type recall:\n";
    for (const auto& [tag, recall] : report.per_type_recall)
      std::cout << tag << '\t' << pct1(recall) << "\t(support "
                << report.per_type_support.at(tag) << ")\n";
  }
  if (!opt.json.empty()) {
    nlohmann::ordered_json j;
    j["precision"] = report.precision;
    j["recall"] = report.recall;
    j["f1"] = report.f1;
    j["tp"] = report.tp;
    j["fp"] = report.fp;
    j["fn"] = report.fn;
    j["tn"] = report.tn;
    j["per_type_recall"] = report.per_type_recall;
    j["per_type_support"] = report.per_type_support;
    std::ofstream out = open_out(opt.json);
    out << j.dump(2) << '\n';
    finish_out(out, opt.json);
  }
}

// ------------------------------------------------------------------ stats

struct StatsOpts {
  std::string input;
  std::string mode = "labeled";
  bool detail = false;
};

void run_stats(const StatsOpts& opt) {
  auto rows = read_tsv2(opt.input);
  if (opt.mode == "labeled") {
    LabeledStats stats = labeled_stats(rows);
    std::cout << "#Line\tAvg.Length\tError Ratio\n";
    std::cout << stats.lines << '\t' << fmt1(stats.avg_length) << '\t'
              << pct1(stats.error_ratio) << "%\n";
    return;
  }
  PairStats stats = pair_stats(rows);
  std::cout << "#Line\tAvg.Length.S\tAvg.Length.T\tAvg.Edit";
  if (opt.detail) std::cout << "\tAvg.Edit.Char";
  std::cout << '\n';
  std::cout << stats.lines << '\t' << fmt1(stats.avg_length_src) << '\t'
            << fmt1(stats.avg_length_tgt) << '\t'
            << fmt1(stats.avg_edit_tokens);
  if (opt.detail) std::cout << '\t' << fmt1(stats.avg_edit_chars);
  std::cout << '\n';
}

// ------------------------------------------------------------------ probe

struct ProbeOpts {
  std::string examples;
  std::string conllu;
  std::string model;
  std::string report;
  double lr = 0.1;
  double l2 = 1e-4;
  std::size_t epochs = 50;
  std::size_t batch = 32;
  std::size_t vocab_cap = 50;
  std::uint64_t seed = 0;
  bool lenient = false;
};

void run_probe(const ProbeOpts& opt) {
  std::vector<DepTree> trees = load_trees(opt.conllu, opt.lenient);
  std::map<std::string, const DepTree*> by_id;
  for (std::size_t k = 0; k < trees.size(); ++k)
    if (!by_id.emplace(tree_id(trees[k], k), &trees[k]).second)
      throw ValidationError("duplicate sentence id: " + tree_id(trees[k], k));

  std::ifstream ex_in(opt.examples);
  if (!ex_in) throw IoError("cannot open " + opt.examples);
  std::vector<PairExample> examples = read_examples(ex_in);
  if (examples.empty()) throw ValidationError("no examples to train on");
  std::cerr << "seed = " << opt.seed << '\n';

  std::map<std::string, std::vector<const PairExample*>> by_task;
  for (const PairExample& ex : examples) by_task[ex.task].push_back(&ex);

  std::ostringstream tsv;
  tsv << "task\tlabel\tsupport\tcorrect\taccuracy\n";
  nlohmann::ordered_json model_json;
  for (const auto& [task, rows] : by_task) {
    std::vector<std::pair<std::string, std::string>> observed;
    std::vector<const DepTree*> row_trees;
    for (const PairExample* ex : rows) {
      auto it = by_id.find(ex->source_id);
      if (it == by_id.end())
        throw ValidationError("example references unknown sentence id: " +
                              ex->source_id);
      row_trees.push_back(it->second);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const DepTree& t = *row_trees[r];
      // same token resolution as featurize, for the vocabulary
      std::size_t i = 0, j = 0;
      for (const Token& tok : t.tokens()) {
        if (tok.span == rows[r]->span_i) i = tok.index;
        if (tok.span == rows[r]->span_j) j = tok.index;
      }
      if (i == 0 || j == 0)
        throw ValidationError("example span does not match any token");
      observed.push_back({t.token(i).upos, t.token(j).upos});
    }
    UposPairVocab vocab = UposPairVocab::build(observed, opt.vocab_cap);

    Eigen::MatrixXd features(
        static_cast<Eigen::Index>(rows.size()),
        static_cast<Eigen::Index>(kBaseFeatureCount + vocab.buckets()));
    std::vector<std::string> labels;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      features.row(static_cast<Eigen::Index>(r)) =
          featurize(*rows[r], *row_trees[r], vocab).transpose();
      labels.push_back(rows[r]->label);
    }

    TrainConfig cfg;
    cfg.lr = opt.lr;
    cfg.l2 = opt.l2;
    cfg.epochs = opt.epochs;
    cfg.batch = opt.batch;
    cfg.seed = opt.seed;
    TrainOutput trained = train(features, labels, cfg);

    std::map<std::string, std::pair<std::size_t, std::size_t>> per_label;
    std::size_t correct = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      Prediction pred = predict(
          trained.model,
          features.row(static_cast<Eigen::Index>(r)).transpose());
      auto& bucket = per_label[labels[r]];
      ++bucket.first;
      if (pred.label == labels[r]) {
        ++bucket.second;
        ++correct;
      }
    }
    for (const auto& [label, counts] : per_label)
      tsv << task << '\t' << label << '\t' << counts.first << '\t'
          << counts.second << '\t'
          << pct1(static_cast<double>(counts.second) /
                  static_cast<double>(counts.first))
          << '\n';
    tsv << task << "\t*\t" << rows.size() << '\t' << correct << '\t'
        << pct1(static_cast<double>(correct) /
                static_cast<double>(rows.size()))
        << '\n';
    std::cerr << task << ": loss " << trained.epoch_loss.front() << " -> "
              << trained.epoch_loss.back() << '\n';

    nlohmann::ordered_json entry;
    entry["model"] = trained.model.to_json();
    entry["vocab"] = vocab.to_json();
    model_json[task] = std::move(entry);
  }

  std::cout << tsv.str();
  if (!opt.report.empty()) {
    std::ofstream out = open_out(opt.report);
    out << tsv.str();
    finish_out(out, opt.report);
  }
  if (!opt.model.empty()) {
    std::ofstream out = open_out(opt.model);
    out << model_json.dump(2) << '\n';
    finish_out(out, opt.model);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corpus engineering and evaluation toolkit for Chinese "
               "semantic error diagnosis"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config");
  app.allow_config_extras(false);
  app.require_subcommand(1);

  IngestOpts ingest;
  auto* ingest_cmd =
      app.add_subcommand("ingest", "validate (and normalize) CoNLL-U input");
  ingest_cmd->add_option("--input", ingest.input, "CoNLL-U file")->required();
  ingest_cmd->add_option("--output", ingest.output,
                         "write normalized CoNLL-U here");
  ingest_cmd->add_flag("--lenient", ingest.lenient,
                       "skip malformed records instead of failing");
  ingest_cmd->callback([&] { run_ingest(ingest); });

  DedupOpts dedup;
  auto* dedup_cmd = app.add_subcommand(
      "dedup", "drop training sentences leaking into evaluation sets");
  dedup_cmd->add_option("--train", dedup.train, "training sentences, one per line")
      ->required();
  dedup_cmd
      ->add_option("--against", dedup.against,
                   "evaluation file, optionally name=path; repeatable")
      ->required();
  dedup_cmd->add_option("--gamma", dedup.gamma, "removal threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  dedup_cmd->add_option("--output", dedup.output,
                        "cleaned output (default <train>.kept)");
  dedup_cmd->add_option("--report", dedup.report,
                        "removed-hit TSV (default <train>.hits.tsv)");
  dedup_cmd->add_flag("--word-level", dedup.word_level,
                      "compare whitespace-separated words, not characters");
  dedup_cmd->add_option("--jobs", dedup.jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  dedup_cmd->callback([&] { run_dedup(dedup); });

  CorruptOpts corrupt;
  auto* corrupt_cmd = app.add_subcommand(
      "corrupt", "build pseudo error pairs from parsed correct sentences");
  corrupt_cmd->add_option("--input", corrupt.input, "CoNLL-U file")->required();
  corrupt_cmd->add_option("--output", corrupt.output, "JSONL records")
      ->required();
  corrupt_cmd->add_option("--tsv", corrupt.tsv,
                          "also write corrupted<TAB>source pairs");
  corrupt_cmd
      ->add_option("--weights", corrupt.weights,
                   "rule weights: adv_att,conjunction,drop_spo")
      ->delimiter(',')
      ->expected(3);
  corrupt_cmd->add_option("--rate", corrupt.rate, "selection probability")
      ->check(CLI::Range(std::nextafter(0.0, 1.0), 1.0))
      ->capture_default_str();
  corrupt_cmd->add_option("--seed", corrupt.seed, "RNG seed")
      ->capture_default_str();
  corrupt_cmd->add_option("--lexicon", corrupt.lexicon,
                          "conjunction lexicon, one word per line");
  corrupt_cmd->add_option("--jobs", corrupt.jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  corrupt_cmd->add_flag("--lenient", corrupt.lenient,
                        "skip malformed records instead of failing");
  corrupt_cmd->callback([&] { run_corrupt(corrupt); });

  SampleOpts sample;
  auto* sample_cmd = app.add_subcommand(
      "sample", "generate dependency pre-training examples");
  sample_cmd->add_option("--input", sample.input, "CoNLL-U file")->required();
  sample_cmd->add_option("--output", sample.output, "JSONL examples")
      ->required();
  sample_cmd
      ->add_option("--task", sample.task, "dsp, dsp+, drp, dsrp or dsrp+")
      ->check(CLI::IsMember({"dsp", "dsp+", "drp", "dsrp", "dsrp+"}))
      ->capture_default_str();
  sample_cmd
      ->add_option("--pairs-per-sentence", sample.pairs, "examples per task")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sample_cmd->add_option("--seed", sample.seed, "RNG seed")
      ->capture_default_str();
  sample_cmd->add_option("--relations", sample.relations,
                         "relation label file, one per line");
  sample_cmd
      ->add_option("--orientation", sample.orientation,
                   "child/parent reading of an arc")
      ->check(CLI::IsMember({"head-parent", "flipped"}))
      ->capture_default_str();
  sample_cmd->add_option("--jobs", sample.jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  sample_cmd->add_flag("--lenient", sample.lenient,
                       "skip malformed records instead of failing");
  sample_cmd->callback([&] { run_sample(sample); });

  auto* score_cmd =
      app.add_subcommand("score", "evaluate corrections or classifications");
  score_cmd->require_subcommand(1);

  ScoreM2Opts score_m2;
  auto* m2_cmd = score_cmd->add_subcommand(
      "m2", "MaxMatch scoring of corrections against M2 references");
  m2_cmd->add_option("--source", score_m2.source, "source sentences")
      ->required();
  m2_cmd->add_option("--hypothesis", score_m2.hypothesis, "system output")
      ->required();
  m2_cmd->add_option("--ref", score_m2.ref, "references in M2 format")
      ->required();
  m2_cmd->add_option("--beta", score_m2.beta, "F-measure beta")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  m2_cmd
      ->add_option("--max-unchanged", score_m2.max_unchanged,
                   "matched tokens a compound edit may span")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  m2_cmd->add_flag("--per-sentence-refs", score_m2.per_sentence_refs,
                   "pick references per sentence, not by cumulative F");
  m2_cmd->add_flag("--char-level", score_m2.char_level,
                   "score code points instead of tokens");
  m2_cmd->add_flag("--detail", score_m2.detail, "per-sentence counts");
  m2_cmd->add_option("--json", score_m2.json, "full-precision JSON report");
  m2_cmd->callback([&] { run_score_m2(score_m2); });

  ScoreClsOpts score_cls;
  auto* cls_cmd = score_cmd->add_subcommand(
      "cls", "precision/recall/F1 of the incorrect class");
  cls_cmd->add_option("--pred", score_cls.pred, "TSV: id<TAB>label")
      ->required();
  cls_cmd->add_option("--gold", score_cls.gold, "TSV: id<TAB>label")
      ->required();
  cls_cmd->add_option("--types", score_cls.types,
                      "TSV: id<TAB>error type (enables per-type recall)");
  cls_cmd->add_option("--json", score_cls.json, "full-precision JSON report");
  cls_cmd->callback([&] { run_score_cls(score_cls); });

  StatsOpts stats;
  auto* stats_cmd =
      app.add_subcommand("stats", "corpus tables for labeled or paired data");
  stats_cmd->add_option("--input", stats.input, "TSV input")->required();
  stats_cmd
      ->add_option("--mode", stats.mode,
                   "labeled: sentence<TAB>label; pairs: source<TAB>target")
      ->check(CLI::IsMember({"labeled", "pairs"}))
      ->capture_default_str();
  stats_cmd->add_flag("--detail", stats.detail,
                      "add the character-level edit column");
  stats_cmd->callback([&] { run_stats(stats); });

  ProbeOpts probe;
  auto* probe_cmd = app.add_subcommand(
      "probe", "train the logistic-regression sanity probe on examples");
  probe_cmd->add_option("--examples", probe.examples, "JSONL examples")
      ->required();
  probe_cmd->add_option("--conllu", probe.conllu, "trees the examples cite")
      ->required();
  probe_cmd->add_option("--model", probe.model, "save models as JSON");
  probe_cmd->add_option("--report", probe.report, "accuracy TSV");
  probe_cmd->add_option("--lr", probe.lr, "learning rate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  probe_cmd->add_option("--l2", probe.l2, "ridge penalty")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  probe_cmd->add_option("--epochs", probe.epochs, "training epochs")
      ->capture_default_str();
  probe_cmd->add_option("--batch", probe.batch, "mini-batch size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  probe_cmd->add_option("--vocab-cap", probe.vocab_cap, "upos pair buckets")
      ->capture_default_str();
  probe_cmd->add_option("--seed", probe.seed, "RNG seed")
      ->capture_default_str();
  probe_cmd->add_flag("--lenient", probe.lenient,
                      "skip malformed records instead of failing");
  probe_cmd->callback([&] { run_probe(probe); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const semkit::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const semkit::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
