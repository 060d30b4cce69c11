#include "semkit/edits.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "semkit/errors.hpp"
#include "semkit/utf8.hpp"

namespace semkit {

std::vector<std::string> split_tokens(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<std::string> char_tokens(std::string_view line) {
  std::u32string cps = utf8::decode(line);
  std::vector<std::string> out;
  out.reserve(cps.size());
  for (char32_t cp : cps) {
    std::string t;
    utf8::append(t, cp);
    out.push_back(std::move(t));
  }
  return out;
}

void validate_edits(const std::vector<Edit>& edits, std::size_t source_len) {
  const Edit* prev = nullptr;
  for (const Edit& e : edits) {
    if (e.start > e.end)
      throw ValidationError("edit start exceeds end");
    if (e.end > source_len)
      throw ValidationError("edit span exceeds source length");
    if (e.start == e.end && e.replacement.empty())
      throw ValidationError("zero-width edit with empty replacement");
    if (prev != nullptr) {
      if (std::tie(prev->start, prev->end) >= std::tie(e.start, e.end))
        throw ValidationError("edits not strictly sorted by span");
      if (prev->end > e.start) throw ValidationError("overlapping edits");
    }
    prev = &e;
  }
}

std::vector<AlignOp> align_tokens(const std::vector<std::string>& src,
                                  const std::vector<std::string>& tgt) {
  std::size_t n = src.size(), m = tgt.size();
  std::vector<std::vector<std::size_t>> cost(n + 1,
                                             std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) cost[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) cost[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t diag = cost[i - 1][j - 1] + (src[i - 1] == tgt[j - 1] ? 0 : 1);
      cost[i][j] = std::min({diag, cost[i - 1][j] + 1, cost[i][j - 1] + 1});
    }
  }
  std::vector<AlignOp> ops;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && src[i - 1] == tgt[j - 1] &&
        cost[i][j] == cost[i - 1][j - 1]) {
      ops.push_back(AlignOp::kMatch);
      --i, --j;
    } else if (i > 0 && j > 0 && cost[i][j] == cost[i - 1][j - 1] + 1) {
      ops.push_back(AlignOp::kSub);
      --i, --j;
    } else if (i > 0 && cost[i][j] == cost[i - 1][j] + 1) {
      ops.push_back(AlignOp::kDel);
      --i;
    } else {
      ops.push_back(AlignOp::kIns);
      --j;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

EditSet extract_edits(const std::vector<std::string>& src,
                      const std::vector<std::string>& tgt) {
  EditSet set;
  std::size_t spos = 0, tpos = 0;
  bool in_run = false;
  std::size_t run_s = 0, run_t = 0;
  auto flush = [&]() {
    if (!in_run) return;
    Edit e;
    e.start = run_s;
    e.end = spos;
    e.replacement.assign(tgt.begin() + static_cast<std::ptrdiff_t>(run_t),
                         tgt.begin() + static_cast<std::ptrdiff_t>(tpos));
    set.edits.push_back(std::move(e));
    in_run = false;
  };
  for (AlignOp op : align_tokens(src, tgt)) {
    if (op == AlignOp::kMatch) {
      flush();
      ++spos, ++tpos;
      continue;
    }
    if (!in_run) {
      in_run = true;
      run_s = spos;
      run_t = tpos;
    }
    if (op == AlignOp::kSub) ++spos, ++tpos;
    else if (op == AlignOp::kDel) ++spos;
    else ++tpos;
  }
  flush();
  return set;
}

std::vector<std::string> apply_edits(const std::vector<std::string>& src,
                                     const EditSet& set) {
  validate_edits(set.edits, src.size());
  std::vector<std::string> out = src;
  for (auto it = set.edits.rbegin(); it != set.edits.rend(); ++it) {
    auto begin = out.begin() + static_cast<std::ptrdiff_t>(it->start);
    out.erase(begin, out.begin() + static_cast<std::ptrdiff_t>(it->end));
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(it->start),
               it->replacement.begin(), it->replacement.end());
  }
  return out;
}

double avg_edit_stat(const std::vector<TokenPair>& pairs) {
  if (pairs.empty()) throw ValidationError("no pairs to average over");
  std::size_t total = 0;
  for (const auto& [src, tgt] : pairs) total += extract_edits(src, tgt).edits.size();
  return static_cast<double>(total) / static_cast<double>(pairs.size());
}

namespace {

constexpr std::string_view kNone = "-NONE-";

std::vector<std::string> split_pipes(const std::string& s) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find("|||", pos);
    if (next == std::string::npos) {
      fields.push_back(s.substr(pos));
      return fields;
    }
    fields.push_back(s.substr(pos, next - pos));
    pos = next + 3;
  }
}

long long parse_int(const std::string& s, std::size_t line, const char* what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, std::string("bad ") + what + ": '" + s + "'");
  }
}

struct PendingRecord {
  bool has_source = false;
  std::vector<std::string> source_tokens;
  std::vector<int> annotator_order;
  std::map<int, std::vector<Edit>> edits_by_annotator;
  std::vector<int> noop_annotators;
};

void finish(PendingRecord& rec, std::vector<M2Record>& out, std::size_t line) {
  if (!rec.has_source) throw ParseError(line, "annotation without S line");
  M2Record record;
  record.source_tokens = std::move(rec.source_tokens);
  for (int annotator : rec.annotator_order) {
    EditSet set;
    set.annotator = annotator;
    set.edits = std::move(rec.edits_by_annotator[annotator]);
    std::sort(set.edits.begin(), set.edits.end(),
              [](const Edit& a, const Edit& b) {
                return std::tie(a.start, a.end) < std::tie(b.start, b.end);
              });
    try {
      validate_edits(set.edits, record.source_tokens.size());
    } catch (const ValidationError& err) {
      throw ParseError(line, std::string("annotator ") +
                                 std::to_string(annotator) + ": " + err.what());
    }
    record.references.push_back(std::move(set));
  }
  if (record.references.empty())
    record.references.push_back(EditSet{});  // annotator 0, no edits
  out.push_back(std::move(record));
  rec = PendingRecord{};
}

}  // namespace

std::vector<M2Record> read_m2(std::istream& in) {
  std::vector<M2Record> records;
  PendingRecord rec;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (rec.has_source) finish(rec, records, lineno);
      continue;
    }
    if (line.rfind("S ", 0) == 0 || line == "S") {
      if (rec.has_source) finish(rec, records, lineno);
      rec.has_source = true;
      rec.source_tokens = split_tokens(std::string_view(line).substr(1));
      continue;
    }
    if (line.rfind("A ", 0) != 0)
      throw ParseError(lineno, "expected S, A or blank line");

    auto fields = split_pipes(line.substr(2));
    if (fields.size() != 6)
      throw ParseError(lineno, "annotation needs 6 |||-separated fields");
    auto span_parts = split_tokens(fields[0]);
    if (span_parts.size() != 2)
      throw ParseError(lineno, "annotation span needs two offsets");
    long long start = parse_int(span_parts[0], lineno, "start offset");
    long long end = parse_int(span_parts[1], lineno, "end offset");
    if (fields[3] != "REQUIRED")
      throw ParseError(lineno, "expected REQUIRED field");
    if (fields[4] != kNone)
      throw ParseError(lineno, "expected -NONE- field");
    int annotator =
        static_cast<int>(parse_int(fields[5], lineno, "annotator id"));
    if (annotator < 0) throw ParseError(lineno, "negative annotator id");

    if (!rec.has_source) throw ParseError(lineno, "annotation without S line");
    auto it = rec.edits_by_annotator.find(annotator);
    if (it == rec.edits_by_annotator.end()) {
      rec.annotator_order.push_back(annotator);
      it = rec.edits_by_annotator.emplace(annotator, std::vector<Edit>{}).first;
    }

    if (start == -1 && end == -1) {  // explicit no-edit reference
      if (fields[1] != "noop" || fields[2] != kNone)
        throw ParseError(lineno, "malformed noop annotation");
      if (!it->second.empty())
        throw ParseError(lineno, "noop next to real edits");
      rec.noop_annotators.push_back(annotator);
      continue;
    }
    if (std::find(rec.noop_annotators.begin(), rec.noop_annotators.end(),
                  annotator) != rec.noop_annotators.end())
      throw ParseError(lineno, "real edit next to a noop");
    if (start < 0 || end < 0)
      throw ParseError(lineno, "negative offset outside noop");

    Edit e;
    e.start = static_cast<std::size_t>(start);
    e.end = static_cast<std::size_t>(end);
    e.type_tag = fields[1];
    if (fields[2] != kNone) e.replacement = split_tokens(fields[2]);
    it->second.push_back(std::move(e));
  }
  if (rec.has_source) finish(rec, records, lineno);
  return records;
}

void write_m2(const std::vector<M2Record>& records, std::ostream& out) {
  for (const M2Record& record : records) {
    out << 'S';
    for (const auto& tok : record.source_tokens) {
      if (tok.empty() || tok.find_first_of(" \t\n") != std::string::npos)
        throw ValidationError("source token unserializable: '" + tok + "'");
      out << ' ' << tok;
    }
    out << '\n';
    if (record.references.empty())
      throw ValidationError("record without references");
    for (const EditSet& set : record.references) {
      if (set.edits.empty()) {
        out << "A -1 -1|||noop|||" << kNone << "|||REQUIRED|||" << kNone
            << "|||" << set.annotator << '\n';
        continue;
      }
      validate_edits(set.edits, record.source_tokens.size());
      for (const Edit& e : set.edits) {
        std::string repl;
        for (std::size_t k = 0; k < e.replacement.size(); ++k) {
          const std::string& tok = e.replacement[k];
          if (tok.empty() || tok.find_first_of(" \t\n") != std::string::npos ||
              tok.find("|||") != std::string::npos)
            throw ValidationError("replacement token unserializable: '" + tok +
                                  "'");
          if (k > 0) repl += ' ';
          repl += tok;
        }
        if (e.replacement.empty()) repl = kNone;
        const std::string& type = e.type_tag.empty() ? "UNK" : e.type_tag;
        if (type.find("|||") != std::string::npos ||
            type.find('\n') != std::string::npos)
          throw ValidationError("type tag unserializable: '" + type + "'");
        out << "A " << e.start << ' ' << e.end << "|||" << type << "|||"
            << repl << "|||REQUIRED|||" << kNone << "|||" << set.annotator
            << '\n';
      }
    }
    out << '\n';
  }
}

std::string write_m2(const std::vector<M2Record>& records) {
  std::ostringstream out;
  write_m2(records, out);
  return out.str();
}

}  // namespace semkit
