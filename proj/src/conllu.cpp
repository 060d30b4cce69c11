#include "semkit/conllu.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "semkit/errors.hpp"
#include "semkit/utf8.hpp"

namespace semkit {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      cols.push_back(line.substr(start));
      return cols;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::size_t parse_index(const std::string& s, std::size_t line_no,
                        const char* what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(line_no, std::string("non-integer ") + what + " '" + s +
                                  "'");
  }
  return value;
}

struct RawRecord {
  std::vector<std::string> comments;
  std::vector<Token> tokens;
  std::size_t first_line = 0;
};

// Assign token char spans. With a "# text" comment the forms are aligned
// against it, tolerating whitespace between tokens; without one the sentence
// is the plain concatenation of the forms (the normal case for Chinese).
std::string assign_spans(RawRecord& rec) {
  std::string text;
  bool have_text = false;
  for (const std::string& c : rec.comments) {
    std::string_view v(c);
    if (v.substr(0, 1) == "#") v.remove_prefix(1);
    while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
    if (v.substr(0, 4) == "text" &&
        (v.size() == 4 || v[4] == ' ' || v[4] == '=')) {
      v.remove_prefix(4);
      while (!v.empty() && (v.front() == ' ' || v.front() == '=')) {
        v.remove_prefix(1);
      }
      text = std::string(v);
      have_text = true;
      break;
    }
  }

  if (!have_text) {
    std::size_t cursor = 0;
    for (Token& tok : rec.tokens) {
      std::size_t len = utf8::length(tok.form);
      tok.span = {cursor, cursor + len};
      cursor += len;
      text += tok.form;
    }
    return text;
  }

  std::u32string text32 = utf8::decode(text);
  std::size_t cursor = 0;
  for (Token& tok : rec.tokens) {
    while (cursor < text32.size() &&
           (text32[cursor] == U' ' || text32[cursor] == U'\t')) {
      ++cursor;
    }
    std::u32string form32 = utf8::decode(tok.form);
    if (text32.compare(cursor, form32.size(), form32) != 0) {
      throw ParseError(rec.first_line,
                       "token '" + tok.form + "' does not match # text");
    }
    tok.span = {cursor, cursor + form32.size()};
    cursor += form32.size();
  }
  return text;
}

DepTree finish_record(RawRecord& rec) {
  std::string text = assign_spans(rec);
  try {
    return DepTree(std::move(text), std::move(rec.tokens),
                   std::move(rec.comments));
  } catch (const ValidationError& e) {
    throw ParseError(rec.first_line, e.what());
  }
}

}  // namespace

std::vector<DepTree> parse_conllu(std::istream& in,
                                  const ConlluOptions& options,
                                  std::vector<std::string>* warnings) {
  std::vector<DepTree> trees;
  RawRecord rec;
  bool in_record = false;
  bool record_bad = false;
  std::string bad_reason;
  std::size_t line_no = 0;
  std::string line;

  auto flush = [&]() {
    if (!in_record) return;
    if (!record_bad && rec.tokens.empty() && !rec.comments.empty()) {
      record_bad = true;
      bad_reason = "line " + std::to_string(rec.first_line) +
                   ": comment-only record";
    }
    if (record_bad) {
      if (!options.lenient) throw ParseError(rec.first_line, bad_reason);
      if (warnings) warnings->push_back("skipped record: " + bad_reason);
    } else {
      try {
        trees.push_back(finish_record(rec));
      } catch (const ParseError& e) {
        if (!options.lenient) throw;
        if (warnings) {
          warnings->push_back(std::string("skipped record: ") + e.what());
        }
      }
    }
    rec = RawRecord{};
    in_record = false;
    record_bad = false;
    bad_reason.clear();
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (!in_record) {
      in_record = true;
      rec.first_line = line_no;
    }
    if (line[0] == '#') {
      rec.comments.push_back(line);
      continue;
    }
    if (record_bad) continue;  // already doomed; swallow the rest quietly
    try {
      std::vector<std::string> cols = split_tabs(line);
      if (cols.size() != 10) {
        throw ParseError(line_no, "expected 10 columns, got " +
                                      std::to_string(cols.size()));
      }
      Token tok;
      tok.index = parse_index(cols[0], line_no, "id");
      if (tok.index != rec.tokens.size() + 1) {
        throw ParseError(line_no, "id " + cols[0] + " out of sequence");
      }
      tok.form = cols[1];
      tok.lemma = cols[2];
      tok.upos = cols[3];
      tok.xpos = cols[4];
      tok.feats = cols[5];
      tok.head = parse_index(cols[6], line_no, "head");
      tok.deprel = cols[7];
      tok.deps = cols[8];
      tok.misc = cols[9];
      if (tok.form.empty()) throw ParseError(line_no, "empty form");
      rec.tokens.push_back(std::move(tok));
    } catch (const ParseError& e) {
      record_bad = true;
      bad_reason = e.what();
    }
  }
  flush();
  return trees;
}

std::vector<DepTree> parse_conllu_text(const std::string& text,
                                       const ConlluOptions& options,
                                       std::vector<std::string>* warnings) {
  std::istringstream in(text);
  return parse_conllu(in, options, warnings);
}

void serialize_conllu(const std::vector<DepTree>& trees, std::ostream& out) {
  for (const DepTree& tree : trees) {
    for (const std::string& c : tree.comments()) out << c << '\n';
    for (const Token& tok : tree.tokens()) {
      out << tok.index << '\t' << tok.form << '\t' << tok.lemma << '\t'
          << tok.upos << '\t' << tok.xpos << '\t' << tok.feats << '\t'
          << tok.head << '\t' << tok.deprel << '\t' << tok.deps << '\t'
          << tok.misc << '\n';
    }
    out << '\n';
  }
}

std::string serialize_conllu(const std::vector<DepTree>& trees) {
  std::ostringstream out;
  serialize_conllu(trees, out);
  return out.str();
}

}  // namespace semkit
