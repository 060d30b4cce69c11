#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "semkit/deptree.hpp"

namespace semkit {

struct ConlluOptions {
  // Skip malformed records (logging one message each) instead of failing the
  // whole stream on the first bad record.
  bool lenient = false;
};

// Blank-line-separated records of 10 tab-separated columns, '#' comments
// preserved. Token spans are aligned against a "# text = ..." comment when
// present (whitespace gaps allowed); otherwise the sentence text is the
// direct concatenation of the token forms.
std::vector<DepTree> parse_conllu(std::istream& in,
                                  const ConlluOptions& options = {},
                                  std::vector<std::string>* warnings = nullptr);

std::vector<DepTree> parse_conllu_text(const std::string& text,
                                       const ConlluOptions& options = {},
                                       std::vector<std::string>* warnings = nullptr);

void serialize_conllu(const std::vector<DepTree>& trees, std::ostream& out);
std::string serialize_conllu(const std::vector<DepTree>& trees);

}  // namespace semkit
