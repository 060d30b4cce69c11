#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace semkit {

// A span replacement over source tokens; start == end marks an insertion
// point and an empty replacement marks a deletion.
struct Edit {
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<std::string> replacement;
  std::string type_tag;

  friend bool operator==(const Edit&, const Edit&) = default;
};

struct EditSet {
  std::vector<Edit> edits;  // sorted by (start, end), non-overlapping
  int annotator = 0;

  friend bool operator==(const EditSet&, const EditSet&) = default;
};

struct M2Record {
  std::vector<std::string> source_tokens;
  std::vector<EditSet> references;  // first-appearance order

  friend bool operator==(const M2Record&, const M2Record&) = default;
};

std::vector<std::string> split_tokens(std::string_view line);
// One token per code point, for segmentation-free comparison.
std::vector<std::string> char_tokens(std::string_view line);

// Enforces bounds, (start, end) strictly increasing, no overlap, and no
// degenerate zero-width empty edits.
void validate_edits(const std::vector<Edit>& edits, std::size_t source_len);

enum class AlignOp : unsigned char { kMatch, kSub, kDel, kIns };

// Unit-cost token alignment with a pinned traceback preference
// (match, substitution, deletion, insertion) for determinism.
std::vector<AlignOp> align_tokens(const std::vector<std::string>& src,
                                  const std::vector<std::string>& tgt);

EditSet extract_edits(const std::vector<std::string>& src,
                      const std::vector<std::string>& tgt);
std::vector<std::string> apply_edits(const std::vector<std::string>& src,
                                     const EditSet& set);

using TokenPair = std::pair<std::vector<std::string>, std::vector<std::string>>;
double avg_edit_stat(const std::vector<TokenPair>& pairs);

std::vector<M2Record> read_m2(std::istream& in);
void write_m2(const std::vector<M2Record>& records, std::ostream& out);
std::string write_m2(const std::vector<M2Record>& records);

}  // namespace semkit
