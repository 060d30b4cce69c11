#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semkit/errors.hpp"

namespace semkit {

// Code-point offsets into a sentence, end exclusive.
struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

// One word of a parsed sentence, carrying the ten CoNLL-U columns verbatim
// plus its code-point span in the sentence text.
struct Token {
  std::size_t index = 0;  // 1-based position
  std::string form;
  std::string lemma = "_";
  std::string upos = "_";
  std::string xpos = "_";
  std::string feats = "_";
  std::size_t head = 0;  // 0 = root
  std::string deprel = "_";
  std::string deps = "_";
  std::string misc = "_";
  CharSpan span;
};

enum class Relationship { kChild, kParent, kOthers };

// Arrow convention for child/parent. The default reads head(i) = j as
// "i is the child of j"; kFlipped inverts the two labels globally.
enum class Orientation { kHeadIsParent, kFlipped };

std::string_view to_string(Relationship r);

// Validated dependency tree: exactly one root, acyclic head links, and token
// spans that tile the sentence text (allowing inter-token whitespace).
class DepTree {
 public:
  DepTree(std::string text, std::vector<Token> tokens,
          std::vector<std::string> comments = {});

  const std::string& text() const { return text_; }
  const std::u32string& text32() const { return text32_; }
  const std::vector<Token>& tokens() const { return tokens_; }
  const std::vector<std::string>& comments() const { return comments_; }
  std::size_t size() const { return tokens_.size(); }

  // 1-based access; throws std::out_of_range.
  const Token& token(std::size_t index) const;

  std::size_t root() const { return root_; }
  const std::vector<std::size_t>& children(std::size_t index) const;

  // Value of a "# sent_id = ..." comment, if any.
  std::optional<std::string> sent_id() const;

 private:
  std::string text_;
  std::u32string text32_;
  std::vector<Token> tokens_;
  std::vector<std::string> comments_;
  std::size_t root_ = 0;
  std::vector<std::vector<std::size_t>> children_;  // children_[0] unused
};

// Undirected path length between tokens i and j.
std::size_t tree_distance(const DepTree& t, std::size_t i, std::size_t j);

// child if i is governed by j, parent if j is governed by i, others for every
// pair at distance > 1 (siblings, grandparents, ...). i == j is an error.
Relationship relationship(const DepTree& t, std::size_t i, std::size_t j,
                          Orientation orientation = Orientation::kHeadIsParent);

// Label of the arc joining i and j, in either direction; nullopt when the
// pair is not directly linked.
std::optional<std::string> relation_label(const DepTree& t, std::size_t i,
                                          std::size_t j);

struct SubtreeSpan {
  std::vector<std::size_t> indices;  // sorted token indices, includes the root
  CharSpan span;                     // hull over the member token spans
  bool contiguous = false;           // member positions form a gap-free range
};

SubtreeSpan subtree_span(const DepTree& t, std::size_t i);

struct SpoRoles {
  std::optional<std::size_t> subject;
  std::size_t predicate = 0;
  std::optional<std::size_t> object;
};

// predicate = root token; subject/object = leftmost SBV/VOB dependents of the
// predicate when present.
SpoRoles find_spo(const DepTree& t);

enum class ModifierKind { kAdverbial, kAttribute };

struct Modifier {
  ModifierKind kind;
  std::size_t index;  // subtree root of the modifier

  friend bool operator==(const Modifier&, const Modifier&) = default;
};

// ADV dependents of verbs and ATT dependents of nouns, in token order.
std::vector<Modifier> find_modifiers(const DepTree& t);

// POS heuristics over the upos column; accept both LTP-style lowercase tags
// ("v", "n", "nh", ...) and UD uppercase names.
bool verb_like(const Token& token);
bool noun_like(const Token& token);

}  // namespace semkit
