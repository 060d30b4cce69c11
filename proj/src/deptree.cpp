#include "semkit/deptree.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "semkit/utf8.hpp"

namespace semkit {

std::string_view to_string(Relationship r) {
  switch (r) {
    case Relationship::kChild:
      return "child";
    case Relationship::kParent:
      return "parent";
    case Relationship::kOthers:
      return "others";
  }
  return "others";
}

DepTree::DepTree(std::string text, std::vector<Token> tokens,
                 std::vector<std::string> comments)
    : text_(std::move(text)),
      tokens_(std::move(tokens)),
      comments_(std::move(comments)) {
  text32_ = utf8::decode(text_);
  const std::size_t n = tokens_.size();
  if (n == 0) throw ValidationError("empty tree");

  children_.assign(n + 1, {});
  std::size_t root_count = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const Token& tok = tokens_[k];
    if (tok.index != k + 1) {
      throw ValidationError("token index " + std::to_string(tok.index) +
                            " out of sequence");
    }
    if (tok.head > n) {
      throw ValidationError("head " + std::to_string(tok.head) +
                            " out of range for " + std::to_string(n) +
                            " tokens");
    }
    if (tok.head == tok.index) {
      throw ValidationError("token " + std::to_string(tok.index) +
                            " is its own head");
    }
    if (tok.head == 0) {
      root_ = tok.index;
      ++root_count;
    } else {
      children_[tok.head].push_back(tok.index);
    }
  }
  if (root_count != 1) {
    throw ValidationError(root_count == 0 ? "tree has no root"
                                          : "tree has multiple roots");
  }

  // acyclic: following head links from any token must reach 0 within n steps
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t cur = tokens_[k].head;
    std::size_t steps = 0;
    while (cur != 0) {
      if (++steps > n) {
        throw ValidationError("cycle through token " +
                              std::to_string(k + 1));
      }
      cur = tokens_[cur - 1].head;
    }
  }

  // spans tile the text: strictly increasing, gaps are whitespace only
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const CharSpan& s = tokens_[k].span;
    if (s.begin < cursor || s.end < s.begin || s.end > text32_.size()) {
      throw ValidationError("token span out of order at token " +
                            std::to_string(k + 1));
    }
    std::u32string form32 = utf8::decode(tokens_[k].form);
    if (text32_.compare(s.begin, s.end - s.begin, form32) != 0) {
      throw ValidationError("token form does not match text at token " +
                            std::to_string(k + 1));
    }
    for (std::size_t p = cursor; p < s.begin; ++p) {
      if (text32_[p] != U' ' && text32_[p] != U'\t') {
        throw ValidationError("non-whitespace gap before token " +
                              std::to_string(k + 1));
      }
    }
    cursor = s.end;
  }
  for (std::size_t p = cursor; p < text32_.size(); ++p) {
    if (text32_[p] != U' ' && text32_[p] != U'\t') {
      throw ValidationError("non-whitespace text after the last token");
    }
  }
}

const Token& DepTree::token(std::size_t index) const {
  if (index == 0 || index > tokens_.size()) {
    throw std::out_of_range("token index " + std::to_string(index));
  }
  return tokens_[index - 1];
}

const std::vector<std::size_t>& DepTree::children(std::size_t index) const {
  if (index == 0 || index > tokens_.size()) {
    throw std::out_of_range("token index " + std::to_string(index));
  }
  return children_[index];
}

std::optional<std::string> DepTree::sent_id() const {
  for (const std::string& c : comments_) {
    std::string_view v(c);
    if (v.substr(0, 1) == "#") v.remove_prefix(1);
    while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
    if (v.substr(0, 7) != "sent_id") continue;
    v.remove_prefix(7);
    while (!v.empty() && (v.front() == ' ' || v.front() == '=')) {
      v.remove_prefix(1);
    }
    return std::string(v);
  }
  return std::nullopt;
}

namespace {

void check_index(const DepTree& t, std::size_t i) {
  if (i == 0 || i > t.size()) {
    throw std::out_of_range("token index " + std::to_string(i));
  }
}

// depth of every token below the virtual root, and the head chain
std::size_t depth_of(const DepTree& t, std::size_t i) {
  std::size_t d = 0;
  while (i != 0) {
    i = t.token(i).head;
    ++d;
  }
  return d;
}

}  // namespace

std::size_t tree_distance(const DepTree& t, std::size_t i, std::size_t j) {
  check_index(t, i);
  check_index(t, j);
  if (i == j) return 0;
  // walk both tokens up to their lowest common ancestor
  std::size_t di = depth_of(t, i);
  std::size_t dj = depth_of(t, j);
  std::size_t a = i, b = j, dist = 0;
  while (di > dj) {
    a = t.token(a).head;
    --di;
    ++dist;
  }
  while (dj > di) {
    b = t.token(b).head;
    --dj;
    ++dist;
  }
  while (a != b) {
    a = t.token(a).head;
    b = t.token(b).head;
    dist += 2;
  }
  return dist;
}

Relationship relationship(const DepTree& t, std::size_t i, std::size_t j,
                          Orientation orientation) {
  check_index(t, i);
  check_index(t, j);
  if (i == j) throw ValidationError("relationship requires i != j");
  Relationship r = Relationship::kOthers;
  if (t.token(i).head == j) {
    r = Relationship::kChild;
  } else if (t.token(j).head == i) {
    r = Relationship::kParent;
  }
  if (orientation == Orientation::kFlipped && r != Relationship::kOthers) {
    r = (r == Relationship::kChild) ? Relationship::kParent
                                    : Relationship::kChild;
  }
  return r;
}

std::optional<std::string> relation_label(const DepTree& t, std::size_t i,
                                          std::size_t j) {
  check_index(t, i);
  check_index(t, j);
  if (t.token(i).head == j) return t.token(i).deprel;
  if (t.token(j).head == i) return t.token(j).deprel;
  return std::nullopt;
}

SubtreeSpan subtree_span(const DepTree& t, std::size_t i) {
  check_index(t, i);
  SubtreeSpan result;
  std::deque<std::size_t> queue{i};
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    result.indices.push_back(cur);
    for (std::size_t c : t.children(cur)) queue.push_back(c);
  }
  std::sort(result.indices.begin(), result.indices.end());
  result.span.begin = t.token(result.indices.front()).span.begin;
  result.span.end = t.token(result.indices.back()).span.end;
  result.contiguous = result.indices.back() - result.indices.front() + 1 ==
                      result.indices.size();
  return result;
}

SpoRoles find_spo(const DepTree& t) {
  SpoRoles roles;
  roles.predicate = t.root();
  for (std::size_t c : t.children(roles.predicate)) {
    const Token& tok = t.token(c);
    if (tok.deprel == "SBV" && (!roles.subject || c < *roles.subject)) {
      roles.subject = c;
    }
    if (tok.deprel == "VOB" && (!roles.object || c < *roles.object)) {
      roles.object = c;
    }
  }
  return roles;
}

std::vector<Modifier> find_modifiers(const DepTree& t) {
  std::vector<Modifier> out;
  for (const Token& tok : t.tokens()) {
    if (tok.head == 0) continue;
    const Token& head = t.token(tok.head);
    if (tok.deprel == "ADV" && verb_like(head)) {
      out.push_back({ModifierKind::kAdverbial, tok.index});
    } else if (tok.deprel == "ATT" && noun_like(head)) {
      out.push_back({ModifierKind::kAttribute, tok.index});
    }
  }
  return out;
}

bool verb_like(const Token& token) {
  const std::string& u = token.upos;
  if (u.empty()) return false;
  return u[0] == 'v' || u == "VERB" || u == "AUX";
}

bool noun_like(const Token& token) {
  const std::string& u = token.upos;
  if (u.empty()) return false;
  return u[0] == 'n' || u == "NOUN" || u == "PROPN" || u == "PRON" ||
         u == "r";  // LTP pronouns
}

}  // namespace semkit
