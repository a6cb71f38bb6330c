#pragma once

// Formulas of the multi-agent epistemic language: atoms, negation,
// conjunction and the knowledge operator K<agent>. Disjunction, implication
// and equivalence are accepted by the parser and desugared immediately.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cellkit/error.hpp"

namespace cellkit {

enum class FormulaKind { atom, negation, conjunction, knowledge };

/// Immutable formula tree. Copies share structure; equality is structural.
class Formula {
 public:
  struct Node {
    FormulaKind kind;
    std::string name;  // atom name, or agent name for knowledge
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
  };

  static Formula atom(std::string name) {
    return Formula(std::make_shared<const Node>(Node{FormulaKind::atom, std::move(name), {}, {}}));
  }
  static Formula negation(const Formula& child) {
    return Formula(std::make_shared<const Node>(Node{FormulaKind::negation, {}, child.node_, {}}));
  }
  static Formula conjunction(const Formula& left, const Formula& right) {
    return Formula(
        std::make_shared<const Node>(Node{FormulaKind::conjunction, {}, left.node_, right.node_}));
  }
  static Formula knows(std::string agent, const Formula& child) {
    return Formula(
        std::make_shared<const Node>(Node{FormulaKind::knowledge, std::move(agent), child.node_, {}}));
  }

  // Sugar, expressed in the four core constructors.
  static Formula disjunction(const Formula& f, const Formula& g) {
    return negation(conjunction(negation(f), negation(g)));
  }
  static Formula implication(const Formula& f, const Formula& g) {
    return negation(conjunction(f, negation(g)));
  }
  static Formula equivalence(const Formula& f, const Formula& g) {
    return conjunction(implication(f, g), implication(g, f));
  }

  FormulaKind kind() const { return node_->kind; }
  /// Atom name for atoms, agent name for knowledge nodes, empty otherwise.
  const std::string& name() const { return node_->name; }
  /// Sole child of negation/knowledge, left child of conjunction.
  Formula child() const { return Formula(node_->left); }
  Formula left() const { return Formula(node_->left); }
  Formula right() const { return Formula(node_->right); }

  /// Identity of the underlying node; shared subformulas have the same id.
  const Node* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b) { return equal(a.node_.get(), b.node_.get()); }

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (a->kind != b->kind || a->name != b->name) return false;
    switch (a->kind) {
      case FormulaKind::atom:
        return true;
      case FormulaKind::negation:
      case FormulaKind::knowledge:
        return equal(a->left.get(), b->left.get());
      case FormulaKind::conjunction:
        return equal(a->left.get(), b->left.get()) && equal(a->right.get(), b->right.get());
    }
    return false;
  }

  std::shared_ptr<const Node> node_;
};

/// Atom and agent names a parse is checked against.
struct Vocabulary {
  std::vector<std::string> atoms;
  std::vector<std::string> agents;
};

namespace detail {

inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const Vocabulary* vocabulary) : text_(text), vocabulary_(vocabulary) {}

  Formula parse() {
    Formula f = parse_iff();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  std::string_view peek_ident() {
    skip_space();
    std::size_t end = pos_;
    while (end < text_.size() && is_ident_char(text_[end])) ++end;
    return text_.substr(pos_, end - pos_);
  }

  // True if a unary formula can start at the current position.
  bool at_unary_start() {
    skip_space();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return c == '~' || c == '(' || is_ident_char(c);
  }

  Formula parse_iff() {
    Formula f = parse_imp();
    if (accept("<->")) return Formula::equivalence(f, parse_iff());
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    // "<->" must not be mistaken for "-" ">" but the tokens do not overlap.
    if (accept("->")) return Formula::implication(f, parse_imp());
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept("|")) f = Formula::disjunction(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (accept("&")) f = Formula::conjunction(f, parse_unary());
    return f;
  }

  Formula parse_unary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of formula");
    if (accept("~")) return Formula::negation(parse_unary());
    if (accept("(")) {
      Formula f = parse_iff();
      if (!accept(")")) fail("expected ')'");
      return f;
    }
    std::size_t start = pos_;
    std::string_view ident = peek_ident();
    if (ident.empty()) fail("expected formula");
    pos_ += ident.size();

    // An identifier starting with K is the knowledge operator when a formula
    // follows it; otherwise it is an ordinary atom.
    if (ident.front() == 'K') {
      std::size_t after = pos_;
      std::string agent(ident.substr(1));
      if (agent.empty()) {
        std::string_view next = peek_ident();
        if (!next.empty()) {
          pos_ += next.size();
          if (at_unary_start()) {
            agent = std::string(next);
            check_agent(agent, start);
            return Formula::knows(std::move(agent), parse_unary());
          }
        }
        pos_ = after;
      } else if (at_unary_start()) {
        check_agent(agent, start);
        return Formula::knows(std::move(agent), parse_unary());
      }
      pos_ = after;
    }
    std::string atom(ident);
    if (vocabulary_ != nullptr &&
        std::find(vocabulary_->atoms.begin(), vocabulary_->atoms.end(), atom) == vocabulary_->atoms.end()) {
      throw ParseError("unknown atom '" + atom + "'", start);
    }
    return Formula::atom(std::move(atom));
  }

  void check_agent(const std::string& agent, std::size_t at) const {
    if (vocabulary_ != nullptr &&
        std::find(vocabulary_->agents.begin(), vocabulary_->agents.end(), agent) == vocabulary_->agents.end()) {
      throw ParseError("unknown agent '" + agent + "'", at);
    }
  }

  std::string_view text_;
  const Vocabulary* vocabulary_;
  std::size_t pos_ = 0;
};

inline void render_to(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::atom:
      out += f.name();
      return;
    case FormulaKind::negation:
      out += "(~";
      render_to(f.child(), out);
      out += ')';
      return;
    case FormulaKind::conjunction:
      out += '(';
      render_to(f.left(), out);
      out += " & ";
      render_to(f.right(), out);
      out += ')';
      return;
    case FormulaKind::knowledge:
      out += "(K";
      out += f.name();
      out += ' ';
      render_to(f.child(), out);
      out += ')';
      return;
  }
}

}  // namespace detail

/// Parses `text`. With a vocabulary, unknown atoms and agents are rejected.
inline Formula parse_formula(std::string_view text, const Vocabulary* vocabulary = nullptr) {
  return detail::FormulaParser(text, vocabulary).parse();
}

inline Formula parse_formula(std::string_view text, const Vocabulary& vocabulary) {
  return parse_formula(text, &vocabulary);
}

/// Canonical fully parenthesized text; parse_formula(render(f)) == f.
inline std::string render(const Formula& f) {
  std::string out;
  detail::render_to(f, out);
  return out;
}

inline std::size_t modal_depth(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::atom:
      return 0;
    case FormulaKind::negation:
      return modal_depth(f.child());
    case FormulaKind::conjunction:
      return std::max(modal_depth(f.left()), modal_depth(f.right()));
    case FormulaKind::knowledge:
      return 1 + modal_depth(f.child());
  }
  return 0;
}

}  // namespace cellkit
