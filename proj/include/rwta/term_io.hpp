#ifndef RWTA_TERM_IO_HPP
#define RWTA_TERM_IO_HPP

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rwta/error.hpp"
#include "rwta/language.hpp"
#include "rwta/tree.hpp"

namespace rwta {

// Term grammar:  tree := symbol | symbol '(' tree (',' tree)* ')'
// symbol := [A-Za-z_][A-Za-z0-9_']*   Whitespace between tokens is ignored.

inline std::string format_tree(Tree t) {
  std::string out;
  std::vector<std::pair<Tree, std::size_t>> stack{{t, 0}};
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next == 0) out += node.symbol().name();
    if (node.arity() == 0) {
      stack.pop_back();
      continue;
    }
    if (next == node.arity()) {
      out += ')';
      stack.pop_back();
      continue;
    }
    out += next == 0 ? '(' : ',';
    Tree c = node.child(next++);
    stack.emplace_back(c, 0);
  }
  return out;
}

inline std::vector<std::string> format_trees(const TreeLanguage& language) {
  std::vector<std::string> out;
  for (Tree t : language) out.push_back(format_tree(t));
  return out;
}

inline bool is_symbol_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_symbol_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

namespace detail {

class TermParser {
 public:
  // When fixed is true, unknown symbols are errors and the alphabet is not extended.
  TermParser(std::string_view text, std::size_t line, GradedAlphabet& alphabet, bool fixed)
      : text_(text), line_(line), alphabet_(alphabet), fixed_(fixed) {}

  Tree parse() {
    struct Frame {
      std::string name;
      std::size_t column;
      std::vector<Tree> children;
    };
    std::vector<Frame> stack;
    Tree result;
    while (true) {
      skip_space();
      std::size_t column = pos_ + 1;
      std::string name = read_symbol();
      skip_space();
      if (peek() == '(') {
        ++pos_;
        stack.push_back(Frame{std::move(name), column, {}});
        continue;
      }
      Tree done = finish(name, column, {});
      // Close as many frames as the input allows.
      while (true) {
        if (stack.empty()) {
          result = done;
          break;
        }
        stack.back().children.push_back(done);
        skip_space();
        char c = peek();
        if (c == ',') {
          ++pos_;
          break;
        }
        if (c == ')') {
          ++pos_;
          Frame frame = std::move(stack.back());
          stack.pop_back();
          done = finish(frame.name, frame.column, frame.children);
          continue;
        }
        fail(ParseError::Kind::syntax, pos_ + 1, c == '\0' ? "unexpected end of input, expected ',' or ')'"
                                                           : std::string("expected ',' or ')' but found '") + c + "'");
      }
      if (result.valid()) break;
    }
    skip_space();
    if (pos_ != text_.size()) {
      fail(ParseError::Kind::syntax, pos_ + 1, std::string("unexpected trailing character '") + text_[pos_] + "'");
    }
    return result;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string read_symbol() {
    if (pos_ >= text_.size()) fail(ParseError::Kind::syntax, pos_ + 1, "unexpected end of input, expected a symbol");
    if (!is_symbol_start(text_[pos_])) {
      fail(ParseError::Kind::syntax, pos_ + 1, std::string("expected a symbol but found '") + text_[pos_] + "'");
    }
    std::size_t begin = pos_;
    while (pos_ < text_.size() && is_symbol_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(begin, pos_ - begin));
  }

  Tree finish(const std::string& name, std::size_t column, const std::vector<Tree>& children) {
    const std::size_t rank = children.size();
    if (fixed_) {
      if (!alphabet_.contains_name(name)) fail(ParseError::Kind::unknown_symbol, column, "unknown symbol '" + name + "'");
      if (alphabet_.rank_of(name) != rank) {
        fail(ParseError::Kind::rank_conflict, column,
             "symbol '" + name + "' has rank " + std::to_string(alphabet_.rank_of(name)) + " but is used with " +
                 std::to_string(rank) + " children");
      }
      return Tree::make(Symbol::get(name, rank), children);
    }
    try {
      return Tree::make(alphabet_.add(name, rank), children);
    } catch (const AlphabetMismatch& e) {
      fail(ParseError::Kind::rank_conflict, column, e.what());
    }
  }

  [[noreturn]] void fail(ParseError::Kind kind, std::size_t column, const std::string& what) const {
    throw ParseError(kind, line_, column, what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  GradedAlphabet& alphabet_;
  bool fixed_;
};

}  // namespace detail

struct ParsedTree {
  Tree tree;
  GradedAlphabet alphabet;  // inferred from the text
};

/// Parses one term and infers its alphabet.
inline ParsedTree parse_tree(std::string_view text) {
  ParsedTree out;
  out.tree = detail::TermParser(text, 1, out.alphabet, false).parse();
  return out;
}

/// Parses one term against a fixed alphabet.
inline Tree parse_tree(std::string_view text, const GradedAlphabet& alphabet) {
  GradedAlphabet copy = alphabet;
  return detail::TermParser(text, 1, copy, true).parse();
}

struct Corpus {
  TreeLanguage trees;
  GradedAlphabet alphabet;
  std::vector<std::size_t> lines;  // source line of each tree, parallel to trees
};

/// One tree per line; blank lines and lines whose first non-blank character
/// is '#' are skipped. A symbol must keep one rank across the whole corpus.
inline Corpus parse_corpus(std::string_view text, const GradedAlphabet* fixed = nullptr) {
  Corpus out;
  if (fixed) out.alphabet = *fixed;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t first = 0;
    while (first < line.size() && std::isspace(static_cast<unsigned char>(line[first]))) ++first;
    if (first < line.size() && line[first] != '#') {
      Tree t = detail::TermParser(line, line_no, out.alphabet, fixed != nullptr).parse();
      if (out.trees.insert(t)) out.lines.push_back(line_no);
    }
    if (end == text.size()) break;
    begin = end + 1;
  }
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline Corpus read_corpus(const std::string& path, const GradedAlphabet* fixed = nullptr) {
  return parse_corpus(read_text_file(path), fixed);
}

}  // namespace rwta

#endif  // RWTA_TERM_IO_HPP
