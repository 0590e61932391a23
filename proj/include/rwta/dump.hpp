#ifndef RWTA_DUMP_HPP
#define RWTA_DUMP_HPP

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rwta/automaton.hpp"
#include "rwta/error.hpp"
#include "rwta/term_io.hpp"

namespace rwta {

// Automaton dump:
//   [alphabet]     one "name/rank" per line
//   [states]       one label per line
//   [nu]           "label<TAB>weight"
//   [transitions]  "target<TAB>symbol<TAB>child1,...,childk"
// Every section is sorted, so equal automata with equal labels dump identically.

template <WeightDomain D>
void write_automaton(std::ostream& out, const Rwta<D>& a) {
  std::vector<std::string> label(a.state_count());
  for (StateId q = 0; q < a.state_count(); ++q) label[q] = a.label(q).str();
  std::vector<StateId> order(a.state_count());
  for (StateId q = 0; q < order.size(); ++q) order[q] = q;
  std::sort(order.begin(), order.end(), [&](StateId x, StateId y) { return label[x] < label[y]; });

  out << "[alphabet]\n";
  for (Symbol s : a.alphabet().symbols()) out << s.name() << '/' << s.rank() << '\n';
  out << "[states]\n";
  for (StateId q : order) out << label[q] << '\n';
  out << "[nu]\n";
  for (StateId q : order) out << label[q] << '\t' << D::format(a.nu(q)) << '\n';
  out << "[transitions]\n";
  std::vector<std::string> lines;
  lines.reserve(a.transition_count());
  for (const Transition& tr : a.transitions()) {
    std::string line = label[tr.target] + '\t' + tr.symbol.name() + '\t';
    for (std::size_t i = 0; i < tr.children.size(); ++i) {
      if (i) line += ',';
      line += label[tr.children[i]];
    }
    lines.push_back(std::move(line));
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& line : lines) out << line << '\n';
}

template <WeightDomain D>
std::string dump_automaton(const Rwta<D>& a) {
  std::ostringstream out;
  write_automaton(out, a);
  return out.str();
}

namespace detail {

// Splits on commas outside (), {} and [].
inline std::vector<std::string> split_top_level(std::string_view text) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  int depth = 0;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(' || c == '{' || c == '[') ++depth;
    if (c == ')' || c == '}' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.emplace_back(text.substr(begin, i - begin));
      begin = i + 1;
    }
  }
  out.emplace_back(text.substr(begin));
  return out;
}

}  // namespace detail

/// Reads a dump back. Labels that parse as terms over the dumped alphabet
/// become term labels; the rest stay plain names.
template <WeightDomain D>
Rwta<D> parse_automaton(std::string_view text) {
  enum class Section { none, alphabet, states, nu, transitions } section = Section::none;
  GradedAlphabet alphabet;
  std::vector<std::string> states;
  std::map<std::string, StateId, std::less<>> ids;
  std::vector<typename D::value_type> nu;
  struct Pending {
    std::string target, symbol;
    std::vector<std::string> children;
    std::size_t line;
  };
  std::vector<Pending> transitions;

  std::size_t line_no = 0, begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto fail = [&](const std::string& what) -> void { throw ParseError(ParseError::Kind::syntax, line_no, 1, what); };
    if (line.empty()) {
      // skip
    } else if (line == "[alphabet]") {
      section = Section::alphabet;
    } else if (line == "[states]") {
      section = Section::states;
    } else if (line == "[nu]") {
      section = Section::nu;
    } else if (line == "[transitions]") {
      section = Section::transitions;
    } else if (section == Section::alphabet) {
      std::size_t slash = line.rfind('/');
      if (slash == std::string_view::npos) fail("expected name/rank");
      std::string name(line.substr(0, slash));
      try {
        std::size_t rank = std::stoul(std::string(line.substr(slash + 1)));
        alphabet.add(name, rank);
      } catch (const AlphabetMismatch& e) {
        throw ParseError(ParseError::Kind::rank_conflict, line_no, 1, e.what());
      } catch (const std::exception&) {
        fail("bad rank in '" + std::string(line) + "'");
      }
    } else if (section == Section::states) {
      std::string label(line);
      if (!ids.try_emplace(label, static_cast<StateId>(states.size())).second) fail("duplicate state '" + label + "'");
      states.push_back(label);
      nu.push_back(D::zero());
    } else if (section == Section::nu) {
      std::size_t tab = line.rfind('\t');
      if (tab == std::string_view::npos) fail("expected label<TAB>weight");
      auto it = ids.find(line.substr(0, tab));
      if (it == ids.end()) fail("unknown state '" + std::string(line.substr(0, tab)) + "'");
      nu[it->second] = D::parse(line.substr(tab + 1));
    } else if (section == Section::transitions) {
      std::size_t t1 = line.find('\t');
      std::size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
      if (t2 == std::string_view::npos) fail("expected target<TAB>symbol<TAB>children");
      transitions.push_back(Pending{std::string(line.substr(0, t1)), std::string(line.substr(t1 + 1, t2 - t1 - 1)),
                                    detail::split_top_level(line.substr(t2 + 1)), line_no});
    } else {
      fail("content before the first section");
    }
    if (end == text.size()) break;
    begin = end + 1;
  }

  RwtaBuilder<D> b(alphabet);
  for (std::size_t q = 0; q < states.size(); ++q) {
    StateLabel label = StateLabel::name(states[q]);
    try {
      label = StateLabel::term(parse_tree(states[q], alphabet));
    } catch (const ParseError&) {
    }
    b.add_state(std::move(label), nu[q]);
  }
  for (const Pending& p : transitions) {
    auto lookup = [&](const std::string& label) {
      auto it = ids.find(label);
      if (it == ids.end()) throw ParseError(ParseError::Kind::syntax, p.line, 1, "unknown state '" + label + "'");
      return it->second;
    };
    if (!alphabet.contains_name(p.symbol)) {
      throw ParseError(ParseError::Kind::unknown_symbol, p.line, 1, "unknown symbol '" + p.symbol + "'");
    }
    std::vector<StateId> kids;
    for (const auto& c : p.children) kids.push_back(lookup(c));
    Symbol f = Symbol::get(p.symbol, alphabet.rank_of(p.symbol));
    if (kids.size() != f.rank()) {
      throw ParseError(ParseError::Kind::rank_conflict, p.line, 1,
                       "symbol '" + p.symbol + "' has rank " + std::to_string(f.rank()));
    }
    b.add_transition(lookup(p.target), f, std::move(kids));
  }
  return std::move(b).build();
}

template <WeightDomain D>
Rwta<D> read_automaton(const std::string& path) {
  return parse_automaton<D>(read_text_file(path));
}

/// Heuristic used by the CLI: dumps start with the alphabet section header.
inline bool looks_like_dump(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  return text.substr(i, 10) == "[alphabet]";
}

}  // namespace rwta

#endif  // RWTA_DUMP_HPP
