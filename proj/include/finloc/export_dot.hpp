#pragma once

#include <sstream>
#include <string>

#include "finloc/lattice.hpp"
#include "finloc/poset.hpp"

namespace finloc {

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

// Hasse diagram (cover relation only), drawn bottom-up.
inline std::string hasse_dot(const Poset& p, const std::string& name = "poset") {
  std::ostringstream os;
  os << "digraph \"" << detail::dot_escape(name) << "\" {\n  rankdir=BT;\n";
  for (int i = 0; i < p.size(); ++i)
    os << "  n" << i << " [label=\"" << detail::dot_escape(p.name(i)) << "\"];\n";
  for (auto [lo, hi] : p.covers()) os << "  n" << lo << " -> n" << hi << ";\n";
  os << "}\n";
  return os.str();
}

inline std::string hasse_dot(const Lattice& l, const std::string& name = "lattice") {
  std::ostringstream os;
  os << "digraph \"" << detail::dot_escape(name) << "\" {\n  rankdir=BT;\n";
  for (int i = 0; i < l.size(); ++i)
    os << "  n" << i << " [label=\"" << detail::dot_escape(l.name(i)) << "\"];\n";
  for (auto [lo, hi] : l.covers()) os << "  n" << lo << " -> n" << hi << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace finloc
