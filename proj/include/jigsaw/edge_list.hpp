#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "jigsaw/graph.hpp"

namespace jigsaw {

/// Malformed edge-list input. `line()` is 1-based; 0 means end of input.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Edge-list text format:
//
//   n m_red m_blue
//   R u v          (m_red lines)
//   B u v          (m_blue lines)
//
// Whitespace separated, 1-indexed, u < v. Duplicates, self-loops and
// out-of-range endpoints are rejected, as is n = 0.
DoubleGraph read_edge_list(std::istream& in);
DoubleGraph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const DoubleGraph& dg);

}  // namespace jigsaw
