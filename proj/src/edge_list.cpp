#include "jigsaw/edge_list.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace jigsaw {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
      line_(line) {}

namespace {

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

// Parses a non-negative integer token strictly (no signs, no trailing junk).
bool parse_count(const std::string& tok, std::uint64_t& out) {
  if (tok.empty() || tok.size() > 19) return false;
  out = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') return false;
    out = out * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return true;
}

}  // namespace

DoubleGraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!blank(line)) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError(0, "empty input: expected header \"n m_red m_blue\"");
  std::uint64_t n = 0, m_red = 0, m_blue = 0;
  {
    std::istringstream hs(line);
    std::string a, b, c, extra;
    if (!(hs >> a >> b >> c) || (hs >> extra) || !parse_count(a, n) || !parse_count(b, m_red) ||
        !parse_count(c, m_blue)) {
      throw ParseError(lineno, "expected header \"n m_red m_blue\"");
    }
  }
  if (n == 0) throw ParseError(lineno, "vertex count must be at least 1");
  if (n > 0xFFFFFFFEull) throw ParseError(lineno, "vertex count too large");
  const std::uint64_t max_edges = n * (n - 1) / 2;
  if (m_red > max_edges || m_blue > max_edges) {
    throw ParseError(lineno, "edge count exceeds n(n-1)/2");
  }

  std::vector<Edge> red, blue;
  red.reserve(m_red);
  blue.reserve(m_blue);
  std::unordered_set<std::uint64_t> seen_red, seen_blue;
  for (std::uint64_t i = 0; i < m_red + m_blue; ++i) {
    if (!next_line()) {
      throw ParseError(0, "unexpected end of input: expected " + std::to_string(m_red + m_blue) +
                              " edge lines, got " + std::to_string(i));
    }
    std::istringstream ls(line);
    std::string color, su, sv, extra;
    std::uint64_t u = 0, v = 0;
    if (!(ls >> color >> su >> sv) || (ls >> extra) || !parse_count(su, u) ||
        !parse_count(sv, v)) {
      throw ParseError(lineno, "expected \"R u v\" or \"B u v\"");
    }
    const bool is_red = color == "R";
    if (!is_red && color != "B") throw ParseError(lineno, "unknown color \"" + color + "\"");
    if (u == v) throw ParseError(lineno, "self-loop at vertex " + std::to_string(u));
    if (u < 1 || v < 1 || u > n || v > n) {
      throw ParseError(lineno, "endpoint outside 1.." + std::to_string(n));
    }
    if (u > v) throw ParseError(lineno, "endpoints must satisfy u < v");
    auto& seen = is_red ? seen_red : seen_blue;
    if (!seen.insert(u * (n + 1) + v).second) {
      throw ParseError(lineno, std::string("duplicate ") + (is_red ? "red" : "blue") + " edge {" +
                                   su + "," + sv + "}");
    }
    (is_red ? red : blue).emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  if (red.size() != m_red || blue.size() != m_blue) {
    throw ParseError(0, "header declares " + std::to_string(m_red) + " red and " +
                            std::to_string(m_blue) + " blue edges, found " +
                            std::to_string(red.size()) + " and " + std::to_string(blue.size()));
  }
  if (next_line()) throw ParseError(lineno, "trailing content after declared edges");

  const auto nv = static_cast<Vertex>(n);
  return {Graph(nv, std::move(red)), Graph(nv, std::move(blue))};
}

DoubleGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const DoubleGraph& dg) {
  out << dg.n() << ' ' << dg.red.edge_count() << ' ' << dg.blue.edge_count() << '\n';
  for (const auto& [u, v] : dg.red.edges()) out << "R " << u << ' ' << v << '\n';
  for (const auto& [u, v] : dg.blue.edges()) out << "B " << u << ' ' << v << '\n';
}

}  // namespace jigsaw
