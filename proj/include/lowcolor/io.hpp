#pragma once

// Text formats.
//
// Graph:  "n <count>" then one "i j" line (0-indexed, i<j) per present edge,
//         in lexicographic order. Lines starting with '#' are ignored and
//         absent pairs are -1.
// Truth:  one "label <v> <a> [<b>]" line per vertex, or "label <v> none" for a
//         vertex outside every planted clique. A "kind clique <q>" or
//         "kind quiet <q>" line precedes the labels.

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lowcolor/graph.hpp"
#include "lowcolor/models.hpp"

namespace lowcolor {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void write_graph(std::ostream& os, const PM1Graph& g) {
  os << "n " << g.n() << '\n';
  EdgeId e = 0;
  for (Vertex i = 0; i < g.n(); ++i)
    for (Vertex j = i + 1; j < g.n(); ++j, ++e)
      if (g.sign(e) == 1) os << i << ' ' << j << '\n';
}

namespace detail {
inline bool skip_line(const std::string& line) {
  auto p = line.find_first_not_of(" \t\r");
  return p == std::string::npos || line[p] == '#';
}
}  // namespace detail

inline PM1Graph read_graph(std::istream& is) {
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw FormatError("graph line " + std::to_string(lineno) + ": " + why);
  };
  PM1Graph g;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    std::istringstream ls(line);
    if (!have_header) {
      std::string tag;
      long long n = -1;
      if (!(ls >> tag >> n) || tag != "n" || n < 0 || n > 100000) fail("expected 'n <count>'");
      std::string rest;
      if (ls >> rest) fail("trailing text after header");
      g = PM1Graph(static_cast<int>(n));
      have_header = true;
      continue;
    }
    long long i = -1, j = -1;
    if (!(ls >> i >> j)) fail("expected 'i j'");
    std::string rest;
    if (ls >> rest) fail("trailing text after edge");
    if (i < 0 || i >= j || j >= g.n()) fail("need 0 <= i < j < n");
    const auto e = edge_index(static_cast<Vertex>(i), static_cast<Vertex>(j), g.n());
    if (g.sign(e) == 1) fail("duplicate edge");
    g.set(e, 1);
  }
  if (!have_header) throw FormatError("graph: missing 'n <count>' header");
  return g;
}

inline void write_truth(std::ostream& os, const PlantedSample& s) {
  if (const auto* c = s.cliques()) {
    os << "kind clique " << c->q << '\n';
    for (std::size_t v = 0; v < c->labels.size(); ++v) {
      os << "label " << v << ' ';
      if (c->labels[v] == kNoLabel) os << "none\n";
      else os << c->labels[v] << '\n';
    }
  } else {
    const auto& qt = *s.quiet();
    os << "kind quiet " << qt.q << '\n';
    for (std::size_t v = 0; v < qt.pairs.size(); ++v)
      os << "label " << v << ' ' << qt.pairs[v].a << ' ' << qt.pairs[v].b << '\n';
  }
}

// Reads a truth file for an n-vertex graph.
inline std::variant<CliqueLabeling, QuietLabels> read_truth(std::istream& is, int n) {
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw FormatError("truth line " + std::to_string(lineno) + ": " + why);
  };
  std::string kind;
  int q = 0;
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  CliqueLabeling cl;
  QuietLabels ql;
  while (std::getline(is, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "kind") {
      if (!(ls >> kind >> q) || (kind != "clique" && kind != "quiet") || q < 1)
        fail("expected 'kind clique|quiet <q>'");
      cl = {q, std::vector<int>(static_cast<std::size_t>(n), kNoLabel)};
      ql = {q, std::vector<QuietLabel>(static_cast<std::size_t>(n), {0, 0})};
      continue;
    }
    if (tag != "label") fail("unknown record '" + tag + "'");
    if (kind.empty()) fail("label before kind");
    long long v = -1;
    std::string a;
    if (!(ls >> v >> a) || v < 0 || v >= n) fail("bad vertex");
    if (seen[v]++) fail("vertex labeled twice");
    auto parse_label = [&](const std::string& s) {
      try {
        int x = std::stoi(s);
        if (x < 0 || x >= q) fail("label out of range");
        return x;
      } catch (const std::logic_error&) {
        fail("bad label '" + s + "'");
      }
      return 0;
    };
    if (kind == "clique") {
      cl.labels[v] = a == "none" ? kNoLabel : parse_label(a);
    } else {
      std::string b;
      if (!(ls >> b)) fail("quiet label needs two components");
      ql.pairs[v] = {parse_label(a), parse_label(b)};
    }
  }
  if (kind.empty()) throw FormatError("truth: missing kind line");
  for (int v = 0; v < n; ++v)
    if (!seen[v]) throw FormatError("truth: vertex " + std::to_string(v) + " has no label");
  if (kind == "clique") return cl;
  return ql;
}

}  // namespace lowcolor
