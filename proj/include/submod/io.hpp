// Copyright 2026 The submodkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Plain-text instance formats. All are whitespace separated and accept '#'
// comments running to the end of a line.
//
//   cost file:      <id> <cost>                       one line per element
//   coverage file:  <n_objects> <n_words>             header
//                   <cost> <k> <w1> ... <wk>          one line per object
//   graph file:     <u> <v> [p]                       one line per edge

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "submod/error.hpp"
#include "submod/objectives.hpp"

namespace submod {

namespace detail {

// Shortest decimal form that reads back to the same double.
inline std::string format_exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

// Tokens of every non-comment line, each tagged with its line number.
struct Token {
  std::string text;
  std::size_t line;
};

inline std::vector<std::vector<Token>> tokenize(std::istream& in) {
  std::vector<std::vector<Token>> lines;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream fields(strip_comment(line));
    std::vector<Token> tokens;
    std::string t;
    while (fields >> t) tokens.push_back({t, number});
    if (!tokens.empty()) lines.push_back(std::move(tokens));
  }
  return lines;
}

inline double to_double(const Token& t) {
  try {
    std::size_t used = 0;
    const double v = std::stod(t.text, &used);
    if (used == t.text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("line " + std::to_string(t.line) + ": '" + t.text +
                   "' is not a number");
}

inline std::uint64_t to_index(const Token& t) {
  try {
    std::size_t used = 0;
    if (!t.text.empty() && t.text[0] != '-') {
      const unsigned long long v = std::stoull(t.text, &used);
      if (used == t.text.size()) return v;
    }
  } catch (const std::exception&) {
  }
  throw ParseError("line " + std::to_string(t.line) + ": '" + t.text +
                   "' is not a non-negative integer");
}

inline std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

// Per-element values indexed by id; ids must cover [0, n) exactly once.
inline std::vector<double> read_cost_file(std::istream& in) {
  std::vector<std::optional<double>> values;
  for (const auto& tokens : detail::tokenize(in)) {
    if (tokens.size() != 2)
      throw ParseError("line " + std::to_string(tokens[0].line) +
                       ": expected '<id> <value>'");
    const auto id = detail::to_index(tokens[0]);
    if (id >= values.size()) values.resize(id + 1);
    if (values[id])
      throw ParseError("line " + std::to_string(tokens[0].line) +
                       ": duplicate id " + std::to_string(id));
    values[id] = detail::to_double(tokens[1]);
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) throw ParseError("missing id " + std::to_string(i));
    out.push_back(*values[i]);
  }
  return out;
}

inline void write_cost_file(std::ostream& out, const std::vector<double>& c) {
  for (std::size_t i = 0; i < c.size(); ++i)
    out << i << ' ' << detail::format_exact(c[i]) << '\n';
}

inline CoverageInstance read_coverage_file(std::istream& in) {
  const auto lines = detail::tokenize(in);
  if (lines.empty()) throw ParseError("coverage file is empty");
  if (lines[0].size() != 2)
    throw ParseError("coverage header must be '<n_objects> <n_words>'");
  const auto n = detail::to_index(lines[0][0]);
  CoverageInstance inst;
  inst.n_words = detail::to_index(lines[0][1]);
  if (lines.size() != n + 1)
    throw ParseError("coverage file declares " + std::to_string(n) +
                     " objects but lists " + std::to_string(lines.size() - 1));
  for (std::size_t v = 0; v < n; ++v) {
    const auto& t = lines[v + 1];
    if (t.size() < 2)
      throw ParseError("line " + std::to_string(t[0].line) +
                       ": expected '<cost> <k> <w1> ... <wk>'");
    inst.costs.push_back(detail::to_double(t[0]));
    const auto k = detail::to_index(t[1]);
    if (t.size() != k + 2)
      throw ParseError("line " + std::to_string(t[0].line) + ": expected " +
                       std::to_string(k) + " word ids");
    std::vector<std::uint32_t> words;
    for (std::size_t i = 0; i < k; ++i) {
      const auto w = detail::to_index(t[i + 2]);
      if (w >= inst.n_words)
        throw ParseError("line " + std::to_string(t[0].line) + ": word " +
                         std::to_string(w) + " outside universe");
      words.push_back(static_cast<std::uint32_t>(w));
    }
    inst.incidence.push_back(std::move(words));
  }
  try {
    inst.normalize();
  } catch (const InvalidInstance& e) {
    throw ParseError(e.what());
  }
  return inst;
}

inline void write_coverage_file(std::ostream& out,
                                const CoverageInstance& inst) {
  out << inst.n_objects() << ' ' << inst.n_words << '\n';
  for (std::size_t v = 0; v < inst.n_objects(); ++v) {
    out << detail::format_exact(inst.costs[v]) << ' '
        << inst.incidence[v].size();
    for (auto w : inst.incidence[v]) out << ' ' << w;
    out << '\n';
  }
}

struct GraphFile {
  Graph graph;
  bool has_probabilities = false;
};

// Vertices are 0 .. max id. Either every edge carries p or none does; with
// none, p is left at zero for degree_weighted_setup to fill in.
inline GraphFile read_graph_file(std::istream& in) {
  GraphFile out;
  std::optional<bool> with_p;
  std::uint64_t max_id = 0;
  bool any = false;
  for (const auto& t : detail::tokenize(in)) {
    if (t.size() != 2 && t.size() != 3)
      throw ParseError("line " + std::to_string(t[0].line) +
                       ": expected '<u> <v> [p]'");
    const bool has = t.size() == 3;
    if (with_p && *with_p != has)
      throw ParseError("line " + std::to_string(t[0].line) +
                       ": mixed edges with and without probabilities");
    with_p = has;
    const auto u = detail::to_index(t[0]);
    const auto v = detail::to_index(t[1]);
    if (u > 0xffffffffULL || v > 0xffffffffULL)
      throw ParseError("line " + std::to_string(t[0].line) +
                       ": vertex id too large");
    const double p = has ? detail::to_double(t[2]) : 0.0;
    if (has && !(p >= 0.0 && p <= 1.0))
      throw ParseError("line " + std::to_string(t[0].line) +
                       ": probability outside [0, 1]");
    out.graph.edges.push_back(
        {static_cast<Element>(u), static_cast<Element>(v), p});
    max_id = std::max({max_id, u, v});
    any = true;
  }
  out.graph.n = any ? static_cast<std::size_t>(max_id) + 1 : 0;
  out.has_probabilities = with_p.value_or(false);
  return out;
}

inline void write_graph_file(std::ostream& out, const Graph& g,
                             bool with_probabilities) {
  for (const auto& e : g.edges) {
    out << e.from << ' ' << e.to;
    if (with_probabilities) out << ' ' << detail::format_exact(e.p);
    out << '\n';
  }
}

inline std::vector<double> load_cost_file(const std::string& path) {
  auto in = detail::open_for_read(path);
  return read_cost_file(in);
}

inline CoverageInstance load_coverage_file(const std::string& path) {
  auto in = detail::open_for_read(path);
  return read_coverage_file(in);
}

inline GraphFile load_graph_file(const std::string& path) {
  auto in = detail::open_for_read(path);
  return read_graph_file(in);
}

}  // namespace submod
