#pragma once

// Lattice files: {"vertices": N, "edges": [[u,v],...], "faces": [[e,...],...],
// "star_orderings": {"v": [e,...]}}. Indices are 0-based, file order.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "graph.hpp"

namespace z2bos {

namespace detail {

inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline std::size_t as_index(const nlohmann::json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) throw ParseError(what + " must be a non-negative integer");
  return j.get<std::size_t>();
}

} // namespace detail

inline Graph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("lattice must be a JSON object");
  if (!j.contains("vertices")) throw ParseError("lattice is missing \"vertices\"");
  if (!j.contains("edges") || !j["edges"].is_array()) throw ParseError("lattice is missing an \"edges\" array");
  auto nv = detail::as_index(j["vertices"], "\"vertices\"");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t e = 0; e < j["edges"].size(); ++e) {
    const auto& ej = j["edges"][e];
    if (!ej.is_array() || ej.size() != 2) throw ParseError("edge " + std::to_string(e) + " must be a pair [u, v]");
    auto u = detail::as_index(ej[0], "edge endpoint");
    auto v = detail::as_index(ej[1], "edge endpoint");
    if (u == v) throw ParseError("edge " + std::to_string(e) + " is a self-loop at vertex " + std::to_string(u));
    edges.emplace_back(u, v);
  }
  std::vector<std::vector<std::size_t>> faces;
  if (j.contains("faces")) {
    if (!j["faces"].is_array()) throw ParseError("\"faces\" must be an array");
    for (const auto& fj : j["faces"]) {
      if (!fj.is_array()) throw ParseError("each face must be an array of edge indices");
      std::vector<std::size_t> f;
      for (const auto& x : fj) f.push_back(detail::as_index(x, "face edge"));
      faces.push_back(std::move(f));
    }
  }
  std::vector<std::vector<std::size_t>> orderings;
  if (j.contains("star_orderings")) {
    const auto& so = j["star_orderings"];
    if (!so.is_object()) throw ParseError("\"star_orderings\" must be an object keyed by vertex");
    orderings.assign(nv, {});
    std::vector<bool> given(nv, false);
    for (auto it = so.begin(); it != so.end(); ++it) {
      std::size_t v = 0;
      try {
        std::size_t pos = 0;
        v = std::stoul(it.key(), &pos);
        if (pos != it.key().size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ParseError("star_orderings key \"" + it.key() + "\" is not a vertex index");
      }
      if (v >= nv) throw ParseError("star_orderings key " + it.key() + " is out of range");
      if (!it.value().is_array()) throw ParseError("star ordering must be an array of edge indices");
      for (const auto& x : it.value()) orderings[v].push_back(detail::as_index(x, "star ordering edge"));
      given[v] = true;
    }
    if (std::find(given.begin(), given.end(), false) != given.end())
      throw ParseError("star_orderings must list every vertex");
  }
  try {
    return Graph(nv, std::move(edges), std::move(faces), std::move(orderings));
  } catch (const GraphError& e) {
    throw ParseError(e.what());
  }
}

inline nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json j;
  j["vertices"] = g.num_vertices();
  j["edges"] = nlohmann::json::array();
  for (auto [u, v] : g.edges()) j["edges"].push_back({u, v});
  if (g.num_faces()) j["faces"] = g.faces();
  if (g.has_star_orderings()) {
    nlohmann::json so = nlohmann::json::object();
    for (std::size_t v = 0; v < g.num_vertices(); ++v) so[std::to_string(v)] = g.star_orderings()[v];
    j["star_orderings"] = so;
  }
  return j;
}

inline Graph parse_lattice(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("malformed JSON", line, col);
  }
  return graph_from_json(j);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Graph load_lattice(const std::string& path) { return parse_lattice(read_text_file(path)); }

// FNV-1a over the canonical dump; stable across platforms.
inline std::string lattice_hash(const Graph& g) {
  auto s = graph_to_json(g).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

} // namespace z2bos
