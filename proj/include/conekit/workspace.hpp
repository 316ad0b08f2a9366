#pragma once

#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "conekit/group_action.hpp"
#include "conekit/metric_space.hpp"
#include "conekit/subspace.hpp"

namespace conekit {

/// Exact round-trip rendering for workspace serialization.
inline std::string format_double_exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct RotationDecl {
  std::size_t index = 0;
  std::string subspace;
  std::vector<std::string> subgroup_words;
  std::map<std::string, std::size_t> images;  // generator name -> family index

  bool operator==(const RotationDecl&) const = default;
};

/// Parsed form of the single plain-text input format: a space given as a
/// weighted graph or a distance matrix, plus named subspaces, generators,
/// boundary points, rotation-family blocks and named parameters.
struct WorkspaceDocument {
  std::size_t points = 0;
  std::vector<WeightedGraph::Edge> edges;                       // graph mode
  std::vector<std::tuple<PointId, PointId, double>> dists;      // matrix mode
  std::vector<std::pair<std::string, std::vector<PointId>>> subspaces;
  std::vector<std::pair<std::string, Permutation>> generators;
  std::vector<PointId> boundary;
  std::vector<RotationDecl> rotations;
  std::vector<std::pair<std::string, double>> params;

  bool graphMode() const { return dists.empty(); }

  WeightedGraph buildGraph() const {
    detail::require(graphMode(), "document declares a distance matrix, not a graph");
    return WeightedGraph(points, edges);
  }

  FiniteMetricSpace buildMetric(bool validate = true) const {
    if (graphMode()) return buildGraph().inducedMetric(validate);
    std::vector<double> d(points * points, kInfinite);
    for (std::size_t i = 0; i < points; ++i) d[i * points + i] = 0.0;
    for (const auto& [i, j, v] : dists) {
      d[i * points + j] = v;
      d[j * points + i] = v;
    }
    for (double v : d)
      detail::require(std::isfinite(v), "distance matrix is incomplete");
    return FiniteMetricSpace(points, std::move(d), validate);
  }

  const std::vector<PointId>& subspaceMembers(const std::string& name) const {
    for (const auto& [n, members] : subspaces)
      if (n == name) return members;
    throw std::invalid_argument("unresolved subspace name: " + name);
  }

  bool hasParam(const std::string& name) const {
    for (const auto& [n, v] : params)
      if (n == name) return true;
    return false;
  }

  double param(const std::string& name) const {
    for (const auto& [n, v] : params)
      if (n == name) return v;
    throw std::invalid_argument("missing parameter: " + name);
  }

  double paramOr(const std::string& name, double fallback) const {
    return hasParam(name) ? param(name) : fallback;
  }

  GroupAction buildAction(const FiniteMetricSpace& space) const {
    std::vector<std::string> names;
    std::vector<Permutation> perms;
    for (const auto& [n, p] : generators) {
      names.push_back(n);
      perms.push_back(p);
    }
    return GroupAction(space, std::move(names), std::move(perms));
  }

  RotationFamily buildFamily(const GroupAction& action) const {
    RotationFamily family;
    for (const RotationDecl& decl : rotations) {
      RotationPair pair;
      pair.name = decl.subspace;
      pair.subspace = Subspace(subspaceMembers(decl.subspace));
      for (const std::string& w : decl.subgroup_words)
        pair.subgroup_words.push_back(parse_word(w, action));
      pair.declared_images = decl.images;
      family.pairs.push_back(std::move(pair));
    }
    return family;
  }

  bool operator==(const WorkspaceDocument& o) const {
    auto edgeKey = [](const WeightedGraph::Edge& e) { return std::tuple(e.u, e.v, e.w); };
    if (edges.size() != o.edges.size()) return false;
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edgeKey(edges[i]) != edgeKey(o.edges[i])) return false;
    return points == o.points && dists == o.dists && subspaces == o.subspaces &&
           generators == o.generators && boundary == o.boundary && rotations == o.rotations &&
           params == o.params;
  }
};

namespace detail {

struct LineError : std::invalid_argument {
  LineError(std::size_t line, const std::string& msg)
      : std::invalid_argument("line " + std::to_string(line) + ": " + msg) {}
};

inline std::vector<std::string> splitWhitespace(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

inline std::vector<std::string> splitOn(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

inline std::size_t parseIndex(const std::string& token, std::size_t line) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(token, &pos);
    if (pos != token.size() || v < 0) throw std::invalid_argument(token);
    return static_cast<std::size_t>(v);
  } catch (...) {
    throw LineError(line, "expected a non-negative integer, got '" + token + "'");
  }
}

inline double parseReal(const std::string& token, std::size_t line) {
  try {
    std::size_t pos = 0;
    double v = std::stod(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (...) {
    throw LineError(line, "expected a number, got '" + token + "'");
  }
}

}  // namespace detail

/// Deterministic parser for the workspace format. Unknown keys are rejected
/// and every error carries its line number.
inline WorkspaceDocument parse_workspace(const std::string& text) {
  WorkspaceDocument doc;
  bool sawPoints = false;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    std::string line = raw.substr(0, raw.find('#'));
    std::vector<std::string> tok = detail::splitWhitespace(line);
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    auto needPoints = [&] {
      if (!sawPoints) throw detail::LineError(lineNo, "'points' must be declared first");
    };
    auto checkPoint = [&](std::size_t p) {
      if (p >= doc.points) throw detail::LineError(lineNo, "point index out of range");
      return p;
    };
    if (key == "points") {
      if (sawPoints) throw detail::LineError(lineNo, "duplicate 'points' declaration");
      if (tok.size() != 2) throw detail::LineError(lineNo, "usage: points N");
      doc.points = detail::parseIndex(tok[1], lineNo);
      sawPoints = true;
    } else if (key == "edge") {
      needPoints();
      if (!doc.dists.empty()) throw detail::LineError(lineNo, "cannot mix edge and dist lines");
      if (tok.size() != 4) throw detail::LineError(lineNo, "usage: edge U V W");
      WeightedGraph::Edge e;
      e.u = checkPoint(detail::parseIndex(tok[1], lineNo));
      e.v = checkPoint(detail::parseIndex(tok[2], lineNo));
      e.w = detail::parseReal(tok[3], lineNo);
      doc.edges.push_back(e);
    } else if (key == "dist") {
      needPoints();
      if (!doc.edges.empty()) throw detail::LineError(lineNo, "cannot mix edge and dist lines");
      if (tok.size() != 4) throw detail::LineError(lineNo, "usage: dist I J D");
      PointId i = checkPoint(detail::parseIndex(tok[1], lineNo));
      PointId j = checkPoint(detail::parseIndex(tok[2], lineNo));
      doc.dists.emplace_back(i, j, detail::parseReal(tok[3], lineNo));
    } else if (key == "subspace") {
      needPoints();
      if (tok.size() < 3 || tok[1].back() != ':')
        throw detail::LineError(lineNo, "usage: subspace NAME: i1 i2 ...");
      std::string name = tok[1].substr(0, tok[1].size() - 1);
      for (const auto& [n, m] : doc.subspaces)
        if (n == name) throw detail::LineError(lineNo, "duplicate subspace '" + name + "'");
      std::vector<PointId> members;
      for (std::size_t i = 2; i < tok.size(); ++i)
        members.push_back(checkPoint(detail::parseIndex(tok[i], lineNo)));
      doc.subspaces.emplace_back(name, std::move(members));
    } else if (key == "generator") {
      needPoints();
      if (tok.size() != doc.points + 2 || tok[1].back() != ':')
        throw detail::LineError(lineNo, "usage: generator NAME: followed by one image per point");
      std::string name = tok[1].substr(0, tok[1].size() - 1);
      for (const auto& [n, p] : doc.generators)
        if (n == name) throw detail::LineError(lineNo, "duplicate generator '" + name + "'");
      Permutation perm;
      for (std::size_t i = 2; i < tok.size(); ++i)
        perm.push_back(checkPoint(detail::parseIndex(tok[i], lineNo)));
      doc.generators.emplace_back(name, std::move(perm));
    } else if (key == "boundary:") {
      needPoints();
      for (std::size_t i = 1; i < tok.size(); ++i)
        doc.boundary.push_back(checkPoint(detail::parseIndex(tok[i], lineNo)));
    } else if (key == "rotation") {
      needPoints();
      if (tok.size() < 3 || tok[1].back() != ':')
        throw detail::LineError(lineNo, "usage: rotation IDX: subspace=NAME subgroup=w1,w2 ...");
      RotationDecl decl;
      decl.index = detail::parseIndex(tok[1].substr(0, tok[1].size() - 1), lineNo);
      bool sawSubspace = false, sawSubgroup = false;
      for (std::size_t i = 2; i < tok.size(); ++i) {
        if (tok[i] == "image_under") {
          if (i + 1 >= tok.size())
            throw detail::LineError(lineNo, "image_under needs 'GENERATOR=INDEX'");
          std::vector<std::string> kv = detail::splitOn(tok[++i], '=');
          if (kv.size() != 2) throw detail::LineError(lineNo, "image_under needs 'GENERATOR=INDEX'");
          decl.images[kv[0]] = detail::parseIndex(kv[1], lineNo);
          continue;
        }
        std::vector<std::string> kv = detail::splitOn(tok[i], '=');
        if (kv.size() != 2) throw detail::LineError(lineNo, "expected key=value, got '" + tok[i] + "'");
        if (kv[0] == "subspace") {
          decl.subspace = kv[1];
          sawSubspace = true;
        } else if (kv[0] == "subgroup") {
          decl.subgroup_words = detail::splitOn(kv[1], ',');
          sawSubgroup = true;
        } else {
          throw detail::LineError(lineNo, "unknown rotation key '" + kv[0] + "'");
        }
      }
      if (!sawSubspace || !sawSubgroup)
        throw detail::LineError(lineNo, "rotation needs subspace= and subgroup=");
      doc.rotations.push_back(std::move(decl));
    } else if (key == "param") {
      if (tok.size() != 3) throw detail::LineError(lineNo, "usage: param NAME VALUE");
      for (const auto& [n, v] : doc.params)
        if (n == tok[1]) throw detail::LineError(lineNo, "duplicate param '" + tok[1] + "'");
      doc.params.emplace_back(tok[1], detail::parseReal(tok[2], lineNo));
    } else {
      throw detail::LineError(lineNo, "unknown key '" + key + "'");
    }
  }
  detail::require(sawPoints, "document must declare 'points N'");
  for (const RotationDecl& decl : doc.rotations) {
    doc.subspaceMembers(decl.subspace);
    for (const auto& [gname, idx] : decl.images) {
      bool found = false;
      for (const auto& [n, p] : doc.generators) found |= (n == gname);
      detail::require(found, "unresolved generator name in rotation: " + gname);
      detail::require(idx < doc.rotations.size(), "rotation image index out of range");
    }
  }
  return doc;
}

/// Canonical serialization; parse(serialize(doc)) == doc field by field.
inline std::string serialize_workspace(const WorkspaceDocument& doc) {
  std::string out;
  out += "points " + std::to_string(doc.points) + "\n";
  for (const auto& e : doc.edges)
    out += "edge " + std::to_string(e.u) + " " + std::to_string(e.v) + " " +
           format_double_exact(e.w) + "\n";
  for (const auto& [i, j, d] : doc.dists)
    out += "dist " + std::to_string(i) + " " + std::to_string(j) + " " + format_double_exact(d) +
           "\n";
  for (const auto& [name, members] : doc.subspaces) {
    out += "subspace " + name + ":";
    for (PointId p : members) out += " " + std::to_string(p);
    out += "\n";
  }
  for (const auto& [name, perm] : doc.generators) {
    out += "generator " + name + ":";
    for (PointId p : perm) out += " " + std::to_string(p);
    out += "\n";
  }
  if (!doc.boundary.empty()) {
    out += "boundary:";
    for (PointId p : doc.boundary) out += " " + std::to_string(p);
    out += "\n";
  }
  for (const RotationDecl& decl : doc.rotations) {
    out += "rotation " + std::to_string(decl.index) + ": subspace=" + decl.subspace + " subgroup=";
    for (std::size_t i = 0; i < decl.subgroup_words.size(); ++i) {
      if (i) out += ",";
      out += decl.subgroup_words[i];
    }
    for (const auto& [gname, idx] : decl.images)
      out += " image_under " + gname + "=" + std::to_string(idx);
    out += "\n";
  }
  for (const auto& [name, value] : doc.params)
    out += "param " + name + " " + format_double_exact(value) + "\n";
  return out;
}

}  // namespace conekit
