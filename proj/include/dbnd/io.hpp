#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dbnd/instance.hpp"
#include "dbnd/rational.hpp"

namespace dbnd {

// Instance text format:
//
//   # comment
//   directed 0
//   n 4
//   [edges]
//   0 1 3/2
//   [bounds]
//   0 2
//   [inbounds]
//   [requirement]
//   outconn 0 2 | kconn 2 | element 2
//   terminals 0 3        (element only)
//   0 3 2                (element only: u v r)
//
// The header lines come first. Sections may be omitted but not repeated.

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline int parse_int(const std::string& w, int line) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(w, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != w.size() || w.empty())
    throw Error(Errc::kParse, "line " + std::to_string(line) + ": expected an integer, got '" + w + "'");
  return v;
}

}  // namespace detail

inline Instance parse_instance(std::istream& in) {
  Instance inst;
  bool have_n = false, have_req = false;
  std::string section;
  std::vector<std::string> seen;
  std::optional<ElementRequirement> element;
  int lineno = 0;
  auto fail = [&](const std::string& msg) { throw Error(Errc::kParse, "line " + std::to_string(lineno) + ": " + msg); };
  auto need_n = [&] {
    if (!have_n) fail("'n' must precede the sections");
  };
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header");
      section = line.substr(1, line.size() - 2);
      if (section != "edges" && section != "bounds" && section != "inbounds" && section != "requirement")
        fail("unknown section [" + section + "]");
      if (std::find(seen.begin(), seen.end(), section) != seen.end()) fail("section [" + section + "] repeated");
      seen.push_back(section);
      need_n();
      continue;
    }
    const auto w = detail::words(line);
    auto num = [&](std::size_t i) { return detail::parse_int(w[i], lineno); };
    if (section.empty()) {
      if (w.size() != 2) fail("header lines are 'directed 0|1' and 'n N'");
      if (w[0] == "directed") {
        const int d = num(1);
        if (d != 0 && d != 1) fail("directed must be 0 or 1");
        inst.directed = d == 1;
      } else if (w[0] == "n") {
        inst.n = num(1);
        if (inst.n < 1 || inst.n > NodeSet::kMaxNodes) fail("n must be in [1, 64]");
        have_n = true;
      } else {
        fail("unknown header key '" + w[0] + "'");
      }
    } else if (section == "edges") {
      if (w.size() != 3) fail("edge lines are 'u v cost'");
      const int u = num(0), v = num(1);
      if (u < 0 || v < 0 || u >= inst.n || v >= inst.n) fail("edge endpoint out of range");
      inst.edges.push_back(make_edge(inst.directed, u, v, parse_rational(w[2])));
    } else if (section == "bounds" || section == "inbounds") {
      if (w.size() != 2) fail("bound lines are 'v b'");
      auto& b = section == "bounds" ? inst.bounds : inst.in_bounds;
      const int v = num(0);
      if (v < 0 || v >= inst.n) fail("bounded node out of range");
      b.resize(inst.n);
      if (b[v]) fail("node " + w[0] + " bounded twice");
      b[v] = num(1);
    } else {  // requirement
      if (!have_req) {
        have_req = true;
        if (w[0] == "outconn" && w.size() == 3) {
          inst.requirement = OutConnRequirement{num(1), num(2)};
        } else if (w[0] == "kconn" && w.size() == 2) {
          inst.requirement = KConnRequirement{num(1)};
        } else if (w[0] == "element" && w.size() == 2) {
          element = ElementRequirement{num(1), NodeSet{}, RequirementMatrix(inst.n)};
        } else {
          fail("requirement is 'outconn s k', 'kconn k' or 'element k'");
        }
      } else if (element && w[0] == "terminals") {
        for (std::size_t i = 1; i < w.size(); ++i) {
          const int t = num(i);
          if (t < 0 || t >= inst.n) fail("terminal out of range");
          element->terminals = element->terminals.with(t);
        }
      } else if (element && w.size() == 3) {
        const int u = num(0), v = num(1);
        if (u < 0 || v < 0 || u >= inst.n || v >= inst.n) fail("requirement pair out of range");
        element->r.set(u, v, num(2));
      } else {
        fail("unexpected requirement line");
      }
    }
  }
  if (!have_n) throw Error(Errc::kParse, "missing 'n'");
  if (!have_req) throw Error(Errc::kParse, "missing [requirement]");
  if (element) inst.requirement = *element;
  return inst;
}

inline Instance parse_instance_text(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

inline std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "directed " << (inst.directed ? 1 : 0) << "\n";
  out << "n " << inst.n << "\n";
  out << "[edges]\n";
  for (const auto& e : inst.edges) out << e.tail << " " << e.head << " " << to_string(e.cost) << "\n";
  auto bounds = [&](const char* name, const std::vector<std::optional<int>>& b) {
    bool any = false;
    for (const auto& x : b) any = any || x.has_value();
    if (!any) return;
    out << "[" << name << "]\n";
    for (std::size_t v = 0; v < b.size(); ++v)
      if (b[v]) out << v << " " << *b[v] << "\n";
  };
  bounds("bounds", inst.bounds);
  bounds("inbounds", inst.in_bounds);
  out << "[requirement]\n";
  std::visit([&](const auto& r) {
    using T = std::decay_t<decltype(r)>;
    if constexpr (std::is_same_v<T, OutConnRequirement>) {
      out << "outconn " << r.root << " " << r.k << "\n";
    } else if constexpr (std::is_same_v<T, KConnRequirement>) {
      out << "kconn " << r.k << "\n";
    } else {
      out << "element " << r.k << "\n";
      out << "terminals";
      for (int t : r.terminals) out << " " << t;
      out << "\n";
      for (int u = 0; u < inst.n; ++u)
        for (int v = u + 1; v < inst.n; ++v)
          if (r.r(u, v) > 0) out << u << " " << v << " " << r.r(u, v) << "\n";
    }
  }, inst.requirement);
  return out.str();
}

// Bounds vectors are compared up to trailing unbounded entries.
inline bool same_instance(const Instance& a, const Instance& b) {
  auto norm = [&](std::vector<std::optional<int>> v, int n) {
    v.resize(n);
    return v;
  };
  return a.directed == b.directed && a.n == b.n && a.edges == b.edges && norm(a.bounds, a.n) == norm(b.bounds, b.n) &&
         norm(a.in_bounds, a.n) == norm(b.in_bounds, b.n) && a.requirement == b.requirement;
}

// Solution: a [solution] section of lines "id u v"; other sections are skipped,
// so a solve report can be read back directly.
inline std::vector<int> parse_solution(std::istream& in, const Instance& inst) {
  std::vector<int> ids;
  bool inside = false, found = false;
  int lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      inside = line == "[solution]";
      found = found || inside;
      continue;
    }
    if (!inside) continue;
    const auto w = detail::words(line);
    if (w.size() != 3) throw Error(Errc::kParse, "line " + std::to_string(lineno) + ": solution lines are 'id u v'");
    const int id = detail::parse_int(w[0], lineno);
    if (id < 0 || id >= inst.m()) throw Error(Errc::kParse, "line " + std::to_string(lineno) + ": edge id out of range");
    Edge want = make_edge(inst.directed, detail::parse_int(w[1], lineno), detail::parse_int(w[2], lineno), 0);
    if (inst.edges[id].tail != want.tail || inst.edges[id].head != want.head)
      throw Error(Errc::kParse, "line " + std::to_string(lineno) + ": edge " + w[0] + " has different endpoints");
    ids.push_back(id);
  }
  if (!found) throw Error(Errc::kParse, "no [solution] section");
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw Error(Errc::kParse, "edge listed twice");
  return ids;
}

inline std::vector<int> parse_solution_text(const std::string& text, const Instance& inst) {
  std::istringstream in(text);
  return parse_solution(in, inst);
}

inline std::string serialize_solution(const Instance& inst, const std::vector<int>& ids) {
  std::ostringstream out;
  out << "[solution]\n";
  for (int id : ids) out << id << " " << inst.edges[id].tail << " " << inst.edges[id].head << "\n";
  return out.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kParse, "cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace dbnd
