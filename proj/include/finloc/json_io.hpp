#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "finloc/bmodule.hpp"
#include "finloc/errors.hpp"
#include "finloc/hilbert.hpp"
#include "finloc/homs.hpp"
#include "finloc/lattice.hpp"
#include "finloc/pmatrix.hpp"
#include "finloc/poset.hpp"
#include "finloc/report.hpp"

namespace finloc {

using json = nlohmann::ordered_json;

// {"elements": [names], "leq": [[i,j], ...]}; the reflexive-transitive
// closure is applied, antisymmetry is then checked.
inline Poset parse_poset(const json& j) {
  if (!j.contains("elements")) throw ParseError("poset needs an \"elements\" array");
  std::vector<std::string> names;
  for (const auto& e : j.at("elements")) names.push_back(e.get<std::string>());
  std::vector<std::pair<int, int>> pairs;
  if (j.contains("leq"))
    for (const auto& p : j.at("leq")) {
      if (!p.is_array() || p.size() != 2) throw ParseError("leq entries are pairs [i, j]");
      pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    }
  return Poset::from_pairs(std::move(names), pairs);
}

// A down-set frame from a poset ({"poset": {...}} or a bare poset object),
// or explicit tables {"elements": [...], "join": [[...]], "meet": [[...]]}.
inline Lattice parse_lattice(const json& j) {
  if (j.contains("poset")) return Lattice::downset_frame(parse_poset(j.at("poset")));
  if (j.contains("join") && j.contains("meet") && j.contains("elements")) {
    std::vector<std::string> names;
    for (const auto& e : j.at("elements")) names.push_back(e.get<std::string>());
    auto table = [](const json& t) {
      std::vector<std::vector<int>> out;
      for (const auto& row : t) out.push_back(row.get<std::vector<int>>());
      return out;
    };
    return Lattice::from_tables(std::move(names), table(j.at("join")), table(j.at("meet")));
  }
  if (j.contains("elements")) return Lattice::downset_frame(parse_poset(j));
  throw ParseError("lattice needs a \"poset\", a bare poset, or \"elements\"/\"join\"/\"meet\"");
}

// {"base": <lattice>, "carrier": <lattice>, "pstar": [...]} for map-backed
// modules, or {"base": ..., "carrier": ..., "action": [[...]]} for raw ones.
inline BModule parse_module(const json& j) {
  if (!j.contains("base") || !j.contains("carrier"))
    throw ParseError("module needs \"base\" and \"carrier\"");
  Lattice base = parse_lattice(j.at("base"));
  Lattice carrier = parse_lattice(j.at("carrier"));
  if (j.contains("pstar"))
    return BModule::from_map(base, carrier, j.at("pstar").get<std::vector<int>>());
  if (j.contains("action")) {
    std::vector<std::vector<int>> action;
    for (const auto& row : j.at("action")) action.push_back(row.get<std::vector<int>>());
    return BModule::from_action(base, carrier, action);
  }
  throw ParseError("module needs either \"pstar\" or an \"action\" table");
}

// {"base": <lattice>, "index": [labels], "entries": [[...element indices...]]}
inline BMatrix parse_matrix(const json& j) {
  if (!j.contains("base") || !j.contains("index") || !j.contains("entries"))
    throw ParseError("matrix needs \"base\", \"index\" and \"entries\"");
  Lattice base = parse_lattice(j.at("base"));
  std::vector<std::string> labels;
  for (const auto& e : j.at("index")) labels.push_back(e.get<std::string>());
  std::vector<std::vector<int>> rows;
  for (const auto& row : j.at("entries")) rows.push_back(row.get<std::vector<int>>());
  return square_matrix(base, std::move(labels), rows);
}

// {"source": <module>, "target": <module>, "table": [image indices]}
inline ModuleHom parse_hom(const json& j) {
  if (!j.contains("source") || !j.contains("target") || !j.contains("table"))
    throw ParseError("hom needs \"source\", \"target\" and \"table\"");
  ModuleHom h{parse_module(j.at("source")), parse_module(j.at("target")),
              j.at("table").get<std::vector<int>>()};
  if (static_cast<int>(h.table.size()) != h.src.carrier().size())
    throw ParseError("hom table size does not match the source carrier");
  for (int v : h.table)
    if (v < 0 || v >= h.tgt.carrier().size()) throw ParseError("hom table entry out of range");
  return h;
}

// {"source": <module>, "target": <module>, "fstar": [inverse image indices]}
inline BLocaleMap parse_map(const json& j) {
  if (!j.contains("source") || !j.contains("target") || !j.contains("fstar"))
    throw ParseError("map needs \"source\", \"target\" and \"fstar\"");
  return make_blocale_map(parse_module(j.at("source")), parse_module(j.at("target")),
                          j.at("fstar").get<std::vector<int>>());
}

// {"module": <module>, "inner": [[...]]}; without "inner" the canonical
// support inner product of an open module is used.
inline HilbertModule parse_hilbert(const json& j) {
  if (!j.contains("module")) throw ParseError("hilbert input needs a \"module\"");
  BModule m = parse_module(j.at("module"));
  if (j.contains("inner")) {
    std::vector<std::vector<int>> t;
    for (const auto& row : j.at("inner")) t.push_back(row.get<std::vector<int>>());
    return make_hilbert(m, inner_from_table(m, t));
  }
  return hilbert_from_support(m);
}

inline json law_report_to_json(const LawReport& rep) {
  json out;
  out["subject"] = rep.subject;
  out["pass"] = rep.all_pass();
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json jc;
    jc["law"] = c.law;
    jc["pass"] = c.pass;
    if (!c.pass) {
      jc["witness"] = c.witness;
      jc["elements"] = c.elems;
    }
    checks.push_back(std::move(jc));
  }
  out["checks"] = std::move(checks);
  return out;
}

inline json lattice_to_json(const Lattice& l) {
  json out;
  json names = json::array();
  for (int i = 0; i < l.size(); ++i) names.push_back(l.name(i));
  out["elements"] = std::move(names);
  json jt = json::array(), mt = json::array();
  for (int i = 0; i < l.size(); ++i) {
    json jr = json::array(), mr = json::array();
    for (int k = 0; k < l.size(); ++k) {
      jr.push_back(l.join(i, k));
      mr.push_back(l.meet(i, k));
    }
    jt.push_back(std::move(jr));
    mt.push_back(std::move(mr));
  }
  out["join"] = std::move(jt);
  out["meet"] = std::move(mt);
  return out;
}

inline json module_to_json(const BModule& m) {
  json out;
  out["base"] = lattice_to_json(m.base());
  out["carrier"] = lattice_to_json(m.carrier());
  json action = json::array();
  for (int b = 0; b < m.base().size(); ++b) {
    json row = json::array();
    for (int x = 0; x < m.carrier().size(); ++x) row.push_back(m.act(b, x));
    action.push_back(std::move(row));
  }
  out["action"] = std::move(action);
  out["stable"] = m.stable();
  out["open"] = m.is_open();
  if (m.is_open()) {
    out["etale"] = m.is_etale();
    out["sections"] = m.sections();
    out["support"] = m.candidate_support();
  }
  return out;
}

inline json inner_to_json(const InnerProduct& ip) {
  const int n = ip.mod.carrier().size();
  json rows = json::array();
  for (int x = 0; x < n; ++x) {
    json row = json::array();
    for (int y = 0; y < n; ++y) row.push_back(ip.at(x, y));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json matrix_to_json(const BMatrix& m) {
  json out;
  out["base"] = lattice_to_json(m.base);
  out["index"] = m.col_labels;
  json rows = json::array();
  for (int r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols; ++c) row.push_back(m.at(r, c));
    rows.push_back(std::move(row));
  }
  out["entries"] = std::move(rows);
  return out;
}

}  // namespace finloc
