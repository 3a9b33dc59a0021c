// Copyright 2026 The qgerm authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QGERM_CIRCUIT_IO_HPP
#define QGERM_CIRCUIT_IO_HPP

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include <json.hpp>

#include "qgerm/circuit.hpp"

namespace qgerm {

using Json = nlohmann::json;

namespace io_detail {

inline void reject_unknown(const Json& obj, const std::set<std::string>& ok,
                           const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key()))
      throw Error("unknown field '" + it.key() + "' in " + where);
}

inline Matrix parse_matrix(const Json& rows) {
  Index n = static_cast<Index>(rows.size());
  Matrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    const Json& row = rows.at(r);
    if (static_cast<Index>(row.size()) != n)
      throw Error("matrix is not square");
    for (Index c = 0; c < n; ++c) {
      const Json& cell = row.at(c);
      if (!cell.is_array() || cell.size() != 2)
        throw Error("matrix entries must be [re, im] pairs");
      m(r, c) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  return m;
}

inline Json emit_matrix(const Matrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline int exact_log2(size_t n, const std::string& what) {
  int k = 0;
  size_t v = 1;
  while (v < n) {
    v <<= 1;
    ++k;
  }
  if (v != n) throw Error(what + " size must be a power of two");
  return k;
}

}  // namespace io_detail

inline MixedCircuit parse_circuit(const Json& doc) {
  io_detail::reject_unknown(doc, {"name", "nodes", "edges"}, "circuit");
  MixedCircuit c;
  c.name = doc.value("name", "");

  // Boundary node ports are inferred from the edges that touch them.
  std::map<NodeId, std::map<int, EdgeKind>> input_ports, output_ports;
  for (const Json& je : doc.at("edges")) {
    io_detail::reject_unknown(je, {"from", "to", "type"}, "edge");
    std::string type = je.at("type").get<std::string>();
    if (type != "q" && type != "c")
      throw Error("edge type must be \"q\" or \"c\"");
    EdgeKind kind = type == "q" ? EdgeKind::Qubit : EdgeKind::Bit;
    Endpoint from{je.at("from").at(0).get<int>(), je.at("from").at(1).get<int>()};
    Endpoint to{je.at("to").at(0).get<int>(), je.at("to").at(1).get<int>()};
    c.edges.push_back(Edge{static_cast<EdgeId>(c.edges.size()), from, to, kind});
  }
  for (const Json& jn : doc.at("nodes")) {
    std::string kind = jn.at("kind").get<std::string>();
    NodeId id = jn.at("id").get<int>();
    if (kind == "input" || kind == "output") {
      io_detail::reject_unknown(jn, {"id", "kind"}, "boundary node");
      std::map<int, EdgeKind> ports;
      for (const Edge& e : c.edges) {
        if (kind == "input" && e.from.node == id) ports[e.from.port] = e.kind;
        if (kind == "output" && e.to.node == id) ports[e.to.port] = e.kind;
      }
      int max_port = ports.empty() ? -1 : ports.rbegin()->first;
      std::vector<EdgeKind> list;
      for (int p = 0; p <= max_port; ++p) {
        auto it = ports.find(p);
        if (it == ports.end())
          throw Error("boundary node " + std::to_string(id) +
                      " has a gap in its port numbering");
        list.push_back(it->second);
      }
      if (kind == "input")
        c.nodes.push_back(Node{id, InputNode{std::move(list)}});
      else
        c.nodes.push_back(Node{id, OutputNode{std::move(list)}});
    } else if (kind == "init0") {
      io_detail::reject_unknown(jn, {"id", "kind"}, "init0 node");
      c.nodes.push_back(Node{id, InitZero{}});
    } else if (kind == "measure") {
      io_detail::reject_unknown(jn, {"id", "kind"}, "measure node");
      c.nodes.push_back(Node{id, MeasureZ{}});
    } else if (kind == "classical") {
      io_detail::reject_unknown(jn, {"id", "kind", "table"}, "classical node");
      const Json& table = jn.at("table");
      ClassicalDet g;
      g.n_in = io_detail::exact_log2(table.size(), "classical table");
      g.n_out = -1;
      for (const Json& entry : table) {
        std::string bits = entry.get<std::string>();
        if (g.n_out < 0) g.n_out = static_cast<int>(bits.size());
        if (static_cast<int>(bits.size()) != g.n_out)
          throw Error("classical table entries must have equal length");
        uint32_t v = 0;
        for (int j = 0; j < g.n_out; ++j) {
          if (bits[j] != '0' && bits[j] != '1')
            throw Error("classical table entries must be bitstrings");
          if (bits[j] == '1') v |= uint32_t(1) << j;
        }
        g.table.push_back(v);
      }
      c.nodes.push_back(Node{id, std::move(g)});
    } else if (kind == "unitary") {
      io_detail::reject_unknown(jn, {"id", "kind", "gate", "matrix", "controls"},
                                "unitary node");
      UnitaryGate g;
      g.controls = jn.value("controls", 0);
      if (jn.contains("gate") == jn.contains("matrix"))
        throw Error("unitary node needs exactly one of \"gate\", \"matrix\"");
      if (jn.contains("gate")) {
        g.name = jn.at("gate").get<std::string>();
        auto m = gates::builtin(g.name);
        if (!m) throw Error("unknown builtin gate '" + g.name + "'");
        g.matrix = *m;
      } else {
        g.matrix = io_detail::parse_matrix(jn.at("matrix"));
      }
      g.qubits = io_detail::exact_log2(static_cast<size_t>(g.matrix.rows()),
                                       "unitary matrix");
      c.nodes.push_back(Node{id, std::move(g)});
    } else {
      throw Error("unknown node kind '" + kind + "'");
    }
  }
  return c;
}

inline Json emit_circuit(const MixedCircuit& c) {
  Json doc;
  doc["name"] = c.name;
  Json nodes = Json::array();
  std::vector<const Node*> sorted;
  for (const Node& n : c.nodes) sorted.push_back(&n);
  std::sort(sorted.begin(), sorted.end(),
            [](const Node* a, const Node* b) { return a->id < b->id; });
  for (const Node* n : sorted) {
    Json jn;
    jn["id"] = n->id;
    std::visit(
        [&](const auto& g) {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, InputNode>) jn["kind"] = "input";
          if constexpr (std::is_same_v<T, OutputNode>) jn["kind"] = "output";
          if constexpr (std::is_same_v<T, InitZero>) jn["kind"] = "init0";
          if constexpr (std::is_same_v<T, MeasureZ>) jn["kind"] = "measure";
          if constexpr (std::is_same_v<T, ClassicalDet>) {
            jn["kind"] = "classical";
            Json table = Json::array();
            for (uint32_t v : g.table) {
              std::string bits(g.n_out, '0');
              for (int j = 0; j < g.n_out; ++j)
                if (v & (uint32_t(1) << j)) bits[j] = '1';
              table.push_back(std::move(bits));
            }
            jn["table"] = std::move(table);
          }
          if constexpr (std::is_same_v<T, UnitaryGate>) {
            jn["kind"] = "unitary";
            jn["controls"] = g.controls;
            if (!g.name.empty())
              jn["gate"] = g.name;
            else
              jn["matrix"] = io_detail::emit_matrix(g.matrix);
          }
        },
        n->kind);
    nodes.push_back(std::move(jn));
  }
  doc["nodes"] = std::move(nodes);
  Json edges = Json::array();
  std::vector<const Edge*> es;
  for (const Edge& e : c.edges) es.push_back(&e);
  std::sort(es.begin(), es.end(),
            [](const Edge* a, const Edge* b) { return a->id < b->id; });
  for (const Edge* e : es) {
    Json je;
    je["from"] = {e->from.node, e->from.port};
    je["to"] = {e->to.node, e->to.port};
    je["type"] = e->kind == EdgeKind::Qubit ? "q" : "c";
    edges.push_back(std::move(je));
  }
  doc["edges"] = std::move(edges);
  return doc;
}

inline MixedCircuit load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open circuit file: " + path);
  Json doc;
  try {
    in >> doc;
  } catch (const Json::exception& e) {
    throw Error("parse error in " + path + ": " + e.what());
  }
  try {
    return parse_circuit(doc);
  } catch (const Json::exception& e) {
    throw Error("bad circuit document " + path + ": " + e.what());
  }
}

inline void save_circuit(const MixedCircuit& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write circuit file: " + path);
  out << emit_circuit(c).dump(2) << "\n";
}

}  // namespace qgerm

#endif  // QGERM_CIRCUIT_IO_HPP
