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

#ifndef QGERM_GERM_MODEL_IO_HPP
#define QGERM_GERM_MODEL_IO_HPP

#include "qgerm/circuit_io.hpp"
#include "qgerm/germ.hpp"

namespace qgerm {

namespace io_detail {

inline Vector parse_state(const Json& arr) {
  Vector v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) {
    const Json& cell = arr.at(i);
    if (!cell.is_array() || cell.size() != 2)
      throw Error("state entries must be [re, im] pairs");
    v[i] = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
  }
  return v;
}

inline Json emit_state(const Vector& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i)
    arr.push_back({v[i].real(), v[i].imag()});
  return arr;
}

}  // namespace io_detail

inline GermModel parse_germ_model(const Json& doc) {
  std::string family = doc.at("family").get<std::string>();
  GermModel m;
  if (family == "identity") {
    io_detail::reject_unknown(doc, {"family", "dim", "g0", "site_overrides"},
                              "germ model");
    m = germ_identity(doc.value("dim", 1));
  } else if (family == "coherent_rotation") {
    io_detail::reject_unknown(
        doc, {"family", "dim", "g0", "theta", "axis", "site_overrides"},
        "germ model");
    std::string axis = doc.value("axis", "X");
    int ax = axis == "X" ? 1 : axis == "Y" ? 2 : axis == "Z" ? 3 : 0;
    if (ax == 0) throw Error("axis must be X, Y or Z");
    m = germ_coherent_rotation(doc.at("theta").get<double>(), ax,
                               doc.value("dim", 1));
  } else if (family == "delayed_rotation") {
    io_detail::reject_unknown(
        doc, {"family", "clock_dim", "threshold", "theta", "g0",
              "site_overrides"},
        "germ model");
    m = germ_delayed_rotation(doc.at("clock_dim").get<int>(),
                              doc.at("threshold").get<int>(),
                              doc.at("theta").get<double>());
  } else if (family == "spreading_flag") {
    io_detail::reject_unknown(doc, {"family", "theta", "g0", "site_overrides"},
                              "germ model");
    m = germ_spreading_flag(doc.at("theta").get<double>());
  } else {
    throw Error("unknown germ family '" + family + "'");
  }
  if (doc.contains("g0")) m.g0 = io_detail::parse_state(doc.at("g0"));
  if (doc.contains("site_overrides")) {
    for (const Json& ov : doc.at("site_overrides")) {
      io_detail::reject_unknown(ov, {"edge", "gate", "g0_site", "matrix", "g0"},
                                "site override");
      if (ov.contains("edge")) {
        m.edge_overrides[ov.at("edge").get<int>()] =
            io_detail::parse_matrix(ov.at("matrix"));
      } else if (ov.contains("gate")) {
        m.mixer_overrides[ov.at("gate").get<int>()] =
            io_detail::parse_matrix(ov.at("matrix"));
      } else if (ov.contains("g0_site")) {
        m.g0_overrides[ov.at("g0_site").get<int>()] =
            io_detail::parse_state(ov.at("g0"));
      } else {
        throw Error("site override needs \"edge\", \"gate\" or \"g0_site\"");
      }
    }
  }
  m.check();
  return m;
}

inline Json emit_germ_model(const GermModel& m) {
  Json doc;
  doc["family"] = germ_family_name(m.family);
  switch (m.family) {
    case GermFamily::Identity:
      doc["dim"] = m.dim;
      break;
    case GermFamily::CoherentRotation:
      doc["dim"] = m.dim;
      doc["theta"] = m.theta;
      doc["axis"] = m.axis == 1 ? "X" : m.axis == 2 ? "Y" : "Z";
      break;
    case GermFamily::DelayedRotation:
      doc["clock_dim"] = m.dim;
      doc["threshold"] = m.threshold;
      doc["theta"] = m.theta;
      break;
    case GermFamily::SpreadingFlag:
      doc["theta"] = m.theta;
      break;
  }
  doc["g0"] = io_detail::emit_state(m.g0);
  if (!m.edge_overrides.empty() || !m.mixer_overrides.empty() ||
      !m.g0_overrides.empty()) {
    Json ovs = Json::array();
    for (const auto& [id, mx] : m.edge_overrides)
      ovs.push_back({{"edge", id}, {"matrix", io_detail::emit_matrix(mx)}});
    for (const auto& [id, mx] : m.mixer_overrides)
      ovs.push_back({{"gate", id}, {"matrix", io_detail::emit_matrix(mx)}});
    for (const auto& [id, v] : m.g0_overrides)
      ovs.push_back({{"g0_site", id}, {"g0", io_detail::emit_state(v)}});
    doc["site_overrides"] = std::move(ovs);
  }
  return doc;
}

inline GermModel load_germ_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open germ model file: " + path);
  Json doc;
  try {
    in >> doc;
  } catch (const Json::exception& e) {
    throw Error("parse error in " + path + ": " + e.what());
  }
  try {
    return parse_germ_model(doc);
  } catch (const Json::exception& e) {
    throw Error("bad germ model document " + path + ": " + e.what());
  }
}

inline void save_germ_model(const GermModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write germ model file: " + path);
  out << emit_germ_model(m).dump(2) << "\n";
}

}  // namespace qgerm

#endif  // QGERM_GERM_MODEL_IO_HPP
