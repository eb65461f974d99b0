// Copyright 2026 The qsblab Authors
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

#include "qsblab/json_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace qsblab::io {

namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::kParse, "complex entries must be [re, im], got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kParse, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

std::string full(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

Json to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v[i]));
  return out;
}

Json to_json(const SpaceLayout& layout) {
  Json out = Json::array();
  for (const auto& s : layout.subsystems()) out.push_back(Json::array({s.label, s.dim}));
  return out;
}

Json to_json(const PureState& psi) {
  return {{"layout", to_json(psi.layout())}, {"amplitudes", to_json(psi.amplitudes())}};
}

Json to_json(const DensityMatrix& rho) {
  return {{"layout", to_json(rho.layout())}, {"matrix", to_json(rho.matrix())}};
}

Json to_json(const Isometry& v) {
  return {{"in", to_json(v.input_layout())},
          {"out", to_json(v.output_layout())},
          {"matrix", to_json(v.matrix())}};
}

Json to_json(const KrausChannel& channel) {
  Json kraus = Json::array();
  for (const auto& k : channel.kraus_ops()) kraus.push_back(to_json(k));
  return {{"in", to_json(channel.input_layout())},
          {"out", to_json(channel.output_layout())},
          {"kraus", std::move(kraus)}};
}

Json to_json(const QsbInstance& instance) {
  return {{"channel", to_json(instance.channel())},
          {"v_abs", to_json(instance.v_abs())},
          {"v_acs", to_json(instance.v_acs())}};
}

Json to_json(const BoundCheck& check) {
  return {{"name", check.name},
          {"lhs", check.lhs},
          {"rhs", check.rhs},
          {"slack", check.slack},
          {"satisfied", check.satisfied}};
}

Json to_json(const EpsilonChainReport& r) {
  Json floors = Json::array();
  for (const auto& f : r.floors) {
    floors.push_back({{"name", f.name}, {"value", f.value}, {"vacuous", f.vacuous}});
  }
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json j = to_json(c.check);
    j["stage"] = c.stage;
    j["applicable"] = c.applicable;
    j["vacuous"] = c.vacuous;
    checks.push_back(std::move(j));
  }
  return {{"eps", r.eps},
          {"eps_input", r.eps_input},
          {"d_a", r.d_a},
          {"eps_prime_b", r.eps_prime_b},
          {"eps_prime_c", r.eps_prime_c},
          {"eps_dprime_b", r.eps_dprime_b},
          {"eps_dprime_c", r.eps_dprime_c},
          {"eps_tprime_b", r.eps_tprime_b},
          {"eps_tprime_c", r.eps_tprime_c},
          {"overlap_floor", r.overlap_floor},
          {"eps_iv_b", r.eps_iv_b},
          {"eps_iv_c", r.eps_iv_c},
          {"eps_iv_b_chain", r.eps_iv_b_chain},
          {"eps_iv_c_chain", r.eps_iv_c_chain},
          {"eps_zero", r.eps_zero},
          {"threshold_candidates", {r.threshold.first, r.threshold.second}},
          {"admissible_b", r.admissible_b},
          {"admissible_c", r.admissible_c},
          {"cloning_contradiction", r.cloning_contradiction},
          {"pair", {r.pair_first, r.pair_second}},
          {"theta_b", r.theta_b},
          {"theta_c", r.theta_c},
          {"theta_prime_b", r.theta_prime_b},
          {"theta_prime_c", r.theta_prime_c},
          {"residual_degenerate", r.residual_degenerate},
          {"copy_fidelity_b", r.copy_fidelity_b},
          {"copy_fidelity_c", r.copy_fidelity_c},
          {"all_satisfied", r.all_satisfied()},
          {"floors", std::move(floors)},
          {"checks", std::move(checks)}};
}

Json to_json(const FrontierPoint& p) {
  return {{"dims", {p.dims.s, p.dims.a, p.dims.b, p.dims.c}},
          {"best_worst_fidelity", p.best_worst_fidelity},
          {"verified_fidelity", p.verified_fidelity},
          {"iterations", p.iterations},
          {"restart", p.restart},
          {"restarts", p.restarts},
          {"seed", p.seed},
          {"env_dim", p.env_dim},
          {"instance", to_json(p.best_instance)}};
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw Error(ErrorCode::kParse, "matrix must be a nonempty list of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::kParse, "ragged matrix row " + std::to_string(r));
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

CVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, "amplitudes must be a list");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  return v;
}

SpaceLayout layout_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, "layout must be a list of [label, dim]");
  std::vector<Subsystem> subs;
  for (const auto& s : j) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_string() || !s[1].is_number_unsigned()) {
      throw Error(ErrorCode::kParse, "layout entry must be [label, dim], got " + s.dump());
    }
    subs.push_back({s[0].get<std::string>(), s[1].get<std::size_t>()});
  }
  return SpaceLayout(std::move(subs));
}

PureState state_from_json(const Json& j) {
  return PureState(layout_from_json(field(j, "layout")), vector_from_json(field(j, "amplitudes")));
}

Isometry isometry_from_json(const Json& j) {
  return Isometry(layout_from_json(field(j, "in")), layout_from_json(field(j, "out")),
                  matrix_from_json(field(j, "matrix")));
}

KrausChannel channel_from_json(const Json& j) {
  const Json& kraus = field(j, "kraus");
  if (!kraus.is_array()) throw Error(ErrorCode::kParse, "kraus must be a list of matrices");
  std::vector<CMatrix> ops;
  for (const auto& k : kraus) ops.push_back(matrix_from_json(k));
  return KrausChannel(layout_from_json(field(j, "in")), layout_from_json(field(j, "out")),
                      std::move(ops));
}

QsbInstance instance_from_json(const Json& j) {
  return QsbInstance(channel_from_json(field(j, "channel")), isometry_from_json(field(j, "v_abs")),
                     isometry_from_json(field(j, "v_acs")));
}

std::string chain_report_csv(const EpsilonChainReport& report) {
  std::ostringstream os;
  os << "stage,lhs,rhs,slack,satisfied,applicable,vacuous\n";
  for (const auto& c : report.checks) {
    os << c.stage << ',' << full(c.check.lhs) << ',' << full(c.check.rhs) << ','
       << full(c.check.slack) << ',' << c.check.satisfied << ',' << c.applicable << ','
       << c.vacuous << '\n';
  }
  return os.str();
}

std::string frontier_csv(const std::vector<FrontierPoint>& points) {
  std::ostringstream os;
  os << "d_S,d_A,d_B,d_C,best_fidelity,restarts,seed\n";
  for (const auto& p : points) {
    os << p.dims.s << ',' << p.dims.a << ',' << p.dims.b << ',' << p.dims.c << ','
       << full(p.best_worst_fidelity) << ',' << p.restarts << ',' << p.seed << '\n';
  }
  return os.str();
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace qsblab::io
