#include "rtnmpc/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rtnmpc/errors.hpp"

namespace rtnmpc {

namespace {

using nlohmann::json;

Mat mat_from_json(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty())
    throw ConfigError("config: " + name + " must be a non-empty array of rows");
  const json& first = j.front();
  if (!first.is_array())
    throw ConfigError("config: " + name + " must be a 2-D array");
  Mat m(j.size(), first.size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != first.size())
      throw ConfigError("config: ragged rows in " + name);
    for (std::size_t c = 0; c < first.size(); ++c) {
      if (!j[r][c].is_number()) throw ConfigError("config: non-numeric entry in " + name);
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

Vec vec_from_json(const json& j, const std::string& name) {
  if (!j.is_array()) throw ConfigError("config: " + name + " must be an array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError("config: non-numeric entry in " + name);
    v(i) = j[i].get<double>();
  }
  return v;
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

double require_positive(const json& j, const std::string& name) {
  if (!j.is_number()) throw ConfigError("config: " + name + " must be a number");
  const double v = j.get<double>();
  if (!(v > 0.0)) throw ConfigError("config: " + name + " must be positive");
  return v;
}

}  // namespace

ContinuousLTI ProblemConfig::make_model() const {
  if (builtin == "double_integrator") {
    Mat A(2, 2), B(2, 1);
    A << 0, 1, 0, 0;
    B << 0, 1;
    return ContinuousLTI(A, B, Mat::Identity(2, 2), Mat::Identity(1, 1));
  }
  if (!builtin.empty()) throw ConfigError("config: unknown builtin model '" + builtin + "'");
  if (!A_c || !B_c || !Q_c || !R_c)
    throw ConfigError("config: model block needs a builtin name or all of A_c, B_c, Q_c, R_c");
  return ContinuousLTI(*A_c, *B_c, *Q_c, *R_c);
}

void ProblemConfig::validate() const {
  const ContinuousLTI model = make_model();  // checks model-block consistency
  if (!(T_d > 0.0)) throw ConfigError("config: discretization.T_d must be positive");
  if (rho && !(*rho > 0.0)) throw ConfigError("config: optimizer.rho must be positive");
  if (!(rho_scale > 0.0)) throw ConfigError("config: optimizer.rho_scale must be positive");
  if (!(r_z > 0.0) || !(r_x > 0.0) || !(r_q > 0.0))
    throw ConfigError("config: region radii must be positive");
  if (x_max && x_max->size() != model.state_dim())
    throw ConfigError("config: region.x_max has wrong dimension");
  if (V_bar && !(*V_bar > 0.0)) throw ConfigError("config: region.V_bar must be positive");
  if (V_bar_q && !(*V_bar_q > 0.0))
    throw ConfigError("config: region.V_bar_q must be positive");
  if (T0 && !(*T0 > 0.0)) throw ConfigError("config: region.T0 must be positive");
  if (est_grid_points < 1) throw ConfigError("config: estimation.grid_points must be >= 1");
  if (est_T_min && (!(*est_T_min > 0.0) || !(*est_T_min <= T_d)))
    throw ConfigError("config: estimation.T_min must lie in (0, T_d]");
  if (est_samples < 1) throw ConfigError("config: estimation.samples must be >= 1");
  if (sweep_points < 1) throw ConfigError("config: sweep.points must be >= 1");
  const double s_lo = sweep_T_min.value_or(T_d / 100.0);
  const double s_hi = sweep_T_max.value_or(T_d);
  if (!(s_lo > 0.0) || !(s_hi > s_lo))
    throw ConfigError("config: sweep range must satisfy 0 < T_min < T_max");
  if (x0 && x0->size() != model.state_dim())
    throw ConfigError("config: simulation.x0 has wrong dimension");
  if (u0 && u0->size() != model.input_dim())
    throw ConfigError("config: simulation.u0 has wrong dimension");
  if (sim_N < 1) throw ConfigError("config: simulation.N must be >= 1");
  if (sim_T && !(*sim_T > 0.0)) throw ConfigError("config: simulation.T must be positive");
}

ProblemConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  ProblemConfig c;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("config: seed must be unsigned");
    c.seed = j["seed"].get<std::uint64_t>();
  }

  if (!j.contains("model")) throw ConfigError("config: missing model block");
  const json& jm = j["model"];
  if (jm.contains("builtin")) {
    c.builtin = jm["builtin"].get<std::string>();
  } else {
    c.A_c = mat_from_json(jm.at("A_c"), "model.A_c");
    c.B_c = mat_from_json(jm.at("B_c"), "model.B_c");
    c.Q_c = mat_from_json(jm.at("Q_c"), "model.Q_c");
    c.R_c = mat_from_json(jm.at("R_c"), "model.R_c");
  }

  if (!j.contains("discretization") || !j["discretization"].contains("T_d"))
    throw ConfigError("config: missing discretization.T_d");
  c.T_d = require_positive(j["discretization"]["T_d"], "discretization.T_d");

  if (j.contains("optimizer")) {
    const json& jo = j["optimizer"];
    if (jo.contains("variant")) {
      const std::string v = jo["variant"].get<std::string>();
      if (v == "fixed_hessian_gradient")
        c.variant = OptVariant::fixed_hessian_gradient;
      else if (v == "exact_newton")
        c.variant = OptVariant::exact_newton;
      else
        throw ConfigError("config: unknown optimizer.variant '" + v + "'");
    }
    if (jo.contains("rho")) c.rho = require_positive(jo["rho"], "optimizer.rho");
    if (jo.contains("rho_scale"))
      c.rho_scale = require_positive(jo["rho_scale"], "optimizer.rho_scale");
    if (jo.contains("paper_literal_h")) c.paper_literal_h = jo["paper_literal_h"].get<bool>();
  }

  if (j.contains("region")) {
    const json& jr = j["region"];
    if (jr.contains("r_z")) c.r_z = require_positive(jr["r_z"], "region.r_z");
    if (jr.contains("r_x")) c.r_x = require_positive(jr["r_x"], "region.r_x");
    if (jr.contains("r_q")) c.r_q = require_positive(jr["r_q"], "region.r_q");
    if (jr.contains("x_max")) c.x_max = vec_from_json(jr["x_max"], "region.x_max");
    if (jr.contains("V_bar_scale"))
      c.V_bar_scale = require_positive(jr["V_bar_scale"], "region.V_bar_scale");
    if (jr.contains("V_bar")) c.V_bar = require_positive(jr["V_bar"], "region.V_bar");
    if (jr.contains("V_bar_q")) c.V_bar_q = require_positive(jr["V_bar_q"], "region.V_bar_q");
    if (jr.contains("T0")) c.T0 = require_positive(jr["T0"], "region.T0");
  }

  if (j.contains("estimation")) {
    const json& je = j["estimation"];
    if (je.contains("grid_points")) c.est_grid_points = je["grid_points"].get<long>();
    if (je.contains("T_min")) c.est_T_min = require_positive(je["T_min"], "estimation.T_min");
    if (je.contains("mu_mode")) {
      const std::string m = je["mu_mode"].get<std::string>();
      if (m == "lq")
        c.mu_mode = MuMode::lq;
      else if (m == "sampled")
        c.mu_mode = MuMode::sampled;
      else
        throw ConfigError("config: unknown estimation.mu_mode '" + m + "'");
    }
    if (je.contains("samples")) c.est_samples = je["samples"].get<long>();
  }

  if (j.contains("sweep")) {
    const json& js = j["sweep"];
    if (js.contains("T_min")) c.sweep_T_min = require_positive(js["T_min"], "sweep.T_min");
    if (js.contains("T_max")) c.sweep_T_max = require_positive(js["T_max"], "sweep.T_max");
    if (js.contains("points")) c.sweep_points = js["points"].get<long>();
    if (js.contains("log")) c.sweep_log = js["log"].get<bool>();
  }

  if (j.contains("simulation")) {
    const json& js = j["simulation"];
    if (js.contains("x0")) c.x0 = vec_from_json(js["x0"], "simulation.x0");
    if (js.contains("u0")) c.u0 = vec_from_json(js["u0"], "simulation.u0");
    if (js.contains("N")) c.sim_N = js["N"].get<long>();
    if (js.contains("T")) c.sim_T = require_positive(js["T"], "simulation.T");
    if (js.contains("error_space")) {
      const std::string e = js["error_space"].get<std::string>();
      if (e == "u0")
        c.error_space = ErrorSpace::u0;
      else if (e == "z")
        c.error_space = ErrorSpace::z;
      else
        throw ConfigError("config: unknown simulation.error_space '" + e + "'");
    }
  }

  if (j.contains("output") && j["output"].contains("dir"))
    c.out_dir = j["output"]["dir"].get<std::string>();

  c.validate();
  return c;
}

ProblemConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const ProblemConfig& c) {
  json j;
  j["seed"] = c.seed;
  if (!c.builtin.empty()) {
    j["model"]["builtin"] = c.builtin;
  } else {
    j["model"]["A_c"] = mat_to_json(*c.A_c);
    j["model"]["B_c"] = mat_to_json(*c.B_c);
    j["model"]["Q_c"] = mat_to_json(*c.Q_c);
    j["model"]["R_c"] = mat_to_json(*c.R_c);
  }
  j["discretization"]["T_d"] = c.T_d;
  j["optimizer"]["variant"] = c.variant == OptVariant::fixed_hessian_gradient
                                  ? "fixed_hessian_gradient"
                                  : "exact_newton";
  if (c.rho) j["optimizer"]["rho"] = *c.rho;
  j["optimizer"]["rho_scale"] = c.rho_scale;
  j["optimizer"]["paper_literal_h"] = c.paper_literal_h;
  j["region"]["r_z"] = c.r_z;
  j["region"]["r_x"] = c.r_x;
  j["region"]["r_q"] = c.r_q;
  if (c.x_max) j["region"]["x_max"] = vec_to_json(*c.x_max);
  j["region"]["V_bar_scale"] = c.V_bar_scale;
  if (c.V_bar) j["region"]["V_bar"] = *c.V_bar;
  if (c.V_bar_q) j["region"]["V_bar_q"] = *c.V_bar_q;
  if (c.T0) j["region"]["T0"] = *c.T0;
  j["estimation"]["grid_points"] = c.est_grid_points;
  if (c.est_T_min) j["estimation"]["T_min"] = *c.est_T_min;
  j["estimation"]["mu_mode"] = c.mu_mode == MuMode::lq ? "lq" : "sampled";
  j["estimation"]["samples"] = c.est_samples;
  if (c.sweep_T_min) j["sweep"]["T_min"] = *c.sweep_T_min;
  if (c.sweep_T_max) j["sweep"]["T_max"] = *c.sweep_T_max;
  j["sweep"]["points"] = c.sweep_points;
  j["sweep"]["log"] = c.sweep_log;
  if (c.x0) j["simulation"]["x0"] = vec_to_json(*c.x0);
  if (c.u0) j["simulation"]["u0"] = vec_to_json(*c.u0);
  j["simulation"]["N"] = c.sim_N;
  if (c.sim_T) j["simulation"]["T"] = *c.sim_T;
  j["simulation"]["error_space"] = c.error_space == ErrorSpace::u0 ? "u0" : "z";
  if (c.out_dir) j["output"]["dir"] = *c.out_dir;
  return j.dump(2) + "\n";
}

bool operator==(const ProblemConfig& a, const ProblemConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

ProblemConfig default_config() {
  ProblemConfig c;
  c.builtin = "double_integrator";
  c.T_d = 0.1;
  Vec xm(2);
  xm << 1.0, 0.0;
  c.x_max = xm;
  Vec x0(2);
  x0 << 1.0, 0.0;
  c.x0 = x0;
  c.u0 = Vec::Zero(1);
  return c;
}

}  // namespace rtnmpc
