#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "amech/models.hpp"

namespace amech {

using Json = nlohmann::json;

namespace detail {

inline Mat matrix_from_json(const Json& j, int rows, int cols, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    throw ConfigError(std::string(what) + ": expected " + std::to_string(rows) + " rows");
  }
  Mat out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw ConfigError(std::string(what) + ": expected " + std::to_string(cols) + " columns");
    }
    for (int c = 0; c < cols; ++c) {
      const Json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw ConfigError(std::string(what) + ": entries must be numbers");
      out(r, c) = v.get<double>();
    }
  }
  return out;
}

inline Json matrix_to_json(const Mat& M) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

inline Tensor3 tensor_from_json(const Json& j, int n, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ConfigError(std::string(what) + ": expected " + std::to_string(n) + " slices");
  }
  Tensor3 out(n, n, n);
  for (int g = 0; g < n; ++g) {
    const Mat slice = matrix_from_json(j[static_cast<std::size_t>(g)], n, n, what);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) out(g, a, b) = slice(a, b);
    }
  }
  return out;
}

inline Json tensor_to_json(const Tensor3& T) {
  Json out = Json::array();
  for (int g = 0; g < T.dim0(); ++g) {
    Mat slice(T.dim1(), T.dim2());
    for (int a = 0; a < T.dim1(); ++a) {
      for (int b = 0; b < T.dim2(); ++b) slice(a, b) = T(g, a, b);
    }
    out.push_back(matrix_to_json(slice));
  }
  return out;
}

inline int positive_int(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) throw ConfigError(std::string("missing integer '") + key + "'");
  const int v = j[key].get<int>();
  if (v < 0) throw ConfigError(std::string("'") + key + "' must be non-negative");
  return v;
}

inline double number_or(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return j[key].get<double>();
}

}  // namespace detail

/// {m, n, rho: m x n, C: [gamma][alpha][beta], label?}; only constant charts.
inline Json chart_to_json(const AlgebroidChart& chart) {
  if (!chart.constant) throw ConfigError("chart '" + chart.label + "' has non-constant coefficients");
  Json j;
  j["m"] = chart.m;
  j["n"] = chart.n;
  j["rho"] = detail::matrix_to_json(chart.constant->rho);
  j["C"] = detail::tensor_to_json(chart.constant->C);
  if (!chart.label.empty()) j["label"] = chart.label;
  return j;
}

inline AlgebroidChart chart_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("chart JSON must be an object");
  const int m = detail::positive_int(j, "m");
  const int n = detail::positive_int(j, "n");
  if (m < 1) throw ConfigError("chart needs m >= 1 (use one dummy coordinate for a Lie algebra)");
  if (!j.contains("rho") || !j.contains("C")) throw ConfigError("chart JSON needs 'rho' and 'C'");
  Mat rho = detail::matrix_from_json(j["rho"], m, n, "rho");
  Tensor3 C = detail::tensor_from_json(j["C"], n, "C");
  return make_constant_chart(std::move(rho), std::move(C), j.value("label", std::string("chart")));
}

/// Named connection fields for principal-bundle JSON:
///   zero, constant {matrix}, abelian-magnetic {B0}, smooth {amplitude}
inline MatrixField connection_from_json(const Json& j, int ng, int m) {
  if (!j.is_object() || !j.contains("builtin") || !j["builtin"].is_string()) {
    throw ConfigError("'A' must be an object with a 'builtin' name");
  }
  const std::string name = j["builtin"].get<std::string>();
  const Json params = j.value("params", Json::object());
  if (name == "zero") {
    return MatrixField{m, [ng, m](const Vec&) { return Mat(Mat::Zero(ng, m)); }};
  }
  if (name == "constant") {
    if (!params.contains("matrix")) throw ConfigError("constant connection needs params.matrix");
    const Mat A = detail::matrix_from_json(params["matrix"], ng, m, "A");
    return MatrixField{m, [A](const Vec&) { return A; }};
  }
  if (name == "abelian-magnetic") {
    if (ng != 1 || m != 2) throw ConfigError("abelian-magnetic connection needs n_g = 1 and m = 2");
    return models::abelian_magnetic_connection(detail::number_or(params, "B0", 1.0));
  }
  if (name == "smooth" || name == "so3-smooth") {
    return models::smooth_connection(ng, m, detail::number_or(params, "amplitude", 0.4));
  }
  throw ConfigError("unknown connection '" + name + "'");
}

/// {m, n_g, c, A: {builtin, params}, kappa?, g?}. With kappa present the model
/// carries the reduced Wong Lagrangian and Hamiltonian (g defaults to identity).
inline Model principal_model_from_json(const Json& j) {
  const int m = detail::positive_int(j, "m");
  const int ng = detail::positive_int(j, "n_g");
  if (m < 1) throw ConfigError("principal data needs m >= 1");
  PrincipalData pd;
  pd.m = m;
  pd.ng = ng;
  pd.c = j.contains("c") ? detail::tensor_from_json(j["c"], ng, "c") : Tensor3(ng, ng, ng);
  if (!j.contains("A")) throw ConfigError("principal data needs 'A'");
  pd.A = connection_from_json(j["A"], ng, m);
  pd.label = j.value("label", std::string("principal"));
  try {
    validate_principal(pd);
  } catch (const ShapeError& e) {
    throw ConfigError(e.what());
  }
  const Box box = Box::cube(m, detail::number_or(j, "box", 1.0));

  if (j.contains("kappa")) {
    const Mat kappa = detail::matrix_from_json(j["kappa"], ng, ng, "kappa");
    const Mat g = j.contains("g") ? detail::matrix_from_json(j["g"], m, m, "g") : Mat(Mat::Identity(m, m));
    WongData wd{kappa, MatrixField{m, [g](const Vec&) { return g; }}};
    return models::from_wong(pd.label, std::move(pd), std::move(wd), box);
  }
  Model md;
  md.name = pd.label;
  md.chart = atiyah_chart(pd);
  md.chart.label = pd.label;
  md.principal = std::move(pd);
  md.base_box = box;
  return md;
}

/// A chart file, optionally with a constant "kinetic" matrix K giving
/// L = 1/2 y^T K y and H = 1/2 p^T K^{-1} p, or a principal-bundle file.
inline Model model_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("model JSON must be an object");
  if (j.contains("n_g")) return principal_model_from_json(j);
  Model md;
  md.chart = chart_from_json(j);
  md.name = md.chart.label;
  md.base_box = Box::cube(md.chart.m, detail::number_or(j, "box", 1.0));
  if (j.contains("kinetic")) {
    const Mat K = detail::matrix_from_json(j["kinetic"], md.chart.n, md.chart.n, "kinetic");
    md.lagrangian = quadratic_lagrangian(md.chart, K);
    Eigen::FullPivLU<Mat> lu(K);
    if (lu.isInvertible()) md.hamiltonian = quadratic_hamiltonian(md.chart, K);
  }
  return md;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

/// "builtin:<name>", a bare builtin name, or a path to a JSON model file.
inline Model resolve_model(const std::string& spec) {
  std::string name = spec;
  const std::string prefix = "builtin:";
  const bool forced = name.rfind(prefix, 0) == 0;
  if (forced) name = name.substr(prefix.size());
  if (auto md = models::builtin(name)) return *md;
  if (forced) throw ConfigError("unknown builtin model '" + name + "'");
  return model_from_json(read_json_file(spec));
}

}  // namespace amech
