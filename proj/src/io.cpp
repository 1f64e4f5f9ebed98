#include "macexp/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace macexp {
namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ConfigParse, what); }

double number(const json& j, const std::string& where) {
  if (!j.is_number()) parse_fail(where + ": expected a number");
  return j.get<double>();
}

std::vector<double> vector_of(const json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Matrix matrix_of(const json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where + ": expected an array of arrays");
  Matrix out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vector_of(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Tensor3 channel_of(const json& j) {
  if (j.is_object()) {
    if (!j.contains("example")) parse_fail("channel: expected a 3-D array or {\"example\": {...}}");
    const json& e = j["example"];
    if (!e.is_object() || !e.contains("k1") || !e.contains("k2"))
      parse_fail("channel.example: needs numeric k1 and k2");
    return build_example_channel(number(e["k1"], "channel.example.k1"), number(e["k2"], "channel.example.k2"))
        .to_tensor();
  }
  if (!j.is_array()) parse_fail("channel: expected a 3-D array or {\"example\": {...}}");
  Tensor3 out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(matrix_of(j[i], "channel[" + std::to_string(i) + "]"));
  return out;
}

BankData bank_of(const json& j) {
  if (!j.is_array() || j.size() != 2) parse_fail("bank: expected [[q11, q12], [q21, q22]]");
  BankData out;
  for (int u = 0; u < 2; ++u) {
    const json& user = j[u];
    const std::string where = "bank[" + std::to_string(u) + "]";
    if (!user.is_array() || user.size() != 2) parse_fail(where + ": expected two distributions");
    for (int c = 0; c < 2; ++c) out[u][c] = vector_of(user[c], where + "[" + std::to_string(c) + "]");
  }
  return out;
}

SolverOptions solver_of(const json& j) {
  SolverOptions o;
  if (!j.is_object()) parse_fail("solver: expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string where = "solver." + key;
    if (key == "tol_rho") o.tol_rho = number(value, where);
    else if (key == "rho_grid") o.rho_grid = static_cast<int>(number(value, where));
    else if (key == "tol_gamma") o.tol_gamma = number(value, where);
    else if (key == "tol_residual") o.tol_residual = number(value, where);
    else if (key == "tol_monotone") o.tol_monotone = number(value, where);
    else if (key == "outer_grid") o.outer_grid = static_cast<int>(number(value, where));
    else if (key == "gamma_grid") o.gamma_grid = static_cast<int>(number(value, where));
    else if (key == "jobs") o.jobs = static_cast<int>(number(value, where));
    else parse_fail(where + ": unknown setting");
  }
  if (!(o.tol_rho > 0 && o.tol_gamma > 0 && o.tol_residual > 0 && o.tol_monotone >= 0) || o.rho_grid < 2 ||
      o.outer_grid < 3 || o.gamma_grid < 0 || o.jobs < 1)
    throw Error(ErrorCode::ParameterOutOfRange, "solver settings out of range");
  return o;
}

json extended(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json classes_json(ClassPair c) {
  return json::array({static_cast<int>(c.user1), static_cast<int>(c.user2)});
}

json assignment_json(Assignment a) {
  return {{"index", a.index()}, {"swap_user1", a.swap_user1}, {"swap_user2", a.swap_user2}};
}

}  // namespace

Config parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) parse_fail("config: expected a JSON object");
  for (const char* key : {"source", "channel", "bank"})
    if (!doc.contains(key)) parse_fail(std::string("config: missing \"") + key + "\"");
  Config c{make_instance(matrix_of(doc["source"], "source"), channel_of(doc["channel"]), bank_of(doc["bank"])), {}};
  if (doc.contains("solver")) c.solver = solver_of(doc["solver"]);
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigParse, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string report_to_json(const ExponentReport& r, int indent) {
  json j;
  j["exponent"] = extended(r.exponent.value);
  j["gamma_star"] = {r.gamma_star.gamma1, r.gamma_star.gamma2};
  j["threshold_kind"] = {to_string(r.threshold_kind[0]), to_string(r.threshold_kind[1])};
  j["residuals"] = {extended(r.residuals[0]), extended(r.residuals[1])};
  j["best_assignment"] = assignment_json(r.best_assignment);
  j["assignment_exponents"] = json::array();
  for (double v : r.assignment_exponents) j["assignment_exponents"].push_back(extended(v));
  j["ties"] = json::array();
  for (Assignment a : r.ties) j["ties"].push_back(a.index());

  json table_f = json::object(), table_fl = json::object();
  for (ErrorType tau : kErrorTypes) {
    json row_f = json::array(), row_fl = json::array();
    for (ClassPair c : kClassPairs) {
      const ExponentValue& v = r.table_f[static_cast<int>(tau)][index_of(c)];
      json cell = {{"classes", classes_json(c)}, {"value", extended(v.value)}};
      if (v.rho) cell["rho"] = *v.rho;
      if (v.lambda) cell["lambda"] = {(*v.lambda)[0], (*v.lambda)[1]};
      row_f.push_back(cell);
      row_fl.push_back({{"classes", classes_json(c)},
                        {"value", extended(r.table_fl[static_cast<int>(tau)][index_of(c)])}});
    }
    table_f[to_string(tau)] = row_f;
    table_fl[to_string(tau)] = row_fl;
  }
  j["table_f"] = table_f;
  j["table_fl"] = table_fl;
  j["iid"] = json::array();
  for (double v : r.iid) j["iid"].push_back(extended(v));
  j["lower_bound"] = {{"value", extended(r.lower_bound)}, {"classes", classes_json(r.lower_bound_classes)}};
  if (r.grid_max) {
    j["grid_check"] = {{"max", extended(*r.grid_max)},
                       {"argmax", {r.grid_argmax->gamma1, r.grid_argmax->gamma2}},
                       {"disagrees", r.grid_disagrees}};
  }
  return j.dump(indent);
}

}  // namespace macexp
