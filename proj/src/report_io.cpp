#include "szilard/report_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "szilard/error.hpp"

namespace szilard::io {

using nlohmann::json;

namespace {

json stage_json(const engine::StageRow& r) {
  return {{"label", r.label},      {"stage", thermo::to_string(r.gas.stage)},
          {"Z", r.gas.Z},          {"A", r.gas.A},
          {"E_int", r.gas.E_int},  {"S_thermo", r.gas.S_thermo},
          {"T", r.gas.T},          {"dA", r.dA}};
}

template <class T>
T get(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("report is missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("report field '") + key + "': " + e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json to_json(const engine::CycleReport& r) {
  const auto& c = r.config;
  const auto& p = c.params;
  const auto& m = r.measurement;
  json stages = json::array();
  for (const auto& s : r.stages) stages.push_back(stage_json(s));
  json j{
      {"schema_version", kSchemaVersion},
      {"seed", c.seed},
      {"config",
       {{"L", p.L}, {"d", p.d}, {"U", p.U}, {"T", p.T}, {"hbar", p.hbar}, {"mass", p.mass}, {"k_B", p.k_B},
        {"N", c.N}, {"protocol", engine::to_string(c.protocol)}, {"n_steps", c.n_steps}, {"grid", c.grid},
        {"numeric", c.numeric}, {"coherent", c.coherent}, {"demon_delta", c.demon_delta}}},
      {"N", r.N},
      {"kT", r.kT},
      {"stages", stages},
      {"W_extracted", r.W_extracted},
      {"W_over_kT", r.W_extracted / r.kT},
      {"W_quantum", r.W_quantum},
      {"Q_from_reservoir", r.Q_from_reservoir},
      {"S_to_environment", r.S_to_environment},
      {"erasure_cost", r.erasure_cost},
      {"net_balance", r.net_balance},
      {"second_law_ok", r.second_law_ok},
      {"ledger_sum_dA", r.ledger_sum_dA},
      {"closure_distance", r.closure_distance},
      {"measurement",
       {{"outcome", m.outcome}, {"p_left", m.p_left}, {"dS_gas", m.dS_gas}, {"dS_demon", m.dS_demon},
        {"dS_joint", m.dS_joint}, {"dI_mu", m.dI_mu}, {"balance_residual", m.balance_residual},
        {"gas_marginal_shift", m.gas_marginal_shift}, {"correlation_distance", m.correlation_distance},
        {"reversal_distance", m.reversal_distance}, {"product_reversal_distance", m.product_reversal_distance},
        {"joint_dim", m.joint_dim}}},
      {"numeric", nullptr},
      {"discrepancy", nullptr},
  };
  if (r.numeric) {
    const auto& n = *r.numeric;
    j["numeric"] = {{"grid", n.grid},       {"levels_double", n.levels_double}, {"levels_half", n.levels_half},
                    {"A_tilde", n.A_tilde}, {"A_L", n.A_L},                     {"W", n.W},
                    {"relative_error", n.relative_error}};
  }
  if (r.discrepancy) {
    j["discrepancy"] = {{"quoted", r.discrepancy->quoted},
                        {"computed", r.discrepancy->computed},
                        {"note", r.discrepancy->note}};
  }
  return j;
}

engine::CycleReport report_from_json(const json& j) {
  if (get<std::string>(j, "schema_version") != kSchemaVersion) {
    throw ValidationError("unsupported report schema version " + j.at("schema_version").get<std::string>());
  }
  engine::CycleReport r;
  const auto& jc = j.at("config");
  auto& c = r.config;
  c.params.L = get<double>(jc, "L");
  c.params.d = get<double>(jc, "d");
  c.params.U = get<double>(jc, "U");
  c.params.T = get<double>(jc, "T");
  c.params.hbar = get<double>(jc, "hbar");
  c.params.mass = get<double>(jc, "mass");
  c.params.k_B = get<double>(jc, "k_B");
  c.N = get<int>(jc, "N");
  c.protocol = engine::protocol_from_string(get<std::string>(jc, "protocol"));
  c.n_steps = get<int>(jc, "n_steps");
  c.seed = get<std::uint64_t>(j, "seed");
  c.grid = get<std::size_t>(jc, "grid");
  c.numeric = get<bool>(jc, "numeric");
  c.coherent = get<bool>(jc, "coherent");
  c.demon_delta = get<double>(jc, "demon_delta");

  r.N = get<int>(j, "N");
  r.kT = get<double>(j, "kT");
  for (const auto& s : j.at("stages")) {
    engine::StageRow row;
    row.label = get<std::string>(s, "label");
    row.gas.stage = thermo::stage_from_string(get<std::string>(s, "stage"));
    row.gas.Z = get<double>(s, "Z");
    row.gas.A = get<double>(s, "A");
    row.gas.E_int = get<double>(s, "E_int");
    row.gas.S_thermo = get<double>(s, "S_thermo");
    row.gas.T = get<double>(s, "T");
    row.dA = get<double>(s, "dA");
    r.stages.push_back(row);
  }
  r.W_extracted = get<double>(j, "W_extracted");
  r.W_quantum = get<double>(j, "W_quantum");
  r.Q_from_reservoir = get<double>(j, "Q_from_reservoir");
  r.S_to_environment = get<double>(j, "S_to_environment");
  r.erasure_cost = get<double>(j, "erasure_cost");
  r.net_balance = get<double>(j, "net_balance");
  r.second_law_ok = get<bool>(j, "second_law_ok");
  r.ledger_sum_dA = get<double>(j, "ledger_sum_dA");
  r.closure_distance = get<double>(j, "closure_distance");

  const auto& jm = j.at("measurement");
  auto& m = r.measurement;
  m.outcome = get<std::string>(jm, "outcome");
  m.p_left = get<double>(jm, "p_left");
  m.dS_gas = get<double>(jm, "dS_gas");
  m.dS_demon = get<double>(jm, "dS_demon");
  m.dS_joint = get<double>(jm, "dS_joint");
  m.dI_mu = get<double>(jm, "dI_mu");
  m.balance_residual = get<double>(jm, "balance_residual");
  m.gas_marginal_shift = get<double>(jm, "gas_marginal_shift");
  m.correlation_distance = get<double>(jm, "correlation_distance");
  m.reversal_distance = get<double>(jm, "reversal_distance");
  m.product_reversal_distance = get<double>(jm, "product_reversal_distance");
  m.joint_dim = get<long>(jm, "joint_dim");

  if (j.contains("numeric") && !j.at("numeric").is_null()) {
    const auto& jn = j.at("numeric");
    engine::NumericCheck n;
    n.grid = get<std::size_t>(jn, "grid");
    n.levels_double = get<int>(jn, "levels_double");
    n.levels_half = get<int>(jn, "levels_half");
    n.A_tilde = get<double>(jn, "A_tilde");
    n.A_L = get<double>(jn, "A_L");
    n.W = get<double>(jn, "W");
    n.relative_error = get<double>(jn, "relative_error");
    r.numeric = n;
  }
  if (j.contains("discrepancy") && !j.at("discrepancy").is_null()) {
    const auto& jd = j.at("discrepancy");
    r.discrepancy = engine::Discrepancy{get<double>(jd, "quoted"), get<double>(jd, "computed"),
                                        get<std::string>(jd, "note")};
  }
  return r;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) throw ValidationError("CSV row width does not match the header");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::cell(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char ch : v) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

std::string CsvTable::str() const {
  std::ostringstream os;
  const auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  return os.str();
}

CsvTable sweep_table(const std::vector<engine::SweepRow>& rows, engine::SweepAxis axis, std::uint64_t master_seed) {
  CsvTable t({engine::to_string(axis), "master_seed", "seed", "protocol", "N", "kT", "W_extracted", "W_over_kT",
              "A_tilde_minus_A", "A_L_minus_A_tilde", "S_to_environment", "net_balance", "second_law_ok",
              "W_numeric", "error"});
  for (const auto& r : rows) {
    std::vector<std::string> cells{CsvTable::cell(r.value), CsvTable::cell(master_seed), CsvTable::cell(r.seed)};
    if (r.report) {
      const auto& rep = *r.report;
      cells.insert(cells.end(),
                   {CsvTable::cell(engine::to_string(rep.config.protocol)), CsvTable::cell(static_cast<long long>(rep.N)),
                    CsvTable::cell(rep.kT), CsvTable::cell(rep.W_extracted), CsvTable::cell(rep.W_extracted / rep.kT),
                    CsvTable::cell(rep.A_tilde_minus_A()), CsvTable::cell(rep.A_L_minus_A_tilde()),
                    CsvTable::cell(rep.S_to_environment), CsvTable::cell(rep.net_balance),
                    CsvTable::cell(rep.second_law_ok), rep.numeric ? CsvTable::cell(rep.numeric->W) : "", ""});
    } else {
      cells.insert(cells.end(), 11, "");
      cells.push_back(CsvTable::cell(r.error));
    }
    t.add_row(std::move(cells));
  }
  return t;
}

}  // namespace szilard::io
