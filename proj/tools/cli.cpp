#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "szilard/engine.hpp"
#include "szilard/error.hpp"
#include "szilard/infodyn.hpp"
#include "szilard/report_io.hpp"
#include "szilard/spectral.hpp"
#include "szilard/thermo.hpp"

namespace szilard::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Options {
  PhysicalParams params;
  int N = 0;
  std::size_t grid = 4096;
  std::string protocol = "isothermal";
  int n_steps = 1;
  std::uint64_t seed = 0;
  std::string format;  // per-command default when empty
  std::string out;
  bool coherent = false;
  bool no_numeric = false;
  double demon_delta = 1.0;
  int pairs = 5;
  std::string axis;
  std::string values;
};

// Options that can come from the environment. Names are the long flags.
const std::vector<std::string> kEnvFlags{"L", "d", "U", "T", "N", "grid", "protocol", "n-steps", "seed", "format", "out"};

std::string env_name(const std::string& flag) {
  std::string s = kEnvPrefix;
  for (char c : flag) s += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

bool flag_given(const std::vector<std::string>& args, const std::string& flag) {
  const std::string f = "--" + flag;
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) { return a == f || a.rfind(f + "=", 0) == 0; });
}

std::vector<std::string> with_env(std::vector<std::string> args) {
  for (const auto& flag : kEnvFlags) {
    const char* v = std::getenv(env_name(flag).c_str());
    if (v && *v && !flag_given(args, flag)) {
      args.push_back("--" + flag);
      args.push_back(v);
    }
  }
  return args;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw ValidationError("cannot parse sweep value '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

engine::CycleConfig cycle_config(const Options& o) {
  engine::CycleConfig c;
  c.params = o.params;
  c.N = o.N;
  c.grid = o.grid;
  c.protocol = engine::protocol_from_string(o.protocol);
  c.n_steps = o.n_steps;
  c.seed = o.seed;
  c.numeric = !o.no_numeric;
  c.coherent = o.coherent;
  c.demon_delta = o.demon_delta;
  return c;
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", rows);
  } else if (j.is_number_float()) {
    rows.emplace_back(prefix, io::format_double(j.get<double>()));
  } else if (j.is_string()) {
    rows.emplace_back(prefix, j.get<std::string>());
  } else {
    rows.emplace_back(prefix, j.dump());
  }
}

std::string json_as_table(const json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  std::size_t w = 0;
  for (const auto& r : rows) w = std::max(w, r.first.size());
  std::ostringstream os;
  for (const auto& [k, v] : rows) os << k << std::string(w + 2 - k.size(), ' ') << v << '\n';
  return os.str();
}

std::string csv_as_table(const io::CsvTable& t) {
  std::vector<std::vector<std::string>> all{t.columns()};
  all.insert(all.end(), t.data().begin(), t.data().end());
  std::vector<std::size_t> w(t.columns().size(), 0);
  for (const auto& r : all)
    for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
  std::ostringstream os;
  for (const auto& r : all) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      os << r[i];
      if (i + 1 < r.size()) os << std::string(w[i] + 2 - r[i].size(), ' ');
    }
    os << '\n';
  }
  return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path.string());
  f << text;
  if (!f) throw ValidationError("cannot write " + path.string());
}

fs::path out_dir(const Options& o) {
  fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ValidationError("output directory not writable: " + o.out);
  return dir;
}

// Emits a JSON document in the chosen format; csv is refused.
void emit_json(const Options& o, const std::string& name, const json& j, std::ostream& out) {
  const std::string fmt = o.format.empty() ? "json" : o.format;
  std::string text;
  if (fmt == "json") {
    text = io::dump(j);
  } else if (fmt == "table") {
    text = json_as_table(j);
  } else {
    throw ValidationError("format '" + fmt + "' is not available for " + name + " (json | table)");
  }
  out << text;
  if (!o.out.empty()) write_file(out_dir(o) / (name + (fmt == "json" ? ".json" : ".txt")), text);
}

void emit_csv(const Options& o, const std::string& file, const io::CsvTable& t, std::ostream& out) {
  const std::string fmt = o.format.empty() ? "csv" : o.format;
  if (fmt == "json") throw ValidationError("format 'json' is not available here (csv | table)");
  const std::string text = fmt == "table" ? csv_as_table(t) : t.str();
  out << text;
  if (!o.out.empty()) write_file(out_dir(o) / file, t.str());
}

int cmd_spectrum(const Options& o, std::ostream& out) {
  const auto& p = o.params;
  p.validate();
  if (o.pairs < 1) throw ValidationError("--pairs must be at least 1");
  const auto grid = spectral::box_grid(p, o.grid);
  const auto pairs = spectral::barrier_spectrum(p, o.pairs, grid);
  io::CsvTable t({"n", "E_n", "pair", "delta", "estimate", "ratio"});
  for (const auto& q : pairs) {
    std::string est, ratio;
    try {
      const double e = spectral::splitting_estimate(p, q.k);
      est = io::format_double(e);
      ratio = io::format_double(q.delta / e);
    } catch (const ValidationError&) {
    }
    t.add_row({std::to_string(2 * q.k - 1), io::format_double(q.E_lower()), std::to_string(q.k),
               io::format_double(q.delta), est, ratio});
  }
  emit_csv(o, "spectrum.csv", t, out);

  if (!o.out.empty()) {
    io::CsvTable series({"d", "delta_1", "estimate_1", "ln_delta_1"});
    for (int i = 0; i <= 8; ++i) {
      PhysicalParams q = p;
      q.d = 0.02 + 0.01 * i;
      const auto pair = spectral::barrier_spectrum(q, 1, spectral::box_grid(q, o.grid)).front();
      series.add_row({io::format_double(q.d), io::format_double(pair.delta),
                      io::format_double(spectral::splitting_estimate(q, 1)), io::format_double(std::log(pair.delta))});
    }
    write_file(out_dir(o) / "splitting_vs_d.csv", series.str());
  }
  return kOk;
}

int cmd_thermo(const Options& o, std::ostream& out) {
  const auto& p = o.params;
  p.validate();
  const double eb = p.epsilon() * p.beta();
  const auto exact = thermo::partition_exact(p);
  const auto highT = thermo::partition_highT(p);
  const auto avg = thermo::thermal_averages(thermo::QuadraticTower{p.epsilon()}, p.beta());
  const auto f = thermo::stage_free_energies(p);
  json j{{"schema_version", io::kSchemaVersion},
         {"seed", o.seed},
         {"params", {{"L", p.L}, {"d", p.d}, {"U", p.U}, {"T", p.T}, {"hbar", p.hbar}, {"mass", p.mass}, {"k_B", p.k_B}}},
         {"eps_beta", eb},
         {"sigma", p.sigma()},
         {"N_min", infodyn::BasisLabeling::minimal_N(eb)},
         {"Z_exact", {{"Z", exact.Z}, {"terms", exact.terms_used}, {"est_error", exact.est_error}}},
         {"Z_highT", {{"Z", highT.Z}, {"regime_ok", highT.regime_ok}, {"est_error", highT.est_error}}},
         {"mean_energy", avg.mean_energy},
         {"S_exact", p.k_B * avg.entropy},
         {"S_highT", thermo::thermo_entropy_highT(p)},
         {"A", f.A},
         {"A_tilde", f.A_tilde},
         {"A_L", f.A_L},
         {"insertion_shift", f.insertion_shift()},
         {"measurement_jump", f.measurement_jump()},
         {"measurement_jump_over_kT", f.measurement_jump() / p.kT()},
         {"isothermal_work", thermo::isothermal_work(0.5 * (p.L - p.d), p.L - p.d, p.T, p.k_B)}};
  if (p.sigma() > 0.0 && p.sigma() < 1.0) {
    const auto theta = thermo::partition_theta(p.sigma());
    j["Z_theta"] = {{"Z", theta.Z}, {"regime_ok", theta.regime_ok}, {"est_error", theta.est_error}};
  } else {
    j["Z_theta"] = nullptr;
  }
  emit_json(o, "thermo", j, out);
  return kOk;
}

int cmd_measure(const Options& o, std::ostream& out) {
  const auto& p = o.params;
  p.validate();
  const double eb = p.epsilon() * p.beta();
  const int N = o.N > 0 ? infodyn::BasisLabeling::checked(o.N, eb).N : infodyn::BasisLabeling::minimal_N(eb);
  const auto pairs = spectral::model_pairs(p, N, o.coherent);
  const auto rho = infodyn::post_insertion_dm(pairs, p.beta());
  const auto rec = demon::premeasure(demon::ready_state(rho), demon::DemonModel{o.demon_delta, p.hbar});
  const auto product = demon::product_of_marginals(rec.post);
  json j{{"schema_version", io::kSchemaVersion},
         {"seed", o.seed},
         {"N", N},
         {"coherent", o.coherent},
         {"joint_dim", rec.post.dim()},
         {"S_gas", {{"pre", rec.S_gas_pre}, {"post", rec.S_gas_post}}},
         {"S_demon", {{"pre", rec.S_demon_pre}, {"post", rec.S_demon_post}}},
         {"S_joint", {{"pre", rec.S_joint_pre}, {"post", rec.S_joint_post}}},
         {"I_mu", {{"pre", rec.I_mu_pre}, {"post", rec.I_mu_post}}},
         {"dS_gas", rec.dS_gas()},
         {"dS_demon", rec.dS_demon()},
         {"dS_joint", rec.dS_joint()},
         {"dI_mu", rec.dI_mu()},
         {"dI_mu_bits", rec.dI_mu() / std::log(2.0)},
         {"balance_residual", rec.balance_residual()},
         {"gas_marginal_shift", rec.gas_marginal_shift},
         {"max_coherence", infodyn::max_coherence(rho)},
         {"correlation_distance", infodyn::trace_distance(rec.post, product)},
         {"reversal_distance", demon::reverse_readoff(rec).distance_to_pre},
         {"product_reversal_distance", demon::reverse_readoff(rec, product).distance_to_pre}};
  emit_json(o, "measure", j, out);
  return kOk;
}

int cmd_cycle(const Options& o, std::ostream& out) {
  const auto rep = engine::run_cycle(cycle_config(o));
  const std::string fmt = o.format.empty() ? "json" : o.format;
  if (fmt == "csv") {
    io::CsvTable t({"label", "stage", "Z", "A", "E_int", "S_thermo", "T", "dA"});
    for (const auto& s : rep.stages) {
      t.add_row({s.label, thermo::to_string(s.gas.stage), io::format_double(s.gas.Z), io::format_double(s.gas.A),
                 io::format_double(s.gas.E_int), io::format_double(s.gas.S_thermo), io::format_double(s.gas.T),
                 io::format_double(s.dA)});
    }
    emit_csv(o, "cycle_stages.csv", t, out);
    return kOk;
  }
  emit_json(o, "cycle", io::to_json(rep), out);
  return kOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  if (o.axis.empty()) throw ValidationError("sweep needs --axis (T | U | d | N | grid | n_steps)");
  const auto axis = engine::axis_from_string(o.axis);
  const auto values = parse_values(o.values);
  const auto base = cycle_config(o);
  const auto rows = engine::sweep(base, axis, values);
  emit_csv(o, "sweep_" + engine::to_string(axis) + ".csv", io::sweep_table(rows, axis, base.seed), out);
  return kOk;
}

void add_common(CLI::App& app, Options& o) {
  app.add_option("--L", o.params.L, "box width")->capture_default_str();
  app.add_option("--d", o.params.d, "partition width")->capture_default_str();
  app.add_option("--U", o.params.U, "partition height")->capture_default_str();
  app.add_option("--T", o.params.T, "temperature")->capture_default_str();
  app.add_option("--hbar", o.params.hbar)->capture_default_str();
  app.add_option("--mass", o.params.mass)->capture_default_str();
  app.add_option("--k-B,--k_B", o.params.k_B)->capture_default_str();
  app.add_option("--N", o.N, "pairs per side (0: smallest N with N^2 eps beta >= 20)")->capture_default_str();
  app.add_option("--grid", o.grid, "grid points")->capture_default_str();
  app.add_option("--protocol", o.protocol, "isothermal | stepwise | single-adiabatic")->capture_default_str();
  app.add_option("--n-steps,--n_steps", o.n_steps, "steps of the stepwise protocol")->capture_default_str();
  app.add_option("--seed", o.seed, "master seed")->capture_default_str();
  app.add_option("--format", o.format, "json | csv | table")->check(CLI::IsMember({"json", "csv", "table"}));
  app.add_option("--out", o.out, "directory for artifact files");
  app.add_option("--delta", o.demon_delta, "demon coupling energy")->capture_default_str();
  app.add_flag("--coherent", o.coherent, "keep the L-R coherences of the inserted state");
  app.add_flag("--no-numeric", o.no_numeric, "skip the numerical-spectra cross-check");
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Quantum Szilard engine: spectra, thermodynamics, measurement and the full cycle", "szilard"};
  app.set_config("--config", "", "flat key = value config file (flags win)");
  app.allow_config_extras(false);
  app.fallthrough();
  app.require_subcommand(1);
  add_common(app, o);

  auto* spectrum = app.add_subcommand("spectrum", "doublet levels, splittings and the closed-form estimate");
  spectrum->add_option("--pairs", o.pairs, "number of doublets")->capture_default_str();
  auto* thermo_cmd = app.add_subcommand("thermo", "partition functions, entropies and stage free energies");
  auto* measure = app.add_subcommand("measure", "premeasurement bookkeeping");
  auto* cycle = app.add_subcommand("cycle", "one full engine cycle as a report");
  auto* sweep = app.add_subcommand("sweep", "independent cycles over one parameter");
  sweep->add_option("--axis", o.axis, "T | U | d | N | grid | n_steps");
  sweep->add_option("--values", o.values, "comma separated values");
  for (auto* s : {spectrum, thermo_cmd, measure, cycle, sweep}) s->fallthrough();

  // App::parse(vector) consumes arguments from the back.
  std::vector<std::string> args = with_env(raw_args);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  // Subcommand help.
  for (auto* s : {spectrum, thermo_cmd, measure, cycle, sweep}) {
    if (s->parsed() && s->get_help_ptr() && s->get_help_ptr()->count() > 0) {
      out << s->help();
      return kOk;
    }
  }

  try {
    if (spectrum->parsed()) return cmd_spectrum(o, out);
    if (thermo_cmd->parsed()) return cmd_thermo(o, out);
    if (measure->parsed()) return cmd_measure(o, out);
    if (cycle->parsed()) return cmd_cycle(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const ComputationError& e) {
    err << "computation failed: " << e.what() << "\n";
    return kComputation;
  } catch (const std::exception& e) {
    err << "computation failed: " << e.what() << "\n";
    return kComputation;
  }
  err << "error: no command\n";
  return kValidation;
}

}  // namespace szilard::cli
