#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

// stdout only; stderr is folded in when `merge` is set.
Run run(const std::string& args, const std::string& env = "", bool merge = false) {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" SZILARD_CLI_PATH "\" " + args + (merge ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  for (std::string c; std::getline(is, c, ',');) out.push_back(c);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("szilard_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("help and usage errors") {
  const auto help = run("--help");
  CHECK(help.status == 0);
  CHECK(help.out.find("cycle") != std::string::npos);
  CHECK(run("cycle --help").status == 0);
  CHECK(run("").status == 1);
  CHECK(run("teleport").status == 1);
  CHECK(run("cycle --format xml").status == 1);
  CHECK(run("cycle --T abc").status == 1);
  CHECK(run("thermo --format csv").status == 1);
}

TEST_CASE("invalid parameters exit with 1 and say why") {
  const auto r = run("--d 1.5 --L 1 cycle", "", true);
  CHECK(r.status == 1);
  CHECK(r.out.find("d < L") != std::string::npos);
  CHECK(run("cycle --T -1").status == 1);
  CHECK(run("cycle --N 3").status == 1);  // N^2 eps beta < 20
  CHECK(run("cycle --protocol stepwise --n-steps 0").status == 1);
  CHECK(run("sweep --axis T --values 1,x").status == 1);
  CHECK(run("sweep --values 1").status == 1);
}

TEST_CASE("spectrum table") {
  const auto r = run("spectrum");
  REQUIRE(r.status == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 6);
  CHECK(ls[0] == "n,E_n,pair,delta,estimate,ratio");
  double prev = 0.0;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto c = split(ls[i]);
    REQUIRE(c.size() == 6);
    CHECK(std::stoi(c[2]) == static_cast<int>(i));
    const double e = std::stod(c[1]);
    CHECK(e > prev);
    CHECK(std::stod(c[3]) > 0.0);
    prev = e;
  }
  CHECK(lines(run("spectrum --pairs 2").out).size() == 3);
}

TEST_CASE("spectrum artifacts") {
  const auto dir = scratch("spectrum");
  REQUIRE(run("spectrum --out " + dir.string()).status == 0);
  CHECK(fs::exists(dir / "spectrum.csv"));
  std::ifstream f(dir / "splitting_vs_d.csv");
  std::stringstream ss;
  ss << f.rdbuf();
  const auto ls = lines(ss.str());
  REQUIRE(ls.size() == 10);
  // ln delta_1 falls with d
  CHECK(std::stod(split(ls[9])[3]) < std::stod(split(ls[1])[3]));
}

TEST_CASE("default cycle report") {
  const auto r = run("cycle");
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("schema_version") == "1.0");
  CHECK(j.at("N").get<int>() == 46);
  CHECK(j.at("W_over_kT").get<double>() == doctest::Approx(0.693147).epsilon(1e-6));
  CHECK(j.at("second_law_ok").get<bool>());
  CHECK(j.at("net_balance").get<double>() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(j.at("discrepancy").is_null());
  REQUIRE(!j.at("numeric").is_null());
  CHECK(j.at("numeric").at("relative_error").get<double>() < 0.01);
  CHECK(j.at("stages").size() == 6);
}

TEST_CASE("adiabatic protocol carries its discrepancy") {
  const auto j = json::parse(run("cycle --protocol adiabatic --no-numeric").out);
  CHECK(j.at("W_over_kT").get<double>() == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(j.at("config").at("protocol") == "single-adiabatic");
  REQUIRE(!j.at("discrepancy").is_null());
  CHECK(j.at("discrepancy").at("quoted").get<double>() == doctest::Approx(0.25));
  CHECK(j.at("discrepancy").at("computed").get<double>() == doctest::Approx(0.375));
}

TEST_CASE("same seed, same bytes") {
  const auto a = run("cycle --seed 42");
  const auto b = run("cycle --seed 42");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(json::parse(a.out).at("seed").get<std::uint64_t>() == 42);
  const auto s1 = run("sweep --axis T --values 1,2 --seed 7 --no-numeric");
  const auto s2 = run("sweep --axis T --values 1,2 --seed 7 --no-numeric");
  CHECK(s1.out == s2.out);
}

TEST_CASE("stepwise sweep rises toward ln 2") {
  const auto r = run("sweep --axis n_steps --values 1,2,3,4,5,6,7,8,9,10,11 --no-numeric");
  REQUIRE(r.status == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 12);
  const auto head = split(ls[0]);
  REQUIRE(head[7] == "W_over_kT");
  double prev = 0.0;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto c = split(ls[i]);
    REQUIRE(c.size() == head.size());
    CHECK(c[3] == "stepwise");
    const double w = std::stod(c[7]);
    CHECK(w > prev);
    CHECK(w < std::log(2.0));
    prev = w;
  }
  CHECK(std::stod(split(ls[1])[7]) == doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("temperature sweep and CSV round trip") {
  const auto r = run("sweep --axis T --values 0.5,1,2 --no-numeric");
  REQUIRE(r.status == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 4);
  const double T[] = {0.5, 1.0, 2.0};
  for (int i = 0; i < 3; ++i) {
    const auto c = split(ls[i + 1]);
    CHECK(std::stod(c[0]) == T[i]);
    CHECK(std::stod(c[5]) == T[i]);  // kT with k_B = 1
    CHECK(c.back().empty());
    // shortest round-trip text reads back to the same double
    const double w = std::stod(c[6]);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", w);
    CHECK(std::stod(buf) == w);
    CHECK(w == doctest::Approx(T[i] * std::log(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("empty sweep gives the header only") {
  const auto r = run("sweep --axis T --values \"\"");
  CHECK(r.status == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 1);
  CHECK(ls[0].rfind("T,master_seed,seed,", 0) == 0);
}

TEST_CASE("failed sweep rows do not stop the sweep") {
  const auto r = run("sweep --axis d --values 0.05,1.5,0.08 --no-numeric");
  REQUIRE(r.status == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 4);
  CHECK(split(ls[1]).back().empty());
  CHECK(!split(ls[2]).back().empty());
  CHECK(split(ls[3]).back().empty());
}

TEST_CASE("config file, flags win") {
  const auto dir = scratch("config");
  const auto cfg = dir / "run.toml";
  std::ofstream(cfg) << "# engine\nT = 2.0\nd = 0.05\nprotocol = \"stepwise\"\nn-steps = 4\nseed = 9\n";
  auto j = json::parse(run("cycle --no-numeric --config " + cfg.string()).out);
  CHECK(j.at("config").at("T").get<double>() == 2.0);
  CHECK(j.at("config").at("d").get<double>() == 0.05);
  CHECK(j.at("config").at("n_steps").get<int>() == 4);
  CHECK(j.at("seed").get<int>() == 9);
  CHECK(j.at("W_over_kT").get<double>() == doctest::Approx(2.0 * (1.0 - std::pow(2.0, -0.5))).epsilon(1e-12));

  j = json::parse(run("cycle --no-numeric --config " + cfg.string() + " --T 3").out);
  CHECK(j.at("config").at("T").get<double>() == 3.0);
  CHECK(j.at("config").at("d").get<double>() == 0.05);

  std::ofstream(dir / "bad.toml") << "temperature = 2\n";
  CHECK(run("cycle --config " + (dir / "bad.toml").string()).status == 1);
  CHECK(run("cycle --config " + (dir / "missing.toml").string()).status == 1);
}

TEST_CASE("environment overrides") {
  auto j = json::parse(run("cycle --no-numeric", "SZILARD_T=4 SZILARD_N_STEPS=3 SZILARD_PROTOCOL=stepwise").out);
  CHECK(j.at("config").at("T").get<double>() == 4.0);
  CHECK(j.at("config").at("n_steps").get<int>() == 3);
  // flags beat the environment
  j = json::parse(run("cycle --no-numeric --T 6", "SZILARD_T=4").out);
  CHECK(j.at("config").at("T").get<double>() == 6.0);
  // the environment beats the config file
  const auto dir = scratch("env");
  std::ofstream(dir / "c.toml") << "T = 2.0\n";
  j = json::parse(run("cycle --no-numeric --config " + (dir / "c.toml").string(), "SZILARD_T=5").out);
  CHECK(j.at("config").at("T").get<double>() == 5.0);
  CHECK(run("cycle", "SZILARD_T=hot").status == 1);
}

TEST_CASE("out directory and table format") {
  const auto dir = scratch("out");
  const auto r = run("cycle --no-numeric --out " + dir.string());
  REQUIRE(r.status == 0);
  std::ifstream f(dir / "cycle.json");
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == r.out);
  const auto t = run("thermo --format table");
  CHECK(t.status == 0);
  CHECK(t.out.find("Z_exact.Z") != std::string::npos);
  const auto c = run("cycle --format csv --no-numeric");
  CHECK(lines(c.out).size() == 7);
}

TEST_CASE("measure and thermo documents") {
  const auto m = json::parse(run("measure").out);
  CHECK(m.at("dI_mu_bits").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(m.at("balance_residual").get<double>()) < 1e-10);
  const auto t = json::parse(run("thermo --T 1 --d 0.05").out);
  CHECK(t.at("measurement_jump_over_kT").get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}
