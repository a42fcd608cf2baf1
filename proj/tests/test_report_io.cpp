#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "szilard/error.hpp"
#include "szilard/report_io.hpp"

using namespace szilard;

namespace {

engine::CycleReport sample(engine::Protocol protocol, bool numeric) {
  engine::CycleConfig c;
  c.protocol = protocol;
  c.n_steps = 3;
  c.seed = 1234567890123ull;
  c.numeric = numeric;
  return engine::run_cycle(c);
}

}  // namespace

TEST_CASE("doubles are written exactly") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.6931471805599453, 1e-9}) {
    const auto s = io::format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(io::format_double(1.0 / 3.0).size() >= 17);
  CHECK(io::format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("report round trip") {
  for (auto protocol : {engine::Protocol::isothermal, engine::Protocol::stepwise, engine::Protocol::single_adiabatic}) {
    const auto rep = sample(protocol, protocol == engine::Protocol::isothermal);
    const auto j = io::to_json(rep);
    CHECK(j.at("schema_version") == io::kSchemaVersion);
    const auto back = io::report_from_json(nlohmann::json::parse(io::dump(j)));
    CHECK(back == rep);
    CHECK(back.numeric.has_value() == rep.numeric.has_value());
    CHECK(back.discrepancy.has_value() == (protocol == engine::Protocol::single_adiabatic));
  }
}

TEST_CASE("report dump is deterministic") {
  const auto a = io::dump(io::to_json(sample(engine::Protocol::isothermal, false)));
  const auto b = io::dump(io::to_json(sample(engine::Protocol::isothermal, false)));
  CHECK(a == b);
  CHECK(a.find("\"seed\": 1234567890123") != std::string::npos);
}

TEST_CASE("malformed reports") {
  auto j = io::to_json(sample(engine::Protocol::isothermal, false));
  j["schema_version"] = "0.1";
  CHECK_THROWS_AS(io::report_from_json(j), ValidationError);
  j = io::to_json(sample(engine::Protocol::isothermal, false));
  j.erase("net_balance");
  CHECK_THROWS_AS(io::report_from_json(j), ValidationError);
  j = io::to_json(sample(engine::Protocol::isothermal, false));
  j["W_extracted"] = "lots";
  CHECK_THROWS_AS(io::report_from_json(j), ValidationError);
}

TEST_CASE("csv tables") {
  io::CsvTable t({"a", "b"});
  t.add_row({io::CsvTable::cell(0.25), io::CsvTable::cell(std::string("x, \"y\""))});
  CHECK(t.str() == "a,b\n0.25,\"x, \"\"y\"\"\"\n");
  CHECK_THROWS_AS(t.add_row({"1"}), ValidationError);

  engine::CycleConfig c;
  c.numeric = false;
  const auto rows = engine::sweep(c, engine::SweepAxis::d, {0.02, 1.5});
  const auto csv = io::sweep_table(rows, engine::SweepAxis::d, c.seed).str();
  const auto header_end = csv.find('\n');
  CHECK(csv.substr(0, header_end) ==
        "d,master_seed,seed,protocol,N,kT,W_extracted,W_over_kT,A_tilde_minus_A,A_L_minus_A_tilde,"
        "S_to_environment,net_balance,second_law_ok,W_numeric,error");
  CHECK(csv.find("d < L") != std::string::npos);
  const auto empty = io::sweep_table({}, engine::SweepAxis::T, 0).str();
  CHECK(std::count(empty.begin(), empty.end(), '\n') == 1);
  CHECK(empty.rfind("T,master_seed,", 0) == 0);
}
