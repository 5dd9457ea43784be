#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "commands.hpp"
#include "table.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pep-lab-test-" + name);
  fs::remove_all(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(PEP_LAB_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

peplab::CsvFile load(const fs::path& p) {
  std::ifstream f(p);
  return peplab::read_csv(f);
}

// Declared width, finite values, NaN only in columns listed under "diverged".
void check_schema(const peplab::CsvFile& f) {
  REQUIRE(std::to_string(f.columns.size()) == f.header_value("columns"));
  const std::string diverged = "," + f.header_value("diverged") + ",";
  for (const auto& row : f.rows) {
    REQUIRE(row.size() == f.columns.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (std::isnan(row[c])) {
        CHECK(diverged.find("," + f.columns[c] + ",") != std::string::npos);
      } else {
        CHECK(std::isfinite(row[c]));
      }
    }
  }
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("format_number round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 123456789.125, 0.0}) {
      CHECK(std::stod(peplab::format_number(v)) == v);
    }
    CHECK(peplab::format_number(std::nan("")) == "nan");
  }

  TEST_CASE("schema_problem flags NaN outside diverged columns") {
    peplab::Table t;
    t.name = "t";
    t.columns = {{"a"}, {"b", peplab::Unit::none, true}};
    t.rows = {{1.0, std::nan("")}};
    CHECK(peplab::schema_problem(t).empty());
    t.rows = {{std::nan(""), 1.0}};
    CHECK_FALSE(peplab::schema_problem(t).empty());
    t.rows = {{1.0}};
    CHECK_FALSE(peplab::schema_problem(t).empty());
  }

  TEST_CASE("reproducible reruns are byte-identical") {
    const fs::path a = scratch("rerun-a"), b = scratch("rerun-b");
    const std::string args = "population --omega 0.5,1.54 --n-levels 20 --t-max 2 --jobs 2 --reproducible";
    REQUIRE(run(args + " --out " + a.string()) == 0);
    REQUIRE(run(args + " --out " + b.string()) == 0);
    for (const char* name : {"population_omega=0.5.csv", "population_omega=1.54.csv", "population_summary.json"}) {
      CAPTURE(name);
      CHECK(slurp(a / name) == slurp(b / name));
      CHECK_FALSE(slurp(a / name).empty());
    }
    // Without --reproducible only the version and timestamp header lines are added.
    const fs::path c = scratch("rerun-c");
    REQUIRE(run("population --omega 0.5,1.54 --n-levels 20 --t-max 2 --out " + c.string()) == 0);
    const peplab::CsvFile x = load(a / "population_omega=0.5.csv");
    const peplab::CsvFile y = load(c / "population_omega=0.5.csv");
    CHECK(x.data_lines == y.data_lines);
    CHECK_FALSE(y.header_value("generated").empty());
    CHECK(x.header_value("generated").empty());
  }

  TEST_CASE("population panel matches its closed form on a small truncation") {
    const fs::path out = scratch("population");
    REQUIRE(run("population --omega 0.5 --n-levels 30 --reproducible --out " + out.string()) == 0);
    const peplab::CsvFile f = load(out / "population_omega=0.5.csv");
    check_schema(f);
    CHECK(f.columns == std::vector<std::string>{"t", "n_analytic", "n_numeric"});
    CHECK(f.rows.size() == 121);
    CHECK(std::stod(f.header_value("max_deviation")) < 1e-6);
    CHECK(f.rows.front()[1] == 1.0);
  }

  TEST_CASE("eigen rows at Omega = 0 and at the EP") {
    const fs::path out = scratch("eigen");
    REQUIRE(run("eigen --drive-min 0 --drive-max 3 --drive-points 7 --reproducible --out " + out.string()) == 0);
    const peplab::CsvFile f = load(out / "eigen.csv");
    check_schema(f);
    REQUIRE(f.columns.size() == 11);
    CHECK(f.rows[0][1] == doctest::Approx(1.5));
    CHECK(f.rows[0][2] == doctest::Approx(-0.5));
    for (std::size_t c : {6u, 8u, 10u}) CHECK(f.rows[3][c] == doctest::Approx(-1.0));
  }

  TEST_CASE("coherence at Omega_c is constant") {
    const fs::path out = scratch("coherence");
    REQUIRE(run("coherence --omega 1.5811388300841898 --reproducible --out " + out.string()) == 0);
    const peplab::CsvFile f = load(out / "coherence_omega=1.5811388300841898.csv");
    check_schema(f);
    CHECK(f.columns.size() == 3);
    for (const auto& row : f.rows) {
      CHECK(row[1] == 1.0);
      CHECK(row[2] == 3.0);
    }
  }

  TEST_CASE("variances flag drives past Omega_c as diverged") {
    const fs::path out = scratch("variances");
    REQUIRE(run("variances --drive-min 0 --drive-max 1.8 --drive-points 7 --n-levels 20 --reproducible --out " +
                out.string()) == 0);
    const peplab::CsvFile f = load(out / "variances.csv");
    check_schema(f);
    CHECK(std::isnan(f.rows.back()[1]));
    CHECK(std::stod(f.header_value("var_x_min")) == doctest::Approx((1.0 + 1.0 / std::sqrt(10.0)) / 4.0));
  }

  TEST_CASE("gamma rescales time columns only for presentation") {
    const fs::path out = scratch("gamma");
    REQUIRE(run("population --omega 0.5 --no-numeric --t-max 1 --gamma 2 --reproducible --out " + out.string()) == 0);
    const peplab::CsvFile f = load(out / "population_omega=0.5.csv");
    CHECK(f.rows.back()[0] == doctest::Approx(0.5));
    CHECK(f.columns.size() == 2);
  }

  TEST_CASE("JSON config with flags taking precedence") {
    const fs::path out = scratch("config");
    fs::create_directories(out);
    {
      std::ofstream cfg(out / "cfg.json");
      cfg << R"({"command": "population", "omega": [0.25], "t-max": 1.0, "n-levels": 12, "delta": 2.0})";
    }
    REQUIRE(run("--config " + (out / "cfg.json").string() + " --delta 1.5 --reproducible --out " + out.string()) == 0);
    const peplab::CsvFile f = load(out / "population_omega=0.25.csv");
    CHECK(f.header_value("delta") == "1.5");
    CHECK(f.header_value("n_levels") == "12");
    CHECK(f.rows.back()[0] == doctest::Approx(1.0));
  }

  TEST_CASE("exit codes") {
    const fs::path out = scratch("exit");
    CHECK(run("population --bogus") == 1);
    CHECK(run("population --t-step -1 --out " + out.string()) == 1);
    CHECK(run("--out " + out.string()) == 1);
    CHECK(run("coherence --omega 2 --out " + out.string()) == 2);
    CHECK(run("husimi --omega 1.58 --n-levels 40 --out " + out.string()) == 3);
    CHECK(run("spectrum --omega 1.0 --n-levels 25 --format json --reproducible --out " + out.string()) == 0);
    CHECK(fs::exists(out / "spectrum.json"));
  }

  TEST_CASE("regime errors are reported per panel") {
    peplab::RunConfig cfg;
    cfg.omegas = {1.0, 2.0};
    cfg.numeric = false;
    const peplab::Outcome o = peplab::run_command("coherence", cfg);
    REQUIRE(o.tables.size() == 1);
    REQUIRE(o.errors.size() == 1);
    CHECK(o.errors[0].kind == "DivergenceError");
    CHECK(o.errors[0].panel == "omega=2");
    CHECK(o.exit_code() == 2);
  }
}
