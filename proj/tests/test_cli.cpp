#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "spinon/dcf.hpp"
#include "spinon/io.hpp"
#include "spinon/reference.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string &args, const std::string &env = "") {
  const std::string cmd = env + " " + SPINON_CLI_PATH + " " + args + " 2>/dev/null";
  Run r;
  FILE *pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("spinon_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

double num(const spinon::io::Cell &c) { return std::strtod(c.text.c_str(), nullptr); }

} // namespace

TEST_CASE("constants report") {
  const auto r = run("constants");
  REQUIRE(r.code == 0);
  const auto t = spinon::io::parse_csv(r.out);
  REQUIRE(t.header == std::vector<std::string>{"quantity", "value", "error_estimate"});
  REQUIRE(t.rows.size() == 4);

  const auto golden = spinon::io::parse_csv(slurp(fs::path(SPINON_GOLDEN_DIR) / "constants.csv"));
  REQUIRE(golden.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(t.rows[i][0].text == golden.rows[i][0].text);
    CHECK_THAT(num(t.rows[i][1]), WithinRel(num(golden.rows[i][1]), 1e-12));
    CHECK(num(t.rows[i][2]) >= 0.0);
    CHECK(num(t.rows[i][2]) < 1e-9);
  }

  const auto coarse = spinon::io::parse_csv(run("constants --quad-tol 1e-8").out);
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    CHECK_THAT(num(coarse.rows[i][1]), WithinAbs(num(t.rows[i][1]), 1e-8));
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run("constants --quad-tol 0").code == 1);
  CHECK(run("constants --quad-tol -1e-3").code == 1);
  CHECK(run("constants --max-subdivisions 0").code == 1);
  CHECK(run("eval --k 1.0").code == 1);
  CHECK(run("eval --k 1.0 --omega -2").code == 1);
  CHECK(run("eval --k abc --omega 1").code == 1);
  CHECK(run("scan --k-points 1").code == 1);
  CHECK(run("sumrule --k-points 8").code == 1);
  CHECK(run("ed --sites 5").code == 1);
  CHECK(run("constants --format xml").code == 1);
  CHECK(run("constants --threads 0").code == 1);
  CHECK(run("").code == 1);
  CHECK(run("constants", "SPINON_DCF_THREADS=many").code == 1);
}

TEST_CASE("numerical failures exit with code 2") {
  CHECK(run("eval --k 3.0 --omega 1.0 --max-subdivisions 1 --quad-tol 1e-15").code == 2);
  CHECK(run("ed --sites 8 --delta -1e4").code == 2);
}

TEST_CASE("single-point evaluation") {
  auto t = spinon::io::parse_csv(run("eval --k 3.14159 --omega 7.0").out);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.header == std::vector<std::string>{"k", "omega", "region", "s_pm", "s_zz", "gamma_arg", "edge_flag"});
  CHECK(t.rows[0][2].text == "ABOVE");
  CHECK(t.rows[0][4].text == "0");

  t = spinon::io::parse_csv(run("eval --k 0 --omega 1").out);
  CHECK(t.rows[0][4].text == "0");

  const auto r = run("eval --k 3.14159 --omega 3.14159");
  REQUIRE(r.code == 0);
  t = spinon::io::parse_csv(r.out);
  const auto v = spinon::s2_pm(3.14159, 3.14159, spinon::QuadratureSpec{});
  CHECK(t.rows[0][2].text == "INSIDE");
  CHECK(t.rows[0][3].text == spinon::io::format_real(v.s_pm));
  CHECK(t.rows[0][4].text == spinon::io::format_real(v.s_zz));
  CHECK(t.rows[0][5].text == spinon::io::format_real(v.gamma_arg));
  CHECK(v.s_pm > 0.0);

  // options may follow the subcommand
  const auto j = run("eval --k 3.14159 --omega 3.14159 --format json");
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc[0]["region"] == "INSIDE");
  CHECK(doc[0]["s_zz"].get<double>() == v.s_zz);
}

TEST_CASE("scan output") {
  const auto dir = scratch_dir();
  const auto r = run("scan --k-points 3 --omega-points 3");
  REQUIRE(r.code == 0);
  const auto t = spinon::io::parse_csv(r.out);
  CHECK(t.header == std::vector<std::string>{"k", "omega", "s_zz", "region", "edge_flag"});
  REQUIRE(t.rows.size() == 9);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK_THAT(num(t.rows[i][0]), WithinAbs(2.0 * std::numbers::pi * static_cast<double>(i / 3) / 3.0, 1e-15));
    CHECK_THAT(num(t.rows[i][1]), WithinAbs(std::numbers::pi * static_cast<double>(i % 3), 1e-15));
    if (t.rows[i][3].text != "INSIDE")
      CHECK(t.rows[i][2].text == "0");
  }

  // byte-identical reruns, independent of the worker count
  const auto a = dir / "a.csv", b = dir / "b.csv", c = dir / "c.csv";
  REQUIRE(run("scan --k-points 12 --omega-points 15 -o " + a.string()).code == 0);
  REQUIRE(run("scan --k-points 12 --omega-points 15 -o " + b.string()).code == 0);
  REQUIRE(run("scan --k-points 12 --omega-points 15 --threads 3 -o " + c.string()).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) == slurp(c));
  CHECK(slurp(a) == run("scan --k-points 12 --omega-points 15", "SPINON_DCF_THREADS=2").out);

  const auto json = run("scan --k-points 4 --omega-points 5 --format json");
  REQUIRE(json.code == 0);
  const auto table = spinon::io::parse_json(json.out);
  CHECK(table.rows.size() == 20);
  CHECK(spinon::io::to_json(table) == json.out);

  CHECK(run("scan --k-points 3 --omega-points 3 -o /nonexistent-dir/x.csv").code == 3);
  fs::remove_all(dir);
}

TEST_CASE("configuration file precedence") {
  const auto dir = scratch_dir();
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"format": "json", "threads": 2, "abs_tol": 1e-9})";
  const auto from_file = run("constants --config " + cfg.string());
  REQUIRE(from_file.code == 0);
  CHECK(nlohmann::json::parse(from_file.out).is_array());
  const auto overridden = run("constants --format csv --config " + cfg.string());
  REQUIRE(overridden.code == 0);
  CHECK(overridden.out.rfind("quantity,value,error_estimate\n", 0) == 0);

  std::ofstream(dir / "bad.json") << R"({"threads": "four"})";
  CHECK(run("constants --config " + (dir / "bad.json").string()).code == 1);
  CHECK(run("constants --config " + (dir / "missing.json").string()).code == 3);
  fs::remove_all(dir);
}

TEST_CASE("sum rule report") {
  const auto r = run("sumrule --k-points 16 --omega-points 16");
  REQUIRE(r.code == 0);
  const auto t = spinon::io::parse_csv(r.out);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0][0].text == "I2");
  CHECK(num(t.rows[0][1]) > 0.0);
  CHECK(num(t.rows[0][1]) < 1.0);
  CHECK(t.rows[2][0].text == "refinement_delta");
}

TEST_CASE("ED lines match the golden file") {
  const auto r = run("ed --sites 4");
  REQUIRE(r.code == 0);
  const auto t = spinon::io::parse_csv(r.out);
  const auto golden = spinon::io::parse_csv(slurp(fs::path(SPINON_GOLDEN_DIR) / "ed_sites4.csv"));
  CHECK(t.header == golden.header);
  REQUIRE(t.rows.size() == golden.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(t.rows[i][0].text == golden.rows[i][0].text);
    for (std::size_t c = 1; c < 4; ++c)
      CHECK_THAT(num(t.rows[i][c]), WithinAbs(num(golden.rows[i][c]), 1e-10));
  }
}

TEST_CASE("compare report") {
  const auto r = run("compare --sites 12");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# labeling_shift 3.1415926535897931") != std::string::npos);
  CHECK(r.out.find("# rejected_shift 0") != std::string::npos);
  const auto j = run("compare --sites 8 --format json");
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["rows"].size() == 8);
  CHECK_THAT(doc["interior_mean_ratio"].get<double>(), WithinRel(spinon::reference::ed_window_ratio, 0.01));
}
