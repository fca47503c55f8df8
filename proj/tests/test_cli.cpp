#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hvi/cli.hpp"
#include "hvi/csv.hpp"

using namespace hvi;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "hvi");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

csv::Table parse(const std::string& text) {
  std::istringstream is(text);
  return csv::read(is);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "hvi_test_cli";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("range syntax") {
  const auto r = cli::parse_range("0:3:4");
  CHECK(r.values() == std::vector<double>{0, 1, 2, 3});
  CHECK(cli::parse_range("2.5").scalar());
  CHECK_THROWS(cli::parse_range("1:0:3"));
  CHECK_THROWS(cli::parse_range("0:1:1"));
  CHECK_THROWS(cli::parse_range("0:1"));
  CHECK_THROWS(cli::parse_range("abc"));
}

TEST_CASE("number formatting") {
  CHECK(csv::fmt(0.1) == "0.1");
  CHECK(csv::fmt(1.0 / 3.0) == "0.333333333333");
  CHECK(csv::fmt(1e-20) == "1e-20");
  CHECK(csv::fmt(NAN) == "nan");
}

TEST_CASE("aa record") {
  const auto r = invoke({"aa", "--xi", "0.3"});
  REQUIRE(r.code == 0);
  const auto t = parse(r.out);
  CHECK(t.comments.at(0).find("hvi aa") == 0);
  CHECK(t.columns == std::vector<std::string>{"xi", "phi", "J", "omega", "a1", "dJ_dxi", "da1_dxi"});
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][0] == "0.3");
  CHECK(t.rows[0][1] == "0");
  CHECK(t.rows[0][2] == "0.3");
  CHECK(t.rows[0][3] == "1");
  CHECK(t.rows[0][4].rfind("0.774596", 0) == 0);
}

TEST_CASE("boundary minimum at the coexistence point") {
  const auto r = invoke({"boundary", "--xi-crit", "1", "--sigma", "0:3:300", "--eps", "0.1"});
  REQUIRE(r.code == 0);
  const auto t = parse(r.out);
  REQUIRE(t.rows.size() == 300);
  std::size_t best = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.number(i, "f_crit") < t.number(best, "f_crit")) best = i;
  }
  CHECK(std::abs(t.number(best, "sigma") - 1.28) < 0.02);
  const auto footer = nlohmann::json::parse(t.comments.back());
  CHECK(std::abs(footer["sigma_star"].get<double>() - 1.28) < 0.01);
}

TEST_CASE("every command emits re-parseable CSV") {
  const std::vector<std::vector<std::string>> cmds{
      {"aa", "--xi", "0:2:21"},
      {"portrait", "--f", "1", "--sigma", "1", "--nu-samples", "16", "--xi", "0:1:5"},
      {"lpt", "--f", "1.2", "--sigma", "0.5", "--nu-samples", "32"},
      {"stationary", "--f", "1", "--sigma", "5"},
      {"boundary", "--xi-crit", "0.5", "--sigma", "-2:2:9"},
      {"freqresp", "--f", "1", "--sigma", "-3:3:13"},
      {"energy-map", "--sigma", "-3:3:4", "--f", "0.1:3:4", "--jobs", "2"},
      {"simulate", "--sigma", "1", "--f", "1.7", "--horizon", "50", "--dt-out", "0.5"},
  };
  for (const auto& c : cmds) {
    CAPTURE(c[0]);
    const auto r = invoke(c);
    REQUIRE(r.code == 0);
    const auto t = parse(r.out);
    CHECK(!t.rows.empty());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      CHECK(std::isfinite(std::stod(t.rows[i][0])));
    }
  }
}

TEST_CASE("simulate summary") {
  const auto dir = scratch();
  const auto out = dir / "run.csv";
  const auto r = invoke({"simulate", "--sigma", "1", "--f", "1.7", "--xi-crit", "0.5",
                         "--out", out.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "run.json"));
  CHECK(j["crossed"].get<bool>());
  CHECK(j["max_xi_windowed"].get<double>() <= j["max_E_inst"].get<double>());
  CHECK(!j["impacts"].empty());
  std::ifstream is(out);
  const auto t = csv::read(is);
  CHECK(t.columns == std::vector<std::string>{"tau", "q", "p", "E"});
  CHECK(t.rows.size() == 50001);
}

TEST_CASE("determinism and worker-count independence") {
  const auto dir = scratch();
  const auto a = dir / "map_a.csv";
  const auto b = dir / "map_b.csv";
  REQUIRE(invoke({"energy-map", "--sigma", "-3:3:7", "--f", "0.1:3:7", "--jobs", "1",
                  "--out", a.string()}).code == 0);
  REQUIRE(invoke({"energy-map", "--sigma", "-3:3:7", "--f", "0.1:3:7", "--jobs", "3",
                  "--out", b.string()}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(!slurp(a).empty());
}

TEST_CASE("config file with flag override") {
  const auto dir = scratch();
  const auto cfg = dir / "run.cfg";
  std::ofstream(cfg) << "eps = 0.05\nsigma = \"0:3:7\"\nxi-crit = 1\n";
  const auto from_file = invoke({"boundary", "--config", cfg.string()});
  REQUIRE(from_file.code == 0);
  CHECK(from_file.out.find("eps=0.05") != std::string::npos);
  const auto overridden = invoke({"boundary", "--config", cfg.string(), "--eps", "0.1"});
  REQUIRE(overridden.code == 0);
  CHECK(overridden.out.find("eps=0.1") != std::string::npos);
  CHECK(parse(overridden.out).rows.size() == 7);
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == cli::kUsage);
  CHECK(invoke({"nosuch"}).code == cli::kUsage);
  CHECK(invoke({"aa"}).code == cli::kUsage);
  CHECK(invoke({"aa", "--xi", "-1"}).code == cli::kUsage);
  CHECK(invoke({"boundary", "--sigma", "1:0:3"}).code == cli::kUsage);
  CHECK(invoke({"lpt", "--f", "1.525", "--sigma", "1.5", "--xi-max", "0.7"}).code == cli::kNumeric);
  CHECK(invoke({"aa", "--xi", "1", "--out", "/nonexistent/dir/x.csv"}).code == cli::kIo);
  CHECK(invoke({"--help"}).code == cli::kOk);
}

TEST_CASE("installed tool") {
  const std::string tool = HVI_TOOL_PATH;
  CHECK(std::system((tool + " aa --xi 1 > /dev/null").c_str()) == 0);
  const int status = std::system((tool + " aa --xi -3 > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(status) == cli::kUsage);
}
