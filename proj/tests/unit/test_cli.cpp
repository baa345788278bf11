#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ultraflow::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "ultraflow_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("number format") {
  using ultraflow::cli::format_number;
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(-1.0 / 0.0) == "-inf");
}

TEST_CASE("range") {
  const Result r = call({"range", "--n", "3", "--p", "4", "--json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "nonempty");
  CHECK(j["m_minus"].get<double>() == doctest::Approx((14 - 6 * std::sqrt(2.0)) / 20));
  CHECK(call({"range", "--n", "3", "--p", "6"}).out.find("A = B = 0") != std::string::npos);
  const Result e = call({"range", "--n", "4", "--p", "5", "--json"});
  CHECK(e.code == 0);
  CHECK(nlohmann::json::parse(e.out)["status"] == "empty");
  CHECK(call({"range", "--n", "3"}).code == 2);
  CHECK(call({"range", "--n", "-1", "--p", "3"}).code == 2);
  CHECK(call({"bogus"}).code == 2);
  CHECK(call({}).code == 2);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("figure1 CSV and manifest") {
  const auto dir = scratch_dir();
  const std::string csv = (dir / "fig.csv").string();
  const Result r = call({"figure1", "--n", "3", "--p-min", "2.05", "--steps", "10", "--out", csv});
  CHECK(r.code == 0);
  std::istringstream lines(slurp(csv));
  std::string header;
  std::getline(lines, header);
  CHECK(header == "p,m_minus,m_plus,n_over_n_plus_2,n_minus_2_over_n");
  int rows = 0;
  std::string last;
  for (std::string l; std::getline(lines, l);) {
    ++rows;
    last = l;
  }
  CHECK(rows == 11);
  CHECK(last.rfind("6,0.66666666666666663,0.66666666666666663,", 0) == 0);
  const auto m = nlohmann::json::parse(slurp(csv + ".manifest.json"));
  CHECK(m["command"] == "figure1");
  CHECK(m["outputs"][0] == csv);
  CHECK(m["seed"] == 0);
  // empty rows carry empty fields
  const Result e = call({"figure1", "--n", "4", "--p-min", "4.5", "--p-max", "5", "--steps", "1"});
  CHECK(e.out.find("\n4.5,,,") != std::string::npos);
  CHECK(call({"figure1", "--n", "3", "--p-min", "1"}).code == 2);
}

TEST_CASE("verify") {
  const Result r = call({"verify", "--n", "2", "--p", "3", "--fn", "const(2)", "--json"});
  CHECK(r.code == 0);
  CHECK(std::abs(nlohmann::json::parse(r.out)["deficit"].get<double>()) < 1e-12);
  const Result ls = call({"verify", "--n", "3", "--p", "2", "--fn", "1+0.1*z", "--json"});
  const auto j = nlohmann::json::parse(ls.out);
  CHECK(j["inequality"] == "logarithmic Sobolev");
  CHECK(j["lambda"].get<double>() == 1.5);
  CHECK(j["deficit"].get<double>() >= 0.0);
  const Result ext = call({"verify", "--n", "4", "--p", "4", "--fn", "fab(1, 0.5)", "--json"});
  CHECK(std::abs(nlohmann::json::parse(ext.out)["deficit"].get<double>()) < 1e-8);
  const Result bad = call({"verify", "--n", "2", "--p", "3", "--fn", "1 + foo"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("position 4") != std::string::npos);
  CHECK(call({"verify", "--n", "2", "--p", "3", "--fn", "exp(1000*z)"}).code == 3);
}

TEST_CASE("flow") {
  const auto dir = scratch_dir();
  const std::string csv = (dir / "heat.csv").string();
  const Result r = call({"flow", "--kind", "heat", "--n", "3", "--p", "3", "--t-end", "0.5",
                         "--dt", "0.05", "--out", csv, "--json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["records"] == 11);
  CHECK(j["F_monotone_expected"] == true);
  std::istringstream lines(slurp(csv));
  std::string header;
  std::getline(lines, header);
  CHECK(header == "t,mass,F,fisher_beta,u_min,u_max,grad_max");
  CHECK(std::filesystem::exists(csv + ".manifest.json"));
  CHECK(call({"flow", "--kind", "wave", "--n", "3", "--p", "3"}).code == 2);
  CHECK(call({"flow", "--kind", "nonlinear", "--n", "3", "--p", "7"}).code == 2);
  CHECK(call({"flow", "--kind", "heat", "--n", "3", "--p", "3", "--fn", "z"}).code == 2);
  // Heat flow with a constant bigger than n: F is not a Lyapunov functional.
  const Result v = call({"flow", "--kind", "nonlinear", "--n", "3", "--p", "3", "--beta", "1",
                         "--t-end", "0.2", "--lambda", "3.5"});
  CHECK(v.code == 0);
}

TEST_CASE("identities: gate, determinism, node override") {
  const Result a = call({"identities", "--n", "2.5", "--trials", "1", "--seed", "9"});
  const Result b = call({"identities", "--n", "2.5", "--trials", "1", "--seed", "9"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  // Under-resolved: the interpolant misses u'(+-1) = 0, or the residual gate trips.
  CHECK(call({"identities", "--nodes", "6", "--trials", "3"}).code == 3);
  CHECK(call({"identities", "--nodes", "8", "--trials", "3", "--no-neumann"}).code == 4);
  CHECK(call({"identities", "--trials", "0"}).code == 2);
  setenv("ULTRAFLOW_NODES", "48", 1);
  const Result e = call({"identities", "--trials", "2", "--json"});
  CHECK(nlohmann::json::parse(e.out)["nodes"] == 48);
  setenv("ULTRAFLOW_NODES", "abc", 1);
  CHECK(call({"identities", "--trials", "2"}).code == 2);
  const Result explicit_nodes = call({"identities", "--trials", "2", "--nodes", "40", "--json"});
  unsetenv("ULTRAFLOW_NODES");
  CHECK(nlohmann::json::parse(explicit_nodes.out)["nodes"] == 40);
}
