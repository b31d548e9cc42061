#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <sys/wait.h>

#include "cycloproj/cli.hpp"
#include "cycloproj/io.hpp"

using namespace cycloproj;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cycloproj");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "cycloproj_test_io_cli";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string pi3_system() {
  const double c = std::cos(std::numbers::pi / 3), s = std::sin(std::numbers::pi / 3);
  std::ostringstream os;
  os.precision(17);
  os << R"({"ambient_dim": 2, "subspaces": [[[1, 0], [0, 0]], [[)" << c << ", 0], [" << s << ", 0]]]}";
  return os.str();
}

}  // namespace

TEST_CASE("grid parsing") {
  const auto g = parse_grid("0:1:0.05");
  REQUIRE(g.size() == 21);
  CHECK(g.front() == 0.0);
  CHECK(g[3] == 0.15);
  CHECK(g.back() == 1.0);
  CHECK(parse_grid("0.1,0.5,0.9") == std::vector<double>{0.1, 0.5, 0.9});
  CHECK(parse_grid("1.0") == std::vector<double>{1.0});
  CHECK(parse_grid("0:0.3:0.1").size() == 4);
  CHECK_THROWS_AS(parse_grid("0:1.5:0.5"), PreconditionError);
  CHECK_THROWS_AS(parse_grid("0:1:0"), PreconditionError);
  CHECK_THROWS_AS(parse_grid("0.1,abc"), PreconditionError);
  CHECK_THROWS_AS(parse_grid("-0.1"), PreconditionError);
}

TEST_CASE("system JSON round trip") {
  const SubspaceSystem sys(3, {Subspace::span(3, {{1.0, cplx(0, 1), 0.0}}),
                               Subspace::span_real(3, {{1, 0, 0}, {0, 0, 1}})});
  const SubspaceSystem back = system_from_json(system_to_json(sys));
  CHECK(back.ambient_dim() == 3);
  REQUIRE(back.size() == 2);
  CHECK(back[1].rank() == 2);
  CHECK(max_abs(projector(back[0]).matrix() - projector(sys[0]).matrix()) <= 1e-15);

  CHECK_THROWS_AS(system_from_json(nlohmann::json::parse(R"({"ambient_dim": 2})")), PreconditionError);
  CHECK_THROWS_AS(system_from_json(nlohmann::json::parse(R"({"ambient_dim": 2, "subspaces": [[[1,0]], [[0,1],[1,0]]]})")),
                  PreconditionError);
  CHECK(vector_from_json(nlohmann::json::parse("[1, [0, 2]]")) == CVector{1.0, cplx(0, 2)});
}

TEST_CASE("CSV writers") {
  MapTrace t;
  t.sweeps = 1;
  t.errors = {1.0, 0.5};
  t.contraction = {0.5};
  std::ostringstream os;
  write_trace_csv(os, t);
  CHECK(os.str() == "sweep,error,ratio\n1,0.5,0.5\n");

  BoundRow r;
  r.n = 2;
  r.c = 0.1;
  r.f_closed = 0.1;
  std::ostringstream bs;
  write_bounds_csv(bs, {r});
  CHECK(bs.str().rfind("n,c,f_closed,f_solver,lb_construction,ub_ours,ub_bgm,ub_bs,ub_quadratic\n", 0) == 0);
  CHECK(bs.str().find("2,0.10000000000000001,0.10000000000000001,,0,") != std::string::npos);
}

TEST_CASE("solve command") {
  const Run r = cli({"solve", "--n", "3", "--c", "0.2", "--starts", "8", "--seed", "42"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* key : {"n", "c", "t", "f_estimate", "optimum", "certificate_value", "certificate_gap",
                          "witness_product_norm", "witness_dixmier", "starts_used", "iterations", "seed"}) {
    CHECK(j.contains(key));
  }
  CHECK(std::abs(j["f_estimate"].get<double>() - 0.16) <= 1e-6);
  CHECK(j["optimum"].size() == 9);

  const Run zero = cli({"solve", "--n", "2", "--c", "0.0"});
  REQUIRE(zero.code == 0);
  const auto z = nlohmann::json::parse(zero.out);
  CHECK(z["f_estimate"].get<double>() == 0.0);
  CHECK(z["optimum"] == nlohmann::json::parse("[1.0, 0.0, 0.0, 1.0]"));

  const Run four = cli({"solve", "--n", "4", "--c", "0.05"});
  CHECK(std::abs(nlohmann::json::parse(four.out)["f_estimate"].get<double>() - 3.375e-3) <= 1e-6);

  CHECK(cli({"solve", "--n", "3"}).code != 0);
  CHECK(cli({"solve", "--n", "1", "--c", "0.5"}).code != 0);
}

TEST_CASE("table command") {
  const Run r = cli({"table", "--n", "3", "--grid", "0:1:0.05"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,c,f_closed,f_solver,lb_construction,ub_ours,ub_bgm,ub_bs,ub_quadratic");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    CHECK(line[second + 1] != ',');  // f_closed populated
  }
  CHECK(rows == 21);
  CHECK(r.err.find("b_tilde") != std::string::npos);

  const Run one = cli({"table", "--n", "2", "--grid", "1.0"});
  CHECK(one.out.find("\n2,1,1,,1,1,1,1,1\n") != std::string::npos);

  const Run json = cli({"table", "--n", "2", "--grid", "0.5", "--format", "json"});
  CHECK(nlohmann::json::parse(json.out)[0]["f_closed"].get<double>() == 0.5);
}

TEST_CASE("table output is deterministic") {
  const std::vector<std::string> args{"table", "--n", "4", "--grid", "0.1,0.5,0.9", "--with-solver", "--seed", "7"};
  const Run a = cli(args);
  const Run b = cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  // f_solver between the construction and the upper bound
  std::istringstream in(a.out);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    const double f = std::stod(cells[3]), lb = std::stod(cells[4]), ub = std::stod(cells[5]);
    CHECK(lb <= f);
    CHECK(f <= ub + 1e-6);
  }
  const fs::path out = scratch("table.csv");
  auto with_out = args;
  with_out.insert(with_out.end(), {"--out", out.string()});
  REQUIRE(cli(with_out).code == 0);
  CHECK(slurp(out) == a.out);
}

TEST_CASE("simulate command") {
  const fs::path sys = scratch("pi3.json");
  write(sys, pi3_system());
  const Run r = cli({"simulate", "--system", sys.string(), "--sweeps", "5"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "sweep,error,ratio");
  for (int k = 1; k <= 5; ++k) {
    REQUIRE(std::getline(in, line));
    const auto a = line.find(','), b = line.rfind(',');
    CHECK(std::stoi(line.substr(0, a)) == k);
    CHECK(std::abs(std::stod(line.substr(a + 1, b - a - 1)) - std::pow(0.5, 2 * k - 1)) <= 1e-14);
  }
  CHECK(r.err.find("c_F = 0.5") != std::string::npos);
  CHECK(r.err.find("c_D = 0.5") != std::string::npos);

  // start in the intersection of two planes in C^3
  const fs::path planes = scratch("planes.json");
  write(planes, R"({"ambient_dim": 3, "subspaces": [[[1,0],[0,0],[0,0],[0,0],[1,0],[0,0]], [[1,0],[0,0],[0,0],[0,0],[1,0],[1,0]]]})");
  const fs::path x0 = scratch("x0.json");
  write(x0, "[[1, 0], [0, 0], [0, 0]]");
  const Run zero = cli({"simulate", "--system", planes.string(), "--x0", x0.string(), "--sweeps", "3"});
  REQUIRE(zero.code == 0);
  CHECK(zero.out == "sweep,error,ratio\n1,0,0\n2,0,0\n3,0,0\n");

  CHECK(cli({"simulate", "--system", scratch("missing.json").string()}).code == 1);
}

TEST_CASE("solve exports a witness system that simulate accepts") {
  const fs::path sys = scratch("witness.json");
  REQUIRE(cli({"solve", "--n", "3", "--c", "0.5", "--system", sys.string()}).code == 0);
  const fs::path x0 = scratch("x0_witness.json");
  // first spanning vector of H_1, so the first sweep error is ||P_3 P_2 P_1 x0||
  const auto j = read_json_file(sys.string());
  write(x0, j["subspaces"][0].dump());
  const Run r = cli({"simulate", "--system", sys.string(), "--x0", x0.string(), "--sweeps", "1"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  CHECK(std::stod(line.substr(line.rfind(',') + 1)) <= 0.5 + 1e-7);
}

TEST_CASE("verify command") {
  const Run one = cli({"verify", "--only", "functional-equation", "--n", "3"});
  CHECK(one.code == 0);
  CHECK(one.out.rfind("PASS functional-equation", 0) == 0);
  CHECK(one.out.find("1/1 checks passed") != std::string::npos);

  const Run fault = cli({"verify", "--only", "f3-reproduction", "--fault", "clip"});
  CHECK(fault.code == 1);
  CHECK(fault.out.rfind("FAIL f3-reproduction", 0) == 0);

  const Run ub = cli({"verify", "--only", "sandwich", "--n", "3", "--fault", "ub"});
  CHECK(ub.code == 1);

  CHECK(cli({"verify", "--only", "no-such-check"}).code == 1);
  CHECK(cli({"verify", "--fault", "no-such-fault"}).code == 1);
}

#ifdef CYCLOPROJ_CLI_PATH
TEST_CASE("scalar and SIMD kernels give the same solver result") {
  const std::string base = std::string(CYCLOPROJ_CLI_PATH) + " solve --n 4 --c 0.4 --seed 3 --out ";
  const fs::path a = scratch("simd.json"), b = scratch("scalar.json");
  REQUIRE(std::system((base + a.string()).c_str()) == 0);
  REQUIRE(std::system(("CYCLOPROJ_SIMD=scalar " + base + b.string()).c_str()) == 0);
  const auto ja = read_json_file(a.string()), jb = read_json_file(b.string());
  CHECK(std::abs(ja["f_estimate"].get<double>() - jb["f_estimate"].get<double>()) <= 1e-10);
}

TEST_CASE("process exit codes") {
  const std::string cli_path = CYCLOPROJ_CLI_PATH;
  CHECK(std::system((cli_path + " solve --n 2 --c 0.5 > /dev/null").c_str()) == 0);
  CHECK(WEXITSTATUS(std::system((cli_path + " verify --only f3-reproduction --fault clip > /dev/null").c_str())) == 1);
}
#endif
