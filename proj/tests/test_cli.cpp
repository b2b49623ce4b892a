#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pretlab/cli.hpp"

using namespace pretlab;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("pretlab_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("correlate subcommand produces the squarefree-pair report") {
  TempFile out("corr.json");
  ExperimentConfig cfg;
  cfg.subcommand = "correlate";
  cfg.f_spec = "mobius_sq";
  cfg.g_spec = "mobius_sq";
  cfg.P_text = "x";
  cfg.Q_text = "x+1";
  cfg.x = 100'000;
  cfg.threads = 2;
  cfg.output = out.path;
  REQUIRE(run(cfg) == 0);
  auto j = nlohmann::json::parse(slurp(out.path));
  CHECK(j["prediction"]["re"].get<double>() == doctest::Approx(0.3226).epsilon(1e-3));
  CHECK(std::fabs(j["direct"]["re"].get<double>() - j["prediction"]["re"].get<double>()) < 0.01);
  CHECK(j["spec"]["f"] == "mobius_sq");
  CHECK(j["version"] == std::string(kVersion));
  CHECK(j.contains("timing_seconds"));
}

TEST_CASE("ect subcommand") {
  TempFile out("ect.json");
  ExperimentConfig cfg;
  cfg.subcommand = "ect";
  cfg.f_spec = "override(one; 2:* => -1)";
  cfg.x = 100'000;
  cfg.output = out.path;
  REQUIRE(run(cfg) == 0);
  auto j = nlohmann::json::parse(slurp(out.path));
  CHECK(j["satisfies_characterization"] == true);
  CHECK(j["period_m"] == 2);
  CHECK(j["discrepancy"].get<double>() <= 2.0);
}

TEST_CASE("omega subcommand") {
  TempFile out("omega.json");
  ExperimentConfig cfg;
  cfg.subcommand = "omega";
  cfg.P_text = "x^2+1";
  cfg.p = 5;
  cfg.k = 2;
  cfg.output = out.path;
  REQUIRE(run(cfg) == 0);
  auto j = nlohmann::json::parse(slurp(out.path));
  CHECK(j["omega"] == 2);
  CHECK(j["roots"] == std::vector<u64>{7, 18});
}

TEST_CASE("reports are byte-identical apart from timing") {
  TempFile a("det_a.json"), b("det_b.json");
  for (auto& [path, threads] : {std::pair<std::string, unsigned>{a.path, 1},
                                std::pair<std::string, unsigned>{b.path, 3}}) {
    ExperimentConfig cfg;
    cfg.subcommand = "correlate";
    cfg.f_spec = "mobius_sq";
    cfg.P_text = "x";
    cfg.Q_text = "x+1";
    cfg.x = 50'000;
    cfg.threads = threads;
    cfg.output = path;
    REQUIRE(run(cfg) == 0);
  }
  auto ja = nlohmann::ordered_json::parse(slurp(a.path));
  auto jb = nlohmann::ordered_json::parse(slurp(b.path));
  ja.erase("timing_seconds");
  jb.erase("timing_seconds");
  // thread count is part of the embedded config; normalize it before comparing
  ja["spec"].erase("threads");
  jb["spec"].erase("threads");
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("report round-trip: embedded config reruns to the same prediction") {
  TempFile a("rt_a.json"), b("rt_b.json");
  ExperimentConfig cfg;
  cfg.subcommand = "correlate";
  cfg.f_spec = "cm(2 => -1)";
  cfg.P_text = "x";
  cfg.Q_text = "x+1";
  cfg.x = 20'000;
  cfg.output = a.path;
  REQUIRE(run(cfg) == 0);
  auto j = nlohmann::json::parse(slurp(a.path));
  ExperimentConfig cfg2;
  cfg2.subcommand = j["spec"]["subcommand"];
  cfg2.f_spec = j["spec"]["f"];
  cfg2.P_text = j["spec"]["P"];
  cfg2.Q_text = j["spec"]["Q"];
  cfg2.x = j["spec"]["x"];
  cfg2.output = b.path;
  REQUIRE(run(cfg2) == 0);
  auto j2 = nlohmann::json::parse(slurp(b.path));
  CHECK(j["prediction"].dump() == j2["prediction"].dump());
  CHECK(j["direct"].dump() == j2["direct"].dump());
}

TEST_CASE("csv format emits local factor rows") {
  TempFile out("corr.csv");
  ExperimentConfig cfg;
  cfg.subcommand = "correlate";
  cfg.f_spec = "mobius_sq";
  cfg.P_text = "x";
  cfg.Q_text = "x+1";
  cfg.x = 10'000;
  cfg.format = "csv";
  cfg.output = out.path;
  REQUIRE(run(cfg) == 0);
  auto text = slurp(out.path);
  CHECK(text.find("kind,key,re,im") == 0);
  CHECK(text.find("series_term,1,") != std::string::npos);
  CHECK(text.find("prediction,,") != std::string::npos);
}

TEST_CASE("exit codes") {
  ExperimentConfig cfg;
  cfg.subcommand = "correlate";
  cfg.f_spec = "mobius_sq";
  cfg.P_text = "x^2+1";
  cfg.Q_text = "x^2+1";  // shared factor: resultant zero
  cfg.x = 1000;
  cfg.output = "pretlab_test_unused.json";
  CHECK(run(cfg) == 2);
  std::remove("pretlab_test_unused.json");

  ExperimentConfig small;
  small.subcommand = "meanvalue";
  small.f_spec = "mobius_sq";
  small.P_text = "x";
  small.x = 10'000;
  small.sieve_limit = 1000;  // too small for x = 10^4
  CHECK(run(small) == 2);

  ExperimentConfig bad;
  bad.subcommand = "meanvalue";
  bad.f_spec = "not_a_builtin";
  bad.x = 100;
  CHECK(run(bad) == 2);

  ExperimentConfig unknown;
  unknown.subcommand = "frobnicate";
  CHECK(run(unknown) == 2);
}

TEST_CASE("selftest runs under the sieve cap rules") {
  ExperimentConfig cfg;
  cfg.subcommand = "selftest";
  cfg.sieve_limit = 1000;
  CHECK(run(cfg) == 2);  // cap below the suite's needs
}

#ifdef PRETLAB_BIN
TEST_CASE("binary end-to-end") {
  std::string cmd = std::string(PRETLAB_BIN) +
                    " omega --P x^2+1 --p 5 --k 2 --output pretlab_test_bin.json";
  REQUIRE(std::system(cmd.c_str()) == 0);
  auto j = nlohmann::json::parse(slurp("pretlab_test_bin.json"));
  CHECK(j["omega"] == 2);
  std::remove("pretlab_test_bin.json");
  std::string bad = std::string(PRETLAB_BIN) + " omega --P x^2+1 --p 5 --k 2 --format xml 2>/dev/null";
  CHECK(std::system(bad.c_str()) != 0);
}
#endif

TEST_CASE("determinism holds on the progression-stream oracle route too") {
  TempFile a("det_poly_a.json"), b("det_poly_b.json");
  for (auto& [path, threads] : {std::pair<std::string, unsigned>{a.path, 1},
                                std::pair<std::string, unsigned>{b.path, 3}}) {
    ExperimentConfig cfg;
    cfg.subcommand = "correlate";
    cfg.f_spec = "mobius_sq";
    cfg.P_text = "x^2+1";
    cfg.Q_text = "x";
    cfg.x = 2000;
    cfg.sieve_limit = 5000;  // forces the stream route for x^2+1 values
    cfg.threads = threads;
    cfg.output = path;
    REQUIRE(run(cfg) == 0);
  }
  auto ja = nlohmann::ordered_json::parse(slurp(a.path));
  auto jb = nlohmann::ordered_json::parse(slurp(b.path));
  ja.erase("timing_seconds");
  jb.erase("timing_seconds");
  ja["spec"].erase("threads");
  jb["spec"].erase("threads");
  CHECK(ja.dump() == jb.dump());
}
