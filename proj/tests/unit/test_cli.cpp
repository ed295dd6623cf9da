#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "latstab_cli/cli.hpp"
#include "latstab_cli/config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace latstab::cli;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

// Fresh scratch directory per test case.
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("latstab_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

json read_json(const fs::path& p) {
  std::ifstream f(p);
  return json::parse(f);
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::stringstream ss(s);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("lattice-info counts") {
  const auto r = cli({"lattice-info", "--d", "3", "--L", "2"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["sites"] == 8);
  CHECK(j["bonds"] == 12);
  CHECK(j["plaquettes"] == 6);
  CHECK(j["retained"] == 5);
  CHECK(j["horizontal_plaquettes"] == 2);
  CHECK(j["gauge_fixing"]["spanning"] == true);
}

TEST_CASE("usage errors name the violated constraint") {
  auto r = cli({"lattice-info", "--a", "1.5"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("a must lie in (0, 1]") != std::string::npos);
  r = cli({"lattice-info", "--d", "5"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("d must be 2, 3 or 4") != std::string::npos);
  CHECK(cli({"lattice-info", "--bogus", "1"}).code == kExitUsage);
  CHECK(cli({"lattice-info", "--theorem", "1"}).code == kExitUsage);
  CHECK(cli({"no-such-command"}).code == kExitUsage);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"z-bond", "--group", "SO"}).code == kExitUsage);
  CHECK(cli({"verify-bounds", "--theorem", "7"}).code == kExitUsage);
  CHECK(cli({"su2-check", "--group", "SU", "--N", "2", "--g2", "5"}).code == kExitUsage);
  CHECK(cli({"cue-gue", "--beta-grid", "1e-2,-1"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("cue-gue CSV") {
  const auto r = cli({"cue-gue", "--N", "1", "--beta-grid", "1e-1,1e-2,1e-3,1e-4"});
  REQUIRE(r.code == kExitOk);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "beta,value,target,abs_err");
  const std::string last = lines.back();
  const double value = std::stod(last.substr(last.find(',') + 1));
  CHECK(value == doctest::Approx(0.2821).epsilon(1e-3));
  // 17 significant digits
  CHECK(last.find("0.28209479177387814") != std::string::npos);
}

TEST_CASE("d2-limit CSV and JSON") {
  const auto r = cli({"d2-limit", "--N", "1", "--a-grid", "0.1,0.001"});
  REQUIRE(r.code == kExitOk);
  CHECK(split_lines(r.out)[0] == "a,value,target,abs_err");
  const auto j = cli({"d2-limit", "--N", "1", "--a-grid", "0.001", "--format", "json"});
  const json payload = json::parse(j.out);
  CHECK(payload["points"][0]["abs_err"].get<double>() < 1e-2);
}

TEST_CASE("verify-bounds returns a report array and exit 0 without fails") {
  const auto r = cli({"verify-bounds", "--theorem", "1", "--d", "2", "--L", "3", "--N", "1", "--a", "0.01"});
  CHECK(r.code == kExitOk);
  const json j = json::parse(r.out);
  REQUIRE(j.is_array());
  CHECK(j.size() == 1);
  CHECK(j[0]["verdict"] == "pass");
  const auto all = cli({"verify-bounds", "--samples", "2000"});
  CHECK(all.code == kExitOk);
  CHECK(json::parse(all.out).size() == 3);
}

TEST_CASE("config file precedence: flags over file over defaults") {
  const fs::path dir = scratch("config");
  {
    std::ofstream f(dir / "run.ini");
    f << "# comment\n[model]\nd = 3\nL = 3   ; trailing comment\n\n[run]\nseed = 9\n";
  }
  RunConfig cfg;
  apply_config_file(dir / "run.ini", cfg);
  CHECK(cfg.model.d == 3);
  CHECK(cfg.model.L == 3);
  CHECK(cfg.seed == 9);
  CHECK(cfg.model.a == 1.0);

  const auto r = cli({"lattice-info", "--config", (dir / "run.ini").string(), "--L", "4"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["d"] == 3);
  CHECK(j["L"] == 4);

  {
    std::ofstream f(dir / "bad.ini");
    f << "[model]\ncolour = red\n";
  }
  CHECK(cli({"lattice-info", "--config", (dir / "bad.ini").string()}).code == kExitUsage);
  {
    std::ofstream f(dir / "broken.ini");
    f << "[model\n";
  }
  CHECK(cli({"lattice-info", "--config", (dir / "broken.ini").string()}).code == kExitUsage);
  CHECK(cli({"lattice-info", "--config", (dir / "missing.ini").string()}).code == kExitUsage);
}

TEST_CASE("records: explicit path, environment default, unwritable path") {
  const fs::path dir = scratch("records");
  const fs::path file = dir / "sub" / "wmc.json";
  const auto r = cli({"wilson-mc", "--samples", "5000", "--output", file.string()});
  REQUIRE(r.code == kExitOk);
  const json rec = read_json(file);
  CHECK(rec["schema_version"] == kSchemaVersion);
  CHECK(rec["config"]["subcommand"] == "wilson-mc");
  CHECK(rec["config"]["n_samples"] == 5000);
  CHECK(rec["payload"]["z_w"]["method"] == "monte-carlo");
  CHECK(rec.contains("timestamp"));
  CHECK(rec["wall_time_s"].get<double>() >= 0.0);
  // lossless round trip of the record text
  CHECK(json::parse(rec.dump()) == rec);

  ::setenv(kOutputDirEnv, (dir / "env").string().c_str(), 1);
  CHECK(cli({"lattice-info"}).code == kExitOk);
  ::unsetenv(kOutputDirEnv);
  CHECK(fs::exists(dir / "env" / "lattice-info.json"));

  CHECK(cli({"lattice-info", "--output", "/proc/latstab-nowhere/x.json"}).code == kExitNumeric);
}

TEST_CASE("large logarithms are emitted as log_value only") {
  const auto r = cli({"bose-exact", "--d", "4", "--L", "4", "--a", "0.01", "--gauge", "identity"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(std::abs(j["z_b_unscaled"]["log_value"].get<double>()) > 700);
  CHECK_FALSE(j["z_b_unscaled"].contains("value"));
  CHECK(j["z_b"].contains("value"));
}

TEST_CASE("identical seeds give identical payloads for any worker count") {
  const std::vector<std::string> base = {"wilson-mc", "--d", "3", "--L", "2", "--group", "SU", "--N", "2",
                                         "--samples", "9000", "--seed", "5"};
  auto w1 = base, w4 = base;
  w1.insert(w1.end(), {"--workers", "1"});
  w4.insert(w4.end(), {"--workers", "4"});
  const auto a = cli(w1), b = cli(w4), c = cli(w1);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
}

TEST_CASE("sweep writes one record per point and resumes") {
  const fs::path dir = scratch("sweep");
  const std::vector<std::string> args = {"sweep", "--output", dir.string(), "--a-grid", "1,0.1,0.01",
                                         "--g2-grid", "0.5,1,2", "--format", "json"};
  auto r = cli(args);
  REQUIRE(r.code == kExitOk);
  CHECK(json::parse(r.out)["computed"] == 9);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  REQUIRE(files.size() == 9);
  const json kept = read_json(files[4]);
  fs::remove(files[0]);
  fs::remove(files[7]);
  r = cli(args);
  const json summary = json::parse(r.out);
  CHECK(summary["computed"] == 2);
  CHECK(summary["skipped"] == 7);
  std::size_t count = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    (void)e;
    ++count;
  }
  CHECK(count == 9);
  CHECK(read_json(files[4])["timestamp"] == kept["timestamp"]);  // untouched
  // rerun into a fresh directory: payload values identical
  const fs::path dir2 = scratch("sweep2");
  auto args2 = args;
  args2[2] = dir2.string();
  REQUIRE(cli(args2).code == kExitOk);
  for (const auto& f : files) CHECK(read_json(dir2 / f.filename())["payload"] == read_json(f)["payload"]);
}

TEST_CASE("sweep over an unwritable directory") {
  CHECK(cli({"sweep", "--output", "/proc/latstab-nowhere", "--a-grid", "1"}).code == kExitNumeric);
}

TEST_CASE("schema file ships and is valid JSON") {
  std::ifstream f(LATSTAB_SCHEMA_PATH);
  REQUIRE(f.good());
  const json schema = json::parse(f);
  CHECK(schema["properties"]["schema_version"]["const"] == kSchemaVersion);
  for (const char* key : {"schema_version", "timestamp", "config", "payload", "wall_time_s"}) {
    bool found = false;
    for (const auto& r : schema["required"]) found = found || r == key;
    CHECK(found);
  }
}
