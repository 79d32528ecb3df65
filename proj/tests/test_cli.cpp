#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cqed/cli.hpp"
#include "cqed/config.hpp"
#include "cqed/errors.hpp"

using namespace cqed;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(CQED_SOURCE_DIR) / "configs";

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cqedsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("cqedsim_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmall3 = R"([scenario]
name = 3spdc
cutoff = 5
gt_max = 0.1
points = 11
restarts = 2
[output]
dir = out
snapshot_times = 0.1
)";

}  // namespace

TEST_CASE("help") {
  auto r = cli({"--help"});
  CHECK(r.code == 0);
  for (const char* s : {"modes", "rwa", "run", "witness", "sweep"}) CHECK(r.out.find(s) != std::string::npos);
  r = cli({"sweep", "--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("--jobs") != std::string::npos);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"modes"}).code == 2);
}

TEST_CASE("modes output is deterministic") {
  const auto d = scratch("modes");
  const auto cfg = (kConfigs / "reference_circuit.ini").string();
  REQUIRE(cli({"modes", "--config", cfg, "--out", (d / "a.csv").string(), "--json", (d / "a.json").string()}).code == 0);
  REQUIRE(cli({"modes", "--config", cfg, "--out", (d / "b.csv").string()}).code == 0);
  CHECK(slurp(d / "a.csv") == slurp(d / "b.csv"));
  const auto j = nlohmann::json::parse(slurp(d / "a.json"));
  CHECK(j.at("g0").get<double>() == doctest::Approx(0.0013231931153996734).epsilon(1e-9));
  const auto r = cli({"modes", "--config", cfg, "--n-modes", "5"});
  CHECK(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 6);
}

TEST_CASE("malformed configs exit 2 without output") {
  const auto d = scratch("bad");
  auto bad = write(d / "bad.ini", "[circuit]\nej1 = abc\nlength = 1\ncap_per_len = 1\nind_per_len = 1\n");
  CHECK(cli({"modes", "--config", bad.string(), "--out", (d / "x.csv").string()}).code == 2);
  CHECK_FALSE(fs::exists(d / "x.csv"));
  bad = write(d / "unknown.ini", "[scenario]\nname = 3spdc\nwarp = 9\n[output]\ndir = out\n");
  CHECK(cli({"run", "--config", bad.string()}).code == 2);
  CHECK_FALSE(fs::exists(d / "out"));
  CHECK(cli({"run", "--config", (d / "missing.ini").string()}).code == 2);
  CHECK(cli({"run", "--scenario", "22spdc", "--config", write(d / "s.ini", kSmall3).string()}).code == 2);
}

TEST_CASE("config parsing") {
  const auto c = parse_config("# comment\n[scenario]\nname = hybrid-swap\nlambda_ratio = 5\n[output]\ndir = here\n");
  CHECK(c.scenario == "hybrid-swap");
  CHECK(hybrid_config(c).lambda[1] == 5.0);
  CHECK(c.output_dir == "here");
  CHECK_THROWS_AS(parse_config("[nowhere]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario]\nname\n"), ConfigError);
  CHECK_THROWS_AS(spdc3_config(parse_config("[scenario]\nname = 3spdc\ncutoff = -2\n")), ConfigError);
  CHECK_THROWS_AS(spdc3_config(parse_config("[scenario]\nname = 3spdc\nkerr = maybe\n")), std::exception);
  CHECK(scenario_names().size() == 4);
}

TEST_CASE("rwa on a degenerate spectrum exits 3") {
  const auto r = cli({"rwa", "--config", (kConfigs / "degenerate.ini").string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("degenerate") != std::string::npos);
}

TEST_CASE("rwa on the reference circuit keeps the triple") {
  const auto r = cli({"rwa", "--config", (kConfigs / "3spdc_circuit.ini").string()});
  REQUIRE(r.code == 0);
  const auto resonant = r.out.substr(0, r.out.find("counter-rotating"));
  CHECK(resonant.find("a0+ a1+ a2+\n") != std::string::npos);
  CHECK(resonant.find("a0 a1 a2\n") != std::string::npos);
}

TEST_CASE("rwa on a terms file") {
  const auto d = scratch("rwa");
  auto r = cli({"rwa", "--config", (kConfigs / "rwa_terms.ini").string(), "--json", (d / "c.json").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("resonant terms (3)") != std::string::npos);
  CHECK(r.out.find("counter-rotating terms (2)") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(d / "c.json"));
  CHECK(j.at("resonant").size() == 3);
  CHECK(j.at("resonant")[0].at("coeff")[0].get<double>() == doctest::Approx(0.1));

  r = cli({"rwa", "--config", (kConfigs / "rwa_terms.ini").string(), "--kerr", "drop"});
  CHECK(r.out.find("resonant terms (2)") != std::string::npos);

  write(d / "empty.json", R"({"frequencies": [1.0, 2.5], "terms": []})");
  const auto cfg = write(d / "empty.ini", "[scenario]\nterms_file = empty.json\n");
  r = cli({"rwa", "--config", cfg.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("resonant terms (0)") != std::string::npos);
  CHECK(r.out.find("counter-rotating terms (0)") != std::string::npos);

  write(d / "broken.json", R"({"frequencies": [1.0], "terms": [{"factors": [[0, "sideways"]], "coeff": [1, 0]}]})");
  CHECK(cli({"rwa", "--config", write(d / "broken.ini", "[scenario]\nterms_file = broken.json\n").string()}).code == 2);
  CHECK(cli({"rwa", "--config", cfg.string(), "--tolerance", "-1"}).code == 2);
}

TEST_CASE("run writes trajectories, summaries and snapshots") {
  const auto d = scratch("run");
  const auto cfg = write(d / "small.ini", kSmall3);
  auto r = cli({"run", "--config", cfg.string()});
  REQUIRE(r.code == 0);
  const auto summary = nlohmann::json::parse(slurp(d / "out" / "3spdc_summary.json"));
  CHECK(summary.at("g2_peak").get<double>() > 0.0);
  CHECK(summary.at("converged").get<bool>());
  const auto csv = slurp(d / "out" / "3spdc.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
  CHECK(csv.rfind("t,", 0) == 0);
  const auto snap = d / "out" / "3spdc_state_0.1.json";
  REQUIRE(fs::exists(snap));

  r = cli({"witness", "--state", snap.string(), "--restarts", "3", "--json", (d / "w.json").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("G2") != std::string::npos);
  const auto w = nlohmann::json::parse(slurp(d / "w.json"));
  double g2 = 0.0;
  for (const auto& x : w)
    if (x.at("name") == "G2") g2 = x.at("value").get<double>();
  CHECK(g2 == doctest::Approx(summary.at("g2_peak").get<double>()).epsilon(1e-9));
  CHECK(cli({"witness", "--state", snap.string(), "--qubits", "0,1,2"}).code == 2);

  const auto same = cli({"run", "--config", cfg.string(), "--out", (d / "again").string()});
  CHECK(same.code == 0);
  CHECK(slurp(d / "again" / "3spdc.csv") == csv);
}

TEST_CASE("run 22spdc reports Gaussian entanglement only") {
  const auto d = scratch("run22");
  const auto cfg = write(d / "c.ini", "[scenario]\nname = 22spdc\ncutoff = 7\npoints = 6\nrestarts = 6\n");
  const auto r = cli({"run", "--config", cfg.string(), "--out", d.string()});
  REQUIRE(r.code == 0);
  const auto s = nlohmann::json::parse(slurp(d / "22spdc_summary.json"));
  CHECK(s.at("g2_peak").get<double>() <= 0.0);
  CHECK(s.at("s_peak").get<double>() > 0.0);
}

TEST_CASE("non-converged runs exit 4") {
  const auto d = scratch("nc");
  const auto cfg = write(d / "c.ini", "[scenario]\nname = 3spdc\ncutoff = 2\ngt_max = 1\npoints = 5\nrestarts = 1\n");
  CHECK(cli({"run", "--config", cfg.string(), "--out", d.string()}).code == 4);
}

TEST_CASE("sweep") {
  const auto d = scratch("sweep");
  const auto cfg = write(d / "c.ini", kSmall3);
  auto r = cli({"sweep", "--config", cfg.string(), "--param", "g0", "--values", "0,0.5,1", "--jobs", "2"});
  REQUIRE(r.code == 0);
  const auto csv = slurp(d / "out" / "sweep.csv");
  CHECK(csv == r.out);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(fs::exists(d / "out" / "3spdc_2_summary.json"));
  const auto one = cli({"sweep", "--config", cfg.string(), "--param", "g0", "--values", "0,0.5,1", "--jobs", "1",
                        "--out", (d / "serial").string()});
  CHECK(one.out == r.out);
  CHECK(cli({"sweep", "--config", cfg.string(), "--param", "g0", "--values", "1,oops"}).code == 2);
  CHECK(cli({"sweep", "--config", cfg.string(), "--param", "nonsense", "--values", "1"}).code == 2);
}
