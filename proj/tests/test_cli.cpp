#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "sdq/config.hpp"
#include "sdq/replicate.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sdq;

namespace {

struct Workdir {
  Workdir() {
    dir = fs::temp_directory_path() / ("sdq_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workdir() { fs::remove_all(dir); }

  std::string put(const std::string& name, const json& j) const {
    const fs::path p = dir / name;
    std::ofstream(p) << j.dump(2);
    return p.string();
  }
  std::string read(const std::string& name) const {
    std::ifstream in(dir / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir;
  static inline int counter = 0;
};

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(SDQ_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json single_region_config() {
  return json{{"regions", {{{"lambda", 1}, {"mu", 1}, {"mu_star", 1}}}}, {"n_list", {25}}, {"events", 20000}};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("simulate writes a law and a Palm report per n") {
    Workdir w;
    const std::string cfg = w.put("cfg.json", single_region_config());
    const fs::path out = w.dir / "out";
    REQUIRE(run_cli("simulate --config " + cfg + " --out " + out.string() + " --n 25 --n 100", w.dir / "log") == 0);
    for (const char* f : {"law_n25.csv", "law_n25.json", "palm_n25.csv", "law_n100.csv", "palm_n100.csv",
                          "manifest_simulate.json"})
      CHECK(fs::exists(out / f));
    const std::string csv = w.read("out/law_n25.csv");
    CHECK(csv.rfind("ell,scaled_u,mass\n0,0,", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(w.read("out/palm_n25.csv").rfind("x,q,H_hat,Delta_hat,", 0) == 0);
  }

  TEST_CASE("replications merge like concatenated streams") {
    Workdir w;
    const std::string cfg = w.put("cfg.json", single_region_config());
    const fs::path out = w.dir / "out";
    REQUIRE(run_cli("simulate --config " + cfg + " --out " + out.string() + " --replications 8 --seed 11",
                    w.dir / "log") == 0);
    const json law = json::parse(w.read("out/law_n25.json"));
    CHECK(law["replications"] == 8);

    const ExperimentConfig c = parse_config(single_region_config());
    const ScaledSystem sys(25, c.model, c.arrival, c.service);
    RunOptions opt;
    opt.events = 20000;
    opt.seed = 11;
    const std::vector<StationaryRun> reps = run_each_replication(sys, opt, 8);
    std::vector<double> weights;
    double total = 0.0;
    for (const StationaryRun& r : reps) {
      if (r.law.time_weights.size() > weights.size()) weights.resize(r.law.time_weights.size(), 0.0);
      for (std::size_t l = 0; l < r.law.time_weights.size(); ++l) weights[l] += r.law.time_weights[l];
      total += r.law.total_time;
    }
    const std::vector<double> mass = law["mass"].get<std::vector<double>>();
    REQUIRE(mass.size() == weights.size());
    for (std::size_t l = 0; l < mass.size(); ++l) CHECK(mass[l] == doctest::Approx(weights[l] / total).epsilon(1e-12));
  }

  TEST_CASE("unstable config exits with code 2 and names gamma_inf") {
    Workdir w;
    json j = single_region_config();
    j["regions"][0]["mu_star"] = 0;
    const std::string cfg = w.put("cfg.json", j);
    CHECK(run_cli("simulate --config " + cfg + " --out " + (w.dir / "out").string(), w.dir / "log") == 2);
    CHECK(w.read("log").find("gamma_inf") != std::string::npos);
  }

  TEST_CASE("validation errors exit with code 1") {
    Workdir w;
    json j = single_region_config();
    j["regions"][0]["mu"] = -1;
    const std::string cfg = w.put("cfg.json", j);
    CHECK(run_cli("simulate --config " + cfg, w.dir / "log") == 1);
    CHECK(w.read("log").find("regions[0].mu") != std::string::npos);
    CHECK(run_cli("limit --config " + (w.dir / "missing.json").string(), w.dir / "log") != 0);
  }

  TEST_CASE("limit grid for the single-region family") {
    Workdir w;
    const std::string cfg = w.put("cfg.json", single_region_config());
    REQUIRE(run_cli("limit --config " + cfg + " --out " + (w.dir / "out").string(), w.dir / "log") == 0);
    std::istringstream in(w.read("out/limit.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "u,h,Hcdf");
    bool saw_one = false;
    while (std::getline(in, line)) {
      double u = 0, h = 0;
      std::sscanf(line.c_str(), "%lf,%lf", &u, &h);
      if (u == 0.0) CHECK(h == 1.0);
      if (std::abs(u - 1.0) < 1e-12) {
        CHECK(h == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
        saw_one = true;
      }
    }
    CHECK(saw_one);
  }

  TEST_CASE("compare gives one row per n and a monotone flag") {
    Workdir w;
    json j = single_region_config();
    j["n_list"] = {25, 100, 400};
    const std::string cfg = w.put("cfg.json", j);
    REQUIRE(run_cli("compare --config " + cfg + " --out " + (w.dir / "out").string(), w.dir / "log") == 0);
    const std::string csv = w.read("out/compare.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    const json summary = json::parse(w.read("out/compare.json"));
    CHECK(summary["monotone"] == true);
    CHECK(summary["source"] == "oracle");
  }

  TEST_CASE("clocks row at theta zero") {
    Workdir w;
    const std::string cfg = w.put("cfg.json", single_region_config());
    REQUIRE(run_cli("clocks --config " + cfg + " --out " + (w.dir / "out").string(), w.dir / "log") == 0);
    const std::string csv = w.read("out/clocks.csv");
    CHECK(csv.find("\n0,25,0,0,0,0\n") != std::string::npos);
  }

  TEST_CASE("manifest reproduces the outputs") {
    Workdir w;
    const std::string cfg = w.put("cfg.json", single_region_config());
    REQUIRE(run_cli("simulate --config " + cfg + " --out " + (w.dir / "a").string() + " --seed 5 --events 30000",
                    w.dir / "log") == 0);
    const json m = json::parse(w.read("a/manifest_simulate.json"));
    CHECK(m["command"] == "simulate");
    CHECK(m["seed"] == 5);
    CHECK(m["config"]["events"] == 30000);
    CHECK(m["config_hash"] == config_hash(m["config"]));
    json replay = m["config"];
    replay["outputs"] = (w.dir / "b").string();
    const std::string cfg2 = w.put("replay.json", replay);
    REQUIRE(run_cli("simulate --config " + cfg2, w.dir / "log") == 0);
    for (const json& f : m["outputs"]) {
      const std::string name = f.get<std::string>();
      CHECK(w.read("a/" + name) == w.read("b/" + name));
    }
  }

  TEST_CASE("other commands write their tables") {
    Workdir w;
    json j = single_region_config();
    j["regions"] = {{{"lambda", 1}, {"mu", 1.2}}};
    j["fluid"] = {{"y", 1000}, {"t_grid", {0, 1, 6}}};
    const std::string fluid_cfg = w.put("fluid.json", j);
    REQUIRE(run_cli("fluid --config " + fluid_cfg + " --out " + (w.dir / "out").string(), w.dir / "log") == 0);
    CHECK(w.read("out/fluid.csv").rfind("t,L_bar\n0,1\n", 0) == 0);

    json d = single_region_config();
    d["diffusion"] = {{"dt", 0.01}, {"steps", 20000}, {"bin_width", 0.01}};
    const std::string diff_cfg = w.put("diff.json", d);
    REQUIRE(run_cli("diffusion --config " + diff_cfg + " --out " + (w.dir / "out").string(), w.dir / "log") == 0);
    CHECK(fs::exists(w.dir / "out" / "diffusion.csv"));
    CHECK(json::parse(w.read("out/diffusion.json"))["samples"] == 18000);

    REQUIRE(run_cli("palm-report --config " + diff_cfg + " --out " + (w.dir / "out").string(), w.dir / "log") == 0);
    const json rep = json::parse(w.read("out/palm_report_n25.json"));
    CHECK(rep["r1"].get<double>() <= rep["r1_bound"].get<double>());
  }
}
