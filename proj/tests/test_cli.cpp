#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = MMNOMA_CLI_PATH;

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const auto capture = fs::temp_directory_path() / "mmnoma_cli_stdout.txt";
  const std::string cmd = env + " MMNOMA_PRESET_DIR='" MMNOMA_TEST_PRESET_DIR "' '" + kCli +
                          "' " + args + " > '" + capture.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(capture);
  std::ostringstream s;
  s << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, s.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mmnoma_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  const auto p = fs::temp_directory_path() / ("mmnoma_cli_" + name + ".json");
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("presets list") {
  const auto r = run("presets list");
  CHECK(r.code == 0);
  for (const char* name : {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"}) {
    CHECK_MESSAGE(r.out.find(name) != std::string::npos, name);
  }
}

TEST_CASE("run a preset by name") {
  const auto dir = scratch("fig6");
  const auto r = run("run --config fig6 --out '" + dir.string() + "'");
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "results.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(slurp(dir / "results.csv").rfind("r,R1_designed,R2_designed,sum_designed,", 0) == 0);
}

TEST_CASE("run a config file with seed and format overrides") {
  const auto cfg = write_config("gain", R"({"experiment": "gain-error", "trials": 5, "sweep": [8]})");
  const auto dir = scratch("gain");
  const auto r = run("run --config '" + cfg.string() + "' --seed 77 --format json --out '" +
                     dir.string() + "'");
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "results.json"));
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["seed"] == 77);
  CHECK(m["config"]["seed"] == 77);
  CHECK(m["config"]["format"] == "json");
}

TEST_CASE("thread count does not change the output") {
  const auto cfg = write_config(
      "threads", R"({"experiment": "noma-vs-oma", "trials": 40, "sweep": [1, 2],
                     "channel": {"kinds": ["LOS", "NLOS"]}})");
  const auto one = scratch("t1");
  const auto four = scratch("t4");
  CHECK(run("run --config '" + cfg.string() + "' --threads 1 --out '" + one.string() + "'").code == 0);
  CHECK(run("run --config '" + cfg.string() + "' --threads 4 --out '" + four.string() + "'").code == 0);
  CHECK(slurp(one / "results.csv") == slurp(four / "results.csv"));
}

TEST_CASE("output directory from the environment") {
  const auto dir = scratch("env");
  CHECK(run("run --config fig5", "MMNOMA_OUT_DIR='" + dir.string() + "'").code == 0);
  CHECK(fs::exists(dir / "results.csv"));
  // --out still wins over the environment.
  const auto flag = scratch("flag");
  CHECK(run("run --config fig5 --out '" + flag.string() + "'",
            "MMNOMA_OUT_DIR='" + dir.string() + "_unused'").code == 0);
  CHECK(fs::exists(flag / "results.csv"));
  CHECK_FALSE(fs::exists(dir.string() + "_unused"));
}

TEST_CASE("config errors exit 2") {
  const auto invalid = write_config("invalid", R"({"experiment": "gain-vs-N"})");
  const auto r = run("run --config '" + invalid.string() + "'");
  CHECK(r.code == 2);
  CHECK(r.out.find("sweep") != std::string::npos);
  const auto malformed = write_config("malformed", "{\"experiment\": ");
  CHECK(run("run --config '" + malformed.string() + "'").code == 2);
  CHECK(run("run --config fig6 --format xml").code == 2);
  CHECK(run("run").code == 2);
  CHECK(run("frobnicate").code == 2);
}

TEST_CASE("universally infeasible config exits 3") {
  const auto cfg = write_config("infeasible",
                                R"({"experiment": "rate-vs-constraint", "sweep": [30, 40]})");
  const auto dir = scratch("infeasible");
  const auto r = run("run --config '" + cfg.string() + "' --out '" + dir.string() + "'");
  CHECK(r.code == 3);
  // The in-band report is still written.
  CHECK(fs::exists(dir / "results.csv"));
}

TEST_CASE("I/O failures exit 4") {
  CHECK(run("run --config /nonexistent/config.json").code == 4);
  const auto blocker = fs::temp_directory_path() / "mmnoma_cli_blocker";
  std::ofstream(blocker) << "x";
  CHECK(run("run --config fig6 --out '" + (blocker / "sub").string() + "'").code == 4);
  fs::remove(blocker);
}
