#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "efgp/cli.hpp"

using namespace efgp;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("efgp_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const fs::path& config, const fs::path& out) {
  const std::string cmd = std::string("\"") + EFGP_CLI_PATH + "\" \"" + config.string() +
                          "\" --output-dir \"" + out.string() + "\" --quiet 2>/dev/null";
  const int raw = std::system(cmd.c_str());
#ifdef WEXITSTATUS
  return WEXITSTATUS(raw);
#else
  return raw;
#endif
}

ErrorKind parse_error_kind(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a parse failure");
  return ErrorKind::InvalidArgument;
}

std::string parse_error_message(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_config(R"({"command": "spectrum", "potential": {"family": "coulomb", "c": 1.0},
                                     "phi": 1.5707963267948966, "N": 40, "window": [-2, 2]})");
  CHECK(cfg.command == Command::Spectrum);
  CHECK(cfg.N == 40);
  CHECK(cfg.potential(2) == 0.5);
  CHECK(cfg.window_lo == -2.0);
  CHECK(cfg.config_hash.size() == 16);
  CHECK(cfg.effective_checkpoints() == std::vector<std::int64_t>{40});

  // The hash ignores the output directory but tracks everything else.
  const auto a = parse_config(R"({"command": "spectrum", "N": 40, "output_dir": "a"})");
  const auto b = parse_config(R"({"command": "spectrum", "N": 40, "output_dir": "b"})");
  const auto c = parse_config(R"({"command": "spectrum", "N": 41})");
  CHECK(a.config_hash == b.config_hash);
  CHECK(a.config_hash != c.config_hash);
}

TEST_CASE("config validation") {
  CHECK(parse_error_kind(R"({"command": "spectrum", "N": 10, "bogus": 1})") == ErrorKind::ValidationError);
  CHECK(parse_error_message(R"({"command": "spectrum", "N": 10, "potential": {"family": "coulomb", "q": 1}})")
            .find("potential.q") != std::string::npos);
  CHECK(parse_error_message(R"({"command": "spectrum", "N": 10, "phi": 3.5})").find("phi: must lie in (0,π)") !=
        std::string::npos);
  CHECK(parse_error_kind(R"({"command": "spectrum", "N": 10, "phi": 0})") == ErrorKind::ValidationError);
  CHECK(parse_error_kind(R"({"command": "fly", "N": 10})") == ErrorKind::ValidationError);
  CHECK(parse_error_kind(R"({"command": "prufer", "N": 10})") == ErrorKind::ValidationError);
  CHECK(parse_error_kind(R"({"command": "construct", "N": 10})") == ErrorKind::ValidationError);
  CHECK(parse_error_kind(R"({"command": "spectrum", "N": 10, "potential": {"family": "zeta"}})") ==
        ErrorKind::ValidationError);
  CHECK(parse_error_kind("{\"command\": \"spectrum\",\n \"N\": }") == ErrorKind::ParseError);
}

TEST_CASE("library run: prufer command") {
  const auto dir = scratch_dir("prufer");
  const auto cfg = parse_config(R"({"command": "prufer", "potential": {"family": "coulomb", "c": 1.0},
                                     "N": 2000, "x_values": [1.0, 2.0], "csv_stride": 10})");
  RunOptions opts;
  opts.output_dir = dir.string();
  opts.threads = 2;
  const auto rr = run(cfg, opts);
  CHECK(rr.exit_status == 0);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "trajectory_0.csv"));
  CHECK(fs::exists(dir / "trajectory_1.csv"));
  const auto& trajs = rr.report["result"]["trajectories"];
  REQUIRE(trajs.size() == 2);
  CHECK(trajs[0]["angle_violations"].get<int>() == 0);
  const std::string csv = slurp(dir / "trajectory_0.csv");
  CHECK(csv.rfind("# efgp-toolkit 0.1.0 config=" + cfg.config_hash, 0) == 0);
  CHECK(rr.report["toolkit"]["config_hash"] == cfg.config_hash);
}

TEST_CASE("library run: spectrum and diagnostics") {
  const auto dir = scratch_dir("spectrum");
  RunOptions opts;
  opts.output_dir = dir.string();
  const auto rr = run(parse_config(R"({"command": "spectrum", "N": 5, "classify": false})"), opts);
  std::istringstream in(slurp(dir / "spectrum.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#' && line[0] != 'E') ++rows;
  }
  CHECK(rows == 5);

  const auto dir2 = scratch_dir("lemma");
  opts.output_dir = dir2.string();
  run(parse_config(R"({"command": "lemma-sums", "N": 4096, "x_values": [1.0471975511965976, 0.6283185307179586],
                        "oscillatory": [{"alpha": 3.141592653589793, "N_max": 1000}]})"),
      opts);
  CHECK(fs::exists(dir2 / "diagnostics.json"));
}

TEST_CASE("CLI exit statuses") {
  const auto dir = scratch_dir("exit");
  auto write = [&](const std::string& name, const std::string& body) {
    const fs::path p = dir / name;
    std::ofstream(p) << body;
    return p;
  };
  const auto ok = write("ok.json", R"({"command": "bound-check", "potential": {"family": "coulomb", "c": 1.0},
                                        "N": 1000, "x_values": [1.0]})");
  CHECK(run_cli(ok, dir / "ok") == 0);

  const auto violated = write("neg.json", R"({"command": "bound-check", "N": 100, "candidates": "truncation",
                                              "certified_only": false, "C": 0})");
  CHECK(run_cli(violated, dir / "neg") == 2);

  const auto bad_phi = write("phi.json", R"({"command": "spectrum", "N": 10, "phi": 4})");
  CHECK(run_cli(bad_phi, dir / "phi") == 1);

  const auto sub = write("sub.json", R"({"command": "construct", "N": 1000, "x": 1.5707963267948966, "c": 1.9})");
  CHECK(run_cli(sub, dir / "sub") == 1);

  const auto degenerate = write("deg.json", R"({"command": "lemma-sums", "N": 1000, "x_values": [1.0, 1.0]})");
  CHECK(run_cli(degenerate, dir / "deg") == 1);

  CHECK(run_cli(dir / "missing.json", dir / "missing") == 1);
}

TEST_CASE("CLI output is deterministic") {
  const auto dir = scratch_dir("determinism");
  const fs::path cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"command": "prufer", "potential": {"family": "random_sign", "c": 1.5, "seed": 7},
                             "N": 20000, "x_values": [0.9, 2.1]})";
  REQUIRE(run_cli(cfg, dir / "a") == 0);
  REQUIRE(run_cli(cfg, dir / "b") == 0);
  for (const char* f : {"trajectory_0.csv", "trajectory_1.csv"}) {
    const auto a = slurp(dir / "a" / f);
    CHECK(!a.empty());
    CHECK(a == slurp(dir / "b" / f));
  }
}
