#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "efgp/analysis.hpp"
#include "efgp/cli.hpp"
#include "efgp/numeric.hpp"
#include "efgp/spectral.hpp"

namespace efgp {

namespace {

namespace fs = std::filesystem;

// Runs fn(i) for i in [0, count) on up to `threads` workers. Results land in
// index order, so output does not depend on scheduling.
template <typename T>
std::vector<T> parallel_map(std::size_t count, unsigned threads, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < count; i += stride) {
      try {
        slots[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
  }
  std::vector<T> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

class StageTimer {
 public:
  template <typename F>
  auto run(const std::string& stage, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(f())>) {
        f();
        record(stage, t0);
      } else {
        auto r = f();
        record(stage, t0);
        return r;
      }
    } catch (const Error& e) {
      throw Error(e.kind(), "stage '" + stage + "': " + e.detail());
    }
  }

  Json timings() const { return timings_; }

 private:
  void record(const std::string& stage, std::chrono::steady_clock::time_point t0) {
    timings_[stage] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  Json timings_ = Json::object();
};

std::string header_line(const ExperimentConfig& cfg) {
  return std::string(kToolkitName) + " " + kToolkitVersion + " config=" + cfg.config_hash;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorKind::IoError, "write failed for '" + path.string() + "'");
}

EigenvalueSet classify_energies(const OperatorSpec& spec, const std::vector<double>& energies,
                                const ExperimentConfig& cfg, unsigned threads, bool classify) {
  const auto checkpoints = cfg.effective_checkpoints();
  auto records = parallel_map<EigenvalueRecord>(energies.size(), threads, [&](std::size_t i) {
    const double E = energies[i];
    if (classify && E > -2.0 && E < 2.0) return classify_point_spectrum(spec, E, checkpoints);
    return make_record(E);
  });
  return EigenvalueSet(std::move(records), cfg.tolerance.distinct_tol);
}

struct TrajectorySummary {
  Json summary;
  std::string csv;
};

TrajectorySummary trajectory_run(const OperatorSpec& spec, double x, const ExperimentConfig& cfg) {
  const SpectralParam param = SpectralParam::from_x(x);
  const Solution sol = solve_recurrence(spec, param);
  const PruferTrajectory traj = to_prufer(sol);
  TrajectorySummary out;
  const auto violations = angle_increment_check(traj, traj.nu);
  Json s;
  s["x"] = x;
  s["E"] = param.E;
  s["R1"] = traj.R(1);
  s["ln_R_final"] = traj.ln_R(spec.N);
  s["residuals"] = to_json(verify_recursions(sol, traj));
  s["angle_violations"] = violations.size();
  s["record"] = to_json(classify_trajectory(traj, cfg.effective_checkpoints()));
  out.summary = std::move(s);
  std::ostringstream csv;
  write_trajectory_csv(csv, sol, traj, {cfg.csv_stride, header_line(cfg)});
  out.csv = csv.str();
  return out;
}

std::function<double(std::int64_t)> gamma_rule(const OscillatoryConfig& oc) {
  if (oc.rule == GammaRule::Log) {
    const double coef = oc.coef;
    return [coef](std::int64_t n) { return coef * std::log(static_cast<double>(n)); };
  }
  return [](std::int64_t) { return 0.0; };
}

}  // namespace

RunReport run(const ExperimentConfig& cfg, const RunOptions& options) {
  const fs::path out_dir = options.output_dir.value_or(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create output directory '" + out_dir.string() + "'");
  const unsigned threads = std::max(1u, options.threads);
  const std::string header = header_line(cfg);
  StageTimer timer;
  RunReport rr;
  Json result;

  auto make_spec = [&](const Potential& p, double phi) {
    return timer.run("setup", [&] { return make_operator(p, phi, cfg.N); });
  };

  switch (cfg.command) {
    case Command::Spectrum: {
      const OperatorSpec spec = make_spec(cfg.potential, cfg.phi);
      const auto energies = timer.run("eigenvalues", [&] {
        return eigenvalues_in_window(build_jacobi(spec), cfg.window_lo, cfg.window_hi,
                                     cfg.tolerance.eigen_tol);
      });
      const EigenvalueSet set = timer.run("classify", [&] {
        return classify_energies(spec, energies, cfg, threads, cfg.classify);
      });
      timer.run("write", [&] {
        std::ostringstream csv;
        write_spectrum_csv(csv, set, header);
        write_file(out_dir / "spectrum.csv", csv.str());
      });
      result["spectrum"] = to_json(set);
      break;
    }
    case Command::Prufer: {
      const OperatorSpec spec = make_spec(cfg.potential, cfg.phi);
      auto runs = timer.run("trajectories", [&] {
        return parallel_map<TrajectorySummary>(cfg.x_values.size(), threads, [&](std::size_t j) {
          return trajectory_run(spec, cfg.x_values[j], cfg);
        });
      });
      Json summaries = Json::array();
      timer.run("write", [&] {
        for (std::size_t j = 0; j < runs.size(); ++j) {
          write_file(out_dir / ("trajectory_" + std::to_string(j) + ".csv"), runs[j].csv);
          summaries.push_back(std::move(runs[j].summary));
        }
      });
      result["trajectories"] = std::move(summaries);
      break;
    }
    case Command::Construct: {
      const ResonanceConstruction con = timer.run("construct (fields x, c)", [&] {
        return resonance_construct(*cfg.construct_x, *cfg.construct_c, cfg.N);
      });
      const OperatorSpec spec = make_spec(con.potential, con.phi);
      auto tr = timer.run("trajectory", [&] { return trajectory_run(spec, con.x, cfg); });
      timer.run("write", [&] { write_file(out_dir / "trajectory_0.csv", tr.csv); });
      result["construction"] = to_json(con);
      result["trajectory"] = std::move(tr.summary);
      break;
    }
    case Command::BoundCheck: {
      Potential potential = cfg.potential;
      double phi = cfg.phi;
      std::vector<double> energies;
      if (cfg.construct_x) {
        const ResonanceConstruction con = timer.run("construct (fields x, c)", [&] {
          return resonance_construct(*cfg.construct_x, *cfg.construct_c, cfg.N);
        });
        potential = con.potential;
        phi = con.phi;
        energies.push_back(con.E);
        result["construction"] = to_json(con);
      }
      const OperatorSpec spec = make_spec(potential, phi);
      if (cfg.candidates == "truncation") {
        auto ev = timer.run("eigenvalues", [&] {
          return eigenvalues_in_window(build_jacobi(spec), -2.0, 2.0, cfg.tolerance.eigen_tol);
        });
        energies.insert(energies.end(), ev.begin(), ev.end());
      } else {
        for (double x : cfg.x_values) energies.push_back(2.0 * std::cos(x));
      }
      const EigenvalueSet set = timer.run("classify", [&] {
        return classify_energies(spec, energies, cfg, threads, cfg.certified_only || cfg.classify);
      });
      const double C = cfg.C ? *cfg.C : timer.run("envelope", [&] {
        return envelope_constant(potential, 1, cfg.N);
      });
      const BoundReport bound = timer.run("bound", [&] { return check_theorem(set, C, cfg.certified_only); });
      timer.run("write", [&] {
        std::ostringstream csv;
        write_spectrum_csv(csv, set, header);
        write_file(out_dir / "spectrum.csv", csv.str());
      });
      result["bound"] = to_json(bound);
      result["certified_only"] = cfg.certified_only;
      if (!bound.satisfied) rr.exit_status = 2;
      break;
    }
    case Command::LemmaSums: {
      Json diag;
      if (!cfg.x_values.empty()) {
        const OperatorSpec spec = make_spec(cfg.potential, cfg.phi);
        const double min_sin = std::sin(*std::min_element(cfg.x_values.begin(), cfg.x_values.end(),
                                                          [](double a, double b) { return std::sin(a) < std::sin(b); }));
        const double C = envelope_constant(cfg.potential, 1, cfg.N);
        const std::int64_t n0 = std::min(small_coupling_onset(C, min_sin), cfg.N);
        auto trajs = timer.run("trajectories", [&] {
          return parallel_map<PruferTrajectory>(cfg.x_values.size(), threads, [&](std::size_t j) {
            return to_prufer(solve_recurrence(spec, SpectralParam::from_x(cfg.x_values[j])));
          });
        });
        const auto d = timer.run("prufer-sums", [&] {
          return prufer_sum_diagnostics(trajs, cfg.N, {n0, 1e-9});
        });
        diag["prufer_sums"] = to_json(d);
        Json stab = Json::array();
        for (const auto& p : d.diag_profiles) stab.push_back(p.stabilized(cfg.tolerance.stabilization));
        diag["prufer_sums"]["diag_stabilized"] = std::move(stab);
      }
      Json osc = Json::array();
      for (std::size_t i = 0; i < cfg.oscillatory.size(); ++i) {
        const auto& oc = cfg.oscillatory[i];
        const auto s = timer.run("oscillatory[" + std::to_string(i) + "]", [&] {
          return oscillatory_partial_sums(oc.alpha, gamma_rule(oc), oc.N_max);
        });
        Json j = to_json(s);
        j["stabilized"] = s.profile.stabilized(cfg.tolerance.stabilization);
        osc.push_back(std::move(j));
      }
      diag["oscillatory"] = std::move(osc);
      timer.run("write", [&] { write_file(out_dir / "diagnostics.json", diag.dump(2) + "\n"); });
      result["diagnostics"] = std::move(diag);
      break;
    }
  }

  Json& rep = rr.report;
  rep["toolkit"] = {{"name", kToolkitName}, {"version", kToolkitVersion}, {"config_hash", cfg.config_hash}};
  rep["command"] = std::string(to_string(cfg.command));
  rep["config"] = cfg.echo;
  rep["result"] = std::move(result);
  rep["exit_status"] = rr.exit_status;
  rep["timings"] = timer.timings();
  write_file(out_dir / "report.json", rep.dump(2) + "\n");
  return rr;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Pruefer-variable analysis of half-line discrete Schroedinger operators"};
  std::string config_path;
  std::string output_dir;
  unsigned threads = 1;
  bool quiet = false;
  app.add_option("config", config_path, "JSON experiment configuration")->required();
  app.add_option("--output-dir", output_dir, "override the configured output directory");
  app.add_option("--threads", threads, "worker threads for independent spectral parameters")
      ->check(CLI::Range(1u, 1024u));
  app.add_flag("--quiet", quiet, "suppress the summary on stdout");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot read config '" + config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const ExperimentConfig cfg = parse_config(buf.str(), fs::path(config_path).parent_path().string());
    RunOptions opts;
    if (!output_dir.empty()) opts.output_dir = output_dir;
    opts.threads = threads;
    opts.quiet = quiet;
    const RunReport rr = run(cfg, opts);
    if (!quiet) {
      const Json& res = rr.report["result"];
      std::cout << rr.report["command"].get<std::string>() << ": ";
      if (res.contains("bound")) {
        const Json& b = res["bound"];
        std::cout << "lhs=" << b["lhs"] << " rhs=" << b["rhs"] << " C=" << b["C_used"]
                  << (b["satisfied"].get<bool>() ? " satisfied" : " NOT satisfied");
      } else {
        std::cout << "ok";
      }
      std::cout << " -> " << opts.output_dir.value_or(cfg.output_dir) << "/report.json\n";
    }
    return rr.exit_status;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace efgp
