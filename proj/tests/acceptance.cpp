// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "efgp/analysis.hpp"
#include "efgp/cli.hpp"

using namespace efgp;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct RandomCase {
  Potential potential;
  double x;
  double phi;
};

// Same 100 cases for the identity and angle-increment criteria.
std::vector<RandomCase> random_cases() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> amp(0.0, 2.0), xs(0.2, pi - 0.2), phis(0.05, pi - 0.05),
      omega(0.1, 3.0), phase(0.0, 2 * pi);
  const PotentialFamily families[] = {PotentialFamily::Coulomb, PotentialFamily::Alternating,
                                      PotentialFamily::Resonant, PotentialFamily::RandomSign};
  std::vector<RandomCase> out;
  for (int i = 0; i < 100; ++i) {
    PotentialParams p;
    p.amplitude = amp(rng);
    p.frequency = omega(rng);
    p.phase = phase(rng);
    p.seed = rng();
    out.push_back({make_potential(families[i % 4], p), xs(rng), phis(rng)});
  }
  return out;
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& c : random_cases()) {
    const auto spec = make_operator(c.potential, c.phi, 10000);
    const auto sol = solve_recurrence(spec, SpectralParam::from_x(c.x));
    worst = std::max(worst, verify_recursions(sol, to_prufer(sol)).max());
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-10 && t < 10.0, "max residual " + fmt(worst) + ", " + fmt(t) + " s"};
}

Outcome criterion2() {
  std::size_t violations = 0;
  for (const auto& c : random_cases()) {
    const auto spec = make_operator(c.potential, c.phi, 100000);
    const auto traj = to_prufer(solve_recurrence(spec, SpectralParam::from_x(c.x)));
    violations += angle_increment_check(traj, traj.nu).size();
  }
  return {violations == 0, std::to_string(violations) + " violations over 100 cases"};
}

Outcome criterion3() {
  double free_err = 0.0;
  for (int N : {3, 10, 50}) {
    const auto J = build_jacobi(make_operator(Potential::zero(), pi / 2, N));
    const auto ev = eigenvalues_in_window(J, -2.0, 2.0, 1e-13);
    if (static_cast<int>(ev.size()) != N) return {false, "wrong eigenvalue count at N=" + std::to_string(N)};
    for (int k = 1; k <= N; ++k) free_err = std::max(free_err, std::abs(ev[N - k] - 2 * std::cos(k * pi / (N + 1))));
  }
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> amp(-3.0, 3.0), phis(0.1, pi - 0.1);
  double dense_err = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    PotentialParams p;
    p.amplitude = amp(rng);
    const auto J = build_jacobi(make_operator(make_potential(PotentialFamily::Coulomb, p), phis(rng), 40));
    const auto ev = eigenvalues_in_window(J, J.lower_bound() - 1, J.upper_bound() + 1, 1e-13);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J.dense(), Eigen::EigenvaluesOnly);
    if (ev.size() != 40) return {false, "wrong eigenvalue count in a Coulomb case"};
    for (int i = 0; i < 40; ++i) dense_err = std::max(dense_err, std::abs(ev[i] - es.eigenvalues()(i)));
  }
  return {free_err <= 1e-12 && dense_err <= 1e-10,
          "free max error " + fmt(free_err) + ", dense max error " + fmt(dense_err)};
}

Outcome criterion4() {
  const std::int64_t N = 1000000;
  const double xs[] = {pi / 3, pi / 4, 2 * pi / 5};
  double worst = 0.0, largest = 0.0;
  for (double c : {0.0, 1.0}) {
    PotentialParams p;
    p.amplitude = c;
    const auto spec = make_operator(make_potential(PotentialFamily::Coulomb, p), pi / 2, N);
    std::vector<PruferTrajectory> trajs;
    for (double x : xs) trajs.push_back(to_prufer(solve_recurrence(spec, SpectralParam::from_x(x))));
    const auto d = prufer_sum_diagnostics(trajs, N);
    for (const auto& prof : d.diag_profiles) worst = std::max(worst, prof.last_growth());
    largest = std::max(largest, d.diag.maxCoeff());
  }
  return {worst < 0.05, "largest last-window growth " + fmt(worst) + ", largest sup " + fmt(largest)};
}

Outcome criterion5() {
  const auto alt = oscillatory_partial_sums(pi, [](std::int64_t) { return 0.0; }, 1000000);
  const auto slow = oscillatory_partial_sums(
      1.0, [](std::int64_t n) { return 3.0 * std::log(static_cast<double>(n)); }, 1000000);
  bool resonant = false;
  try {
    oscillatory_partial_sums(0.0, [](std::int64_t) { return 0.0; }, 10);
  } catch (const Error& e) {
    resonant = e.kind() == ErrorKind::ResonantFrequency;
  }
  const bool ok = alt.sup_abs <= 1.0 && slow.profile.stabilized() && resonant;
  return {ok, "alternating sup " + fmt(alt.sup_abs) + ", log-phase sup " + fmt(slow.sup_abs) + " growth " + fmt(slow.profile.last_growth()) +
                  ", alpha=0 " + (resonant ? "rejected" : "not rejected")};
}

Outcome criterion6() {
  std::mt19937_64 rng(606);
  std::normal_distribution<double> g;
  int failures = 0, trials = 0;
  double worst_ratio = 0.0;
  while (trials < 1000) {
    const std::int64_t N = 20 + static_cast<std::int64_t>(rng() % 181);
    const std::int64_t n0 = 1 + static_cast<std::int64_t>(rng() % 5);
    const int m = 1 + static_cast<int>(rng() % 4);
    auto rand_vec = [&] {
      auto v = WeightedVector::zeros(n0, N);
      for (Eigen::Index i = 0; i < v.entries.size(); ++i) v.entries(i) = g(rng);
      return v;
    };
    std::vector<WeightedVector> e;
    for (int j = 0; j < m; ++j) e.push_back(weighted_normalized(rand_vec()));
    double beta = 0.0;
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < j; ++k) beta = std::max(beta, std::abs(weighted_dot(e[j], e[k])));
    if (beta * m >= 1.0) continue;
    const auto r = almost_orthogonality_check(rand_vec(), e);
    ++trials;
    if (!r.holds) ++failures;
    worst_ratio = std::max(worst_ratio, r.lhs / r.rhs);
  }
  return {failures == 0, std::to_string(failures) + " failures in 1000 trials, max lhs/rhs " + fmt(worst_ratio)};
}

Outcome criterion7() {
  const auto t0 = Clock::now();
  const auto con = resonance_construct(pi / 2, 2.5, 1000000);
  const auto rec = classify_point_spectrum(make_operator(con.potential, con.phi, 1000000), con.E, {1000, 1000000});
  const double t = seconds_since(t0);
  const bool fit_ok = std::abs(con.fitted_exponent - 0.625) <= 0.05 * 0.625;
  const bool cert_ok = rec.certificate.passed && rec.certificate.N_star == 1000000;
  return {fit_ok && cert_ok && t < 5.0,
          "fitted exponent " + fmt(con.fitted_exponent) + " vs 0.625 (" + (fit_ok ? "ok" : "outside 5%") +
              "), certificate at 1e6 " + (cert_ok ? "passes" : "fails") + " with R^2=" +
              fmt(rec.certificate.RN_sq) + ", " + fmt(t) + " s"};
}

int run_cli(const fs::path& config, const fs::path& out) {
  const std::string cmd = std::string("\"") + EFGP_CLI_PATH + "\" \"" + config.string() +
                          "\" --output-dir \"" + out.string() + "\" --quiet";
  const int raw = std::system(cmd.c_str());
#ifdef WEXITSTATUS
  return WEXITSTATUS(raw);
#else
  return raw;
#endif
}

Outcome criterion8() {
  const std::int64_t N = 1000000;
  std::ostringstream detail;
  bool ok = true;
  const std::pair<double, double> cases[] = {{pi / 2, 2.5}, {pi / 3, 2.2}, {2 * pi / 5, 2.4}};
  for (auto [x, c] : cases) {
    const auto con = resonance_construct(x, c, N);
    const auto rec = classify_point_spectrum(make_operator(con.potential, con.phi, N), con.E, default_checkpoints(N));
    const double C = envelope_constant(con.potential, 1, N);
    const auto rep = check_theorem(EigenvalueSet({rec}), C);
    ok = ok && rep.satisfied && rep.margin > 0.0 && rep.records_used == 1;
    detail << "(c=" << fmt(c) << ": lhs " << fmt(rep.lhs) << " rhs " << fmt(rep.rhs) << ") ";
  }

  // Negative control through the CLI: all raw truncation eigenvalues, no certificate gate.
  const fs::path dir = fs::temp_directory_path() / "efgp_acceptance_negative";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "cfg.json") << R"({"command": "bound-check", "N": 100, "phi": 1.5707963267948966,
                                        "candidates": "truncation", "certified_only": false, "C": 0})";
  const int status = run_cli(dir / "cfg.json", dir / "out");
  std::ifstream rep_in(dir / "out" / "report.json");
  const Json rep = Json::parse(rep_in, nullptr, false);
  double lhs = -1.0, rhs = -1.0;
  if (!rep.is_discarded()) {
    lhs = rep["result"]["bound"]["lhs"].get<double>();
    rhs = rep["result"]["bound"]["rhs"].get<double>();
  }
  // Closed form: sum_{k=1}^{100} sin^2(k pi / 101) = 101/2.
  const bool control = status == 2 && std::abs(lhs - 50.5) < 1e-9 && rhs == 1.0;
  detail << "negative control lhs " << fmt(lhs) << " rhs " << fmt(rhs) << " exit " << status;
  return {ok && control, detail.str()};
}

Outcome criterion9() {
  long bad = 0;
  for (double eps : {0.1, 0.3, 0.49}) {
    for (int k = 1; k <= 10000; ++k) {
      const auto [a, b] = log_bound_check(eps * k / 10001.0, eps);
      if (!a || !b) ++bad;
    }
  }
  return {bad == 0, std::to_string(bad) + " failing grid points of 30000"};
}

Outcome criterion10() {
  PotentialParams p;
  p.amplitude = 1.0;
  const auto spec = make_operator(make_potential(PotentialFamily::Coulomb, p), pi / 2, 1000000);
  const auto t0 = Clock::now();
  const auto traj = to_prufer(solve_recurrence(spec, SpectralParam::from_x(1.0)));
  const double t = seconds_since(t0);
  const bool finite = std::isfinite(traj.ln_R(1000000));

  const fs::path dir = fs::temp_directory_path() / "efgp_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "cfg.json") << R"({"command": "prufer", "N": 1000000, "csv_stride": 50,
      "potential": {"family": "random_sign", "c": 1.5, "seed": 3}, "x_values": [1.0, 2.0]})";
  const int s1 = run_cli(dir / "cfg.json", dir / "a");
  const int s2 = run_cli(dir / "cfg.json", dir / "b");
  auto slurp = [](const fs::path& f) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  bool identical = s1 == 0 && s2 == 0;
  for (const char* f : {"trajectory_0.csv", "trajectory_1.csv"}) {
    const auto a = slurp(dir / "a" / f);
    identical = identical && !a.empty() && a == slurp(dir / "b" / f);
  }
  return {t < 1.0 && finite && identical,
          "trajectory at N=1e6 in " + fmt(t) + " s, CSVs " + (identical ? "byte-identical" : "differ")};
}

}  // namespace

int main() {
  const std::function<Outcome()> criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                               criterion6, criterion7, criterion8, criterion9, criterion10};
  int failed = 0;
  for (std::size_t i = 0; i < std::size(criteria); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << "criterion " << (i + 1) << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << std::endl;
  }
  std::cout << (std::size(criteria) - failed) << "/" << std::size(criteria) << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
