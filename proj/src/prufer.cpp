#include "efgp/prufer.hpp"

#include <algorithm>
#include <limits>

#include "efgp/numeric.hpp"

namespace efgp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Integer k such that a + 2 pi k is nearest to target.
std::int64_t nearest_turn(double a, double target) noexcept {
  return static_cast<std::int64_t>(std::llround((target - a) / kTwoPi));
}

}  // namespace

SpectralParam SpectralParam::from_x(double x) {
  if (!(x > 0.0 && x < std::numbers::pi)) {
    throw Error(ErrorKind::ParamOutOfRange, "spectral parameter x=" + format_double(x) +
                                                " must lie in (0, pi)");
  }
  return SpectralParam{x, 2.0 * std::cos(x), std::sin(x)};
}

SpectralParam SpectralParam::from_energy(double E) {
  if (!(E > -2.0 && E < 2.0)) {
    throw Error(ErrorKind::ParamOutOfRange, "energy E=" + format_double(E) +
                                                " must lie in (-2, 2)");
  }
  const double x = std::acos(E / 2.0);
  return SpectralParam{x, E, std::sin(x)};
}

Eigen::Vector2d transfer_step(double V_n, double E, const Eigen::Vector2d& state) noexcept {
  return {(E - V_n) * state(0) - state(1), state(0)};
}

Eigen::Matrix2d transfer_matrix(double V_n, double E) noexcept {
  Eigen::Matrix2d t;
  t << E - V_n, -1.0, 1.0, 0.0;
  return t;
}

Solution solve_recurrence(const OperatorSpec& spec, const SpectralParam& param,
                          const SolveOptions& options) {
  spec.validate();
  const std::int64_t N = spec.N;
  Solution sol{Eigen::VectorXd(N + 1), Eigen::VectorXd::Zero(N + 1), spec, param};
  double prev = std::sin(std::numbers::pi / 2 - spec.phi);  // exact zero at the double nearest pi/2
  double cur = -std::sin(spec.phi);
  double acc = 0.0;
  sol.u(0) = prev;
  sol.u(1) = cur;
  const double hi = options.renorm_threshold;
  const double lo = 1.0 / options.renorm_threshold;
  for (std::int64_t n = 1; n < N; ++n) {
    const double next = (param.E - spec.potential(n)) * cur - prev;
    prev = cur;
    cur = next;
    const double mag = std::max(std::abs(cur), std::abs(prev));
    if (!std::isfinite(mag) || (!options.renormalize && mag > hi)) {
      throw Error(ErrorKind::Overflow, "solution amplitude left the representable range at n=" +
                                           std::to_string(n + 1));
    }
    if (options.renormalize && (mag > hi || mag < lo)) {
      if (mag == 0.0) {
        throw Error(ErrorKind::DegenerateSolution, "solution vanished at n=" + std::to_string(n));
      }
      acc += std::log(mag);
      cur /= mag;
      prev /= mag;
    }
    sol.u(n + 1) = cur;
    sol.log_scale(n + 1) = acc;
  }
  return sol;
}

double recurrence_residual(const Solution& sol) {
  double worst = 0.0;
  for (std::int64_t n = 1; n < sol.N(); ++n) {
    const double a = sol.in_scale(n - 1, n);
    const double b = sol.u(n);
    const double c = sol.in_scale(n + 1, n);
    const double lhs = (sol.param.E - sol.spec.potential(n)) * b;
    const double scale = std::abs(a) + std::abs(c) + std::abs(lhs);
    if (scale > 0.0) worst = std::max(worst, std::abs(c + a - lhs) / scale);
  }
  return worst;
}

double PruferTrajectory::increment_deviation(std::int64_t n) const noexcept {
  const auto i = static_cast<std::size_t>(n);
  return (angle(n + 1) - angle(n) - param.x) +
         kTwoPi * static_cast<double>(winding[i + 1] - winding[i]);
}

Eigen::VectorXd PruferTrajectory::theta_vector() const {
  Eigen::VectorXd t(R.size());
  t(0) = kNaN;
  for (std::int64_t n = 1; n <= N(); ++n) t(n) = theta(n);
  return t;
}

namespace {

PruferTrajectory empty_trajectory(std::int64_t N, const SpectralParam& param) {
  PruferTrajectory t;
  t.R = Eigen::VectorXd::Constant(N + 1, kNaN);
  t.ln_R = Eigen::VectorXd::Constant(N + 1, kNaN);
  t.log_scale = Eigen::VectorXd::Zero(N + 1);
  t.angle = Eigen::VectorXd::Constant(N + 1, kNaN);
  t.winding.assign(static_cast<std::size_t>(N + 1), 0);
  t.nu = Eigen::VectorXd::Constant(N + 1, kNaN);
  t.param = param;
  return t;
}

}  // namespace

PruferTrajectory to_prufer(const Solution& sol) {
  const std::int64_t N = sol.N();
  const SpectralParam& p = sol.param;
  const double cx = std::cos(p.x);
  PruferTrajectory t = empty_trajectory(N, p);
  t.log_scale = sol.log_scale;
  for (std::int64_t n = 1; n <= N; ++n) {
    const double a = sol.in_scale(n - 1, n);
    const double b = sol.u(n);
    const double wx = b - a * cx;
    const double wy = a * p.sin_x;
    const double r = std::hypot(wx, wy);
    if (!(r > 0.0)) {
      throw Error(ErrorKind::DegenerateSolution,
                  "u(n) = u(n-1) = 0 at n=" + std::to_string(n));
    }
    t.R(n) = r;
    t.ln_R(n) = std::log(r) + sol.log_scale(n);
    const double ang = std::atan2(wy, wx);
    t.angle(n) = ang;
    if (n > 1) {
      const auto i = static_cast<std::size_t>(n);
      t.winding[i] = t.winding[i - 1] + nearest_turn(ang, t.angle(n - 1) + p.x);
    }
    t.nu(n) = p.nu(sol.spec.potential(n));
  }
  return t;
}

PruferStep prufer_step(double theta, double nu, double x) noexcept {
  const double tb = theta + x;
  const double s = std::sin(tb);
  const double c = std::cos(tb);
  const double ratio_sq = 1.0 - nu * std::sin(2.0 * tb) + nu * nu * s * s;
  const double a = std::atan2(s, c - nu * s);
  const double next = a + kTwoPi * static_cast<double>(nearest_turn(a, tb));
  return {ratio_sq, next};
}

PruferTrajectory evolve_prufer(const OperatorSpec& spec, const SpectralParam& param) {
  spec.validate();
  const std::int64_t N = spec.N;
  PruferTrajectory t = empty_trajectory(N, param);
  const double u0 = std::sin(std::numbers::pi / 2 - spec.phi);  // exact zero at the double nearest pi/2
  const double u1 = -std::sin(spec.phi);
  const double wx = u1 - u0 * std::cos(param.x);
  const double wy = u0 * param.sin_x;
  double ln_r = std::log(std::hypot(wx, wy));
  double ang = std::atan2(wy, wx);
  std::int64_t turns = 0;
  for (std::int64_t n = 1; n <= N; ++n) {
    const double v = spec.potential(n);
    t.ln_R(n) = ln_r;
    t.R(n) = std::exp(ln_r);
    t.angle(n) = ang;
    t.winding[static_cast<std::size_t>(n)] = turns;
    t.nu(n) = param.nu(v);
    if (n == N) break;
    const PruferStep step = prufer_step(ang, t.nu(n), param.x);
    ln_r += 0.5 * std::log(step.ratio_sq);
    // Keep the stored angle principal; fold whole turns into the winding.
    const double wrapped = std::remainder(step.theta_next, kTwoPi);
    turns += static_cast<std::int64_t>(std::llround((step.theta_next - wrapped) / kTwoPi));
    ang = wrapped;
  }
  return t;
}

double RecursionResiduals::max() const noexcept {
  return std::max({max_res_efgp0, max_res_efgp1, max_res_efgp2});
}

RecursionResiduals verify_recursions(const Solution& sol, const PruferTrajectory& traj) {
  if (sol.N() != traj.N()) {
    throw Error(ErrorKind::LengthMismatch, "solution has N=" + std::to_string(sol.N()) +
                                               ", trajectory has N=" + std::to_string(traj.N()));
  }
  const double x = traj.param.x;
  const double cx = std::cos(x);
  RecursionResiduals res;
  for (std::int64_t n = 1; n <= traj.N(); ++n) {
    const double a = sol.in_scale(n - 1, n);
    const double b = sol.u(n);
    // R in the scale of index n.
    const double r = traj.R(n) * std::exp(traj.log_scale(n) - sol.log_scale(n));
    const double rhs0 = b * b + a * a - 2.0 * b * a * cx;
    res.max_res_efgp0 =
        std::max(res.max_res_efgp0, std::abs(r * r - rhs0) / (1.0 + r * r + b * b + a * a));
    if (n == traj.N()) break;

    const double nu = traj.nu(n);
    const double tb = traj.theta_bar_reduced(n);
    const double s = std::sin(tb);
    const double f = 1.0 - nu * std::sin(2.0 * tb) + nu * nu * s * s;
    const double q = traj.R(n + 1) / traj.R(n);
    const double ratio = q * q * std::exp(2.0 * (traj.log_scale(n + 1) - traj.log_scale(n)));
    res.max_res_efgp1 = std::max(res.max_res_efgp1, std::abs(ratio - f) / (1.0 + std::abs(f)));

    // cot(theta') = cot(tb) - nu, multiplied through by sin(theta') sin(tb).
    const double tn = traj.angle(n + 1);
    const double r2 = std::sin(tb) * std::cos(tn) - std::sin(tn) * (std::cos(tb) - nu * s);
    res.max_res_efgp2 = std::max(res.max_res_efgp2, std::abs(r2) / (1.0 + std::abs(nu)));
  }
  return res;
}

double definition_residual(const Solution& sol, const PruferTrajectory& traj) {
  if (sol.N() != traj.N()) throw Error(ErrorKind::LengthMismatch, "solution/trajectory length");
  const double cx = std::cos(traj.param.x);
  double worst = 0.0;
  for (std::int64_t n = 1; n <= traj.N(); ++n) {
    const double a = sol.in_scale(n - 1, n);
    const double b = sol.u(n);
    const double r = traj.R(n) * std::exp(traj.log_scale(n) - sol.log_scale(n));
    const double scale = std::abs(a) + std::abs(b) + 1.0;
    const double ec = std::abs(r * std::cos(traj.angle(n)) - (b - a * cx));
    const double es = std::abs(r * std::sin(traj.angle(n)) - a * traj.param.sin_x);
    worst = std::max(worst, std::max(ec, es) / scale);
  }
  return worst;
}

std::vector<AngleViolation> angle_increment_check(const PruferTrajectory& traj,
                                                  const Eigen::VectorXd& nu) {
  if (nu.size() != traj.R.size()) {
    throw Error(ErrorKind::LengthMismatch, "nu sequence does not match the trajectory");
  }
  std::vector<AngleViolation> out;
  for (std::int64_t n = 1; n < traj.N(); ++n) {
    const double bound = std::numbers::pi * std::abs(nu(n));
    if (!(std::abs(nu(n)) < 0.5)) continue;
    const double dev = traj.increment_deviation(n);
    if (std::abs(dev) > bound + kAngleSlack) out.push_back({n, dev, bound});
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const Solution& sol, const PruferTrajectory& traj,
                          const TrajectoryCsvOptions& options) {
  if (sol.N() != traj.N()) throw Error(ErrorKind::LengthMismatch, "solution/trajectory length");
  if (options.stride < 1) throw Error(ErrorKind::InvalidArgument, "CSV stride must be >= 1");
  if (!options.header_comment.empty()) out << "# " << options.header_comment << '\n';
  out << "n,u,R,theta,theta_bar,ln_R\n";
  std::string line;
  for (std::int64_t n = 1; n <= traj.N(); ++n) {
    if ((n - 1) % options.stride != 0 && n != traj.N()) continue;
    line.clear();
    line += std::to_string(n);
    line += ',';
    line += format_double(sol.u(n));
    line += ',';
    line += format_double(traj.R(n));
    line += ',';
    line += format_double(traj.theta(n));
    line += ',';
    line += format_double(traj.theta_bar(n));
    line += ',';
    line += format_double(traj.ln_R(n));
    line += '\n';
    out << line;
  }
}

}  // namespace efgp
