#pragma once

// Three-term recurrence u(n+1) = (E - V(n)) u(n) - u(n-1) and its EFGP
// (Pruefer) amplitude/angle form, for energies E = 2 cos x inside (-2, 2).
//
// Amplitudes may grow or decay polynomially over long runs, so solutions are
// stored block-scaled: the true value at index n is u(n) * exp(log_scale(n)).

#include <cstdint>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "efgp/lattice.hpp"

namespace efgp {

struct SpectralParam {
  double x = std::numbers::pi / 2;
  double E = 0.0;
  double sin_x = 1.0;

  static SpectralParam from_x(double x);
  static SpectralParam from_energy(double E);

  double nu(double V) const noexcept { return V / sin_x; }
};

// (u(n), u(n-1)) -> (u(n+1), u(n)).
Eigen::Vector2d transfer_step(double V_n, double E, const Eigen::Vector2d& state) noexcept;

// The one-step map as a matrix; its determinant is 1.
Eigen::Matrix2d transfer_matrix(double V_n, double E) noexcept;

struct SolveOptions {
  bool renormalize = true;
  double renorm_threshold = 1e100;
};

struct Solution {
  Eigen::VectorXd u;          // indices 0..N, block-scaled
  Eigen::VectorXd log_scale;  // indices 0..N
  OperatorSpec spec;
  SpectralParam param;

  std::int64_t N() const noexcept { return static_cast<std::int64_t>(u.size()) - 1; }

  // u(k) expressed in the scale of index ref.
  double in_scale(std::int64_t k, std::int64_t ref) const {
    return u(k) * std::exp(log_scale(k) - log_scale(ref));
  }
};

/// Solution with u(0) = cos(phi), u(1) = -sin(phi), which satisfies the
/// boundary condition identically, evolved to index N.
Solution solve_recurrence(const OperatorSpec& spec, const SpectralParam& param,
                          const SolveOptions& options = {});

// Largest relative residual of the recurrence over 1 <= n <= N-1.
double recurrence_residual(const Solution& sol);

/// EFGP variables for n = 1..N. Index 0 of every vector is unused (NaN).
///
/// The lifted angle is kept as a principal value plus an integer winding
/// count, so trigonometric evaluations stay accurate at large n.
struct PruferTrajectory {
  Eigen::VectorXd R;          // block-scaled like Solution::u
  Eigen::VectorXd ln_R;       // exact log amplitude
  Eigen::VectorXd log_scale;
  Eigen::VectorXd angle;      // principal value in (-pi, pi]
  std::vector<std::int64_t> winding;
  Eigen::VectorXd nu;         // V(n) / sin x
  SpectralParam param;

  std::int64_t N() const noexcept { return static_cast<std::int64_t>(R.size()) - 1; }

  double theta(std::int64_t n) const noexcept {
    return angle(n) + 2.0 * std::numbers::pi * static_cast<double>(winding[static_cast<std::size_t>(n)]);
  }
  double theta_bar(std::int64_t n) const noexcept { return theta(n) + param.x; }

  // theta_bar(n) reduced modulo 2 pi up to the principal-value rounding.
  double theta_bar_reduced(std::int64_t n) const noexcept { return angle(n) + param.x; }

  // theta(n+1) - theta(n) - x computed without large-argument cancellation.
  double increment_deviation(std::int64_t n) const noexcept;

  Eigen::VectorXd theta_vector() const;
};

PruferTrajectory to_prufer(const Solution& sol);

struct PruferStep {
  double ratio_sq;
  double theta_next;
};

/// One EFGP step: ratio_sq = R(n+1)^2 / R(n)^2 and the angle theta(n+1) with
/// cot(theta(n+1)) = cot(theta + x) - nu, lifted to the representative nearest
/// theta + x.
PruferStep prufer_step(double theta, double nu, double x) noexcept;

/// Integrates (ln R, theta) from (u(0), u(1)) by prufer_step alone, without
/// touching the recurrence. R is stored unscaled (log_scale = 0).
PruferTrajectory evolve_prufer(const OperatorSpec& spec, const SpectralParam& param);

struct RecursionResiduals {
  double max_res_efgp0 = 0.0;
  double max_res_efgp1 = 0.0;
  double max_res_efgp2 = 0.0;

  double max() const noexcept;
};

RecursionResiduals verify_recursions(const Solution& sol, const PruferTrajectory& traj);

// max_n |R cos(theta) - (u(n) - u(n-1) cos x)| and the sine counterpart,
// relative to |u(n)| + |u(n-1)| + 1.
double definition_residual(const Solution& sol, const PruferTrajectory& traj);

struct AngleViolation {
  std::int64_t n;
  double deviation;  // theta(n+1) - theta(n) - x
  double bound;      // pi |nu(n)|
};

// Absolute rounding allowance added to the pi |nu| bound.
inline constexpr double kAngleSlack = 1e-12;

/// Every n with |nu(n)| < 1/2 and |theta(n+1) - theta(n) - x| > pi |nu(n)|.
std::vector<AngleViolation> angle_increment_check(const PruferTrajectory& traj,
                                                  const Eigen::VectorXd& nu);

struct TrajectoryCsvOptions {
  std::int64_t stride = 1;
  std::string header_comment;  // written as "# <comment>" when non-empty
};

// Columns n,u,R,theta,theta_bar,ln_R. u and R are in the block scale of
// their row; ln_R is exact.
void write_trajectory_csv(std::ostream& out, const Solution& sol, const PruferTrajectory& traj,
                          const TrajectoryCsvOptions& options = {});

}  // namespace efgp
