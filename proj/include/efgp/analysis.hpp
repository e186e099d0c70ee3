#pragma once

// Quantitative diagnostics for the eigenvalue-sum bound
//   sum_j (1 - E_j^2/4) <= (C^2 + 2) / 2
// and the oscillatory-sum and almost-orthogonality estimates behind it.

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "efgp/prufer.hpp"
#include "efgp/spectral.hpp"

namespace efgp {

double theorem_weight(double E) noexcept;
double theorem_bound(double C);

struct BoundReport {
  double lhs = 0.0;
  double rhs = 1.0;
  double C_used = 0.0;
  bool satisfied = true;
  double margin = 1.0;
  std::int64_t records_used = 0;
  std::vector<EigenvalueRecord> records;  // the records that entered lhs
};

BoundReport check_theorem(const EigenvalueSet& set, double C, bool certified_only = true);

// Stabilization threshold for the dyadic boundedness test.
inline constexpr double kDefaultStabilization = 0.05;

/// Running supremum of |a_N| over windows N <= 2^k, k = 0, 1, ..., with the
/// final window clipped to the series length.
struct DyadicProfile {
  std::vector<std::int64_t> window_end;
  std::vector<double> sup;

  // Growth of the supremum between the last two windows.
  double last_growth() const noexcept;
  bool stabilized(double threshold = kDefaultStabilization) const noexcept {
    return last_growth() < threshold;
  }
  // Supremum over N <= n_end (n_end must be a window end or the series end).
  double sup_up_to(std::int64_t n_end) const;
};

// Builds the profile of |values[i]| where values[i] belongs to index first + i.
DyadicProfile dyadic_profile(const std::vector<double>& abs_values, std::int64_t first = 1);

struct OscSumSeries {
  double alpha = 0.0;
  std::vector<double> gamma;                  // gamma[n-1] = gamma_n
  std::vector<std::complex<double>> partials; // partials[N-1] = S_N
  std::vector<std::complex<double>> terms;    // terms[N-1] = e^{i(alpha N + gamma_N)} / N
  double sup_abs = 0.0;
  double hypothesis_max_n_dgamma = 0.0;       // max_n n |gamma_{n+1} - gamma_n|
  DyadicProfile profile;
};

/// S_N = sum_{n<=N} e^{i(alpha n + gamma_n)} / n for N = 1..N_max, accumulated in
/// ascending n with compensation.
OscSumSeries oscillatory_partial_sums(double alpha, const std::function<double(std::int64_t)>& gamma,
                                      std::int64_t N_max);

struct PruferSumOptions {
  std::int64_t n0 = 1;  // first summation index
  double degeneracy_tol = 1e-9;
};

struct PruferSumDiagnostics {
  Eigen::MatrixXd cross;   // sup_N |sum_{n0<=n<=N} sin 2tb_j sin 2tb_k / n|, j != k
  Eigen::VectorXd diag;    // sup_N |ln N / 2 - sum_{n0<=n<=N} sin^2 2tb_j / n|
  std::vector<std::vector<DyadicProfile>> cross_profiles;
  std::vector<DyadicProfile> diag_profiles;
  bool hypothesis_ok = false;
  std::int64_t n0 = 1;
};

/// First n with C / (a n) < 1/2, where a = min_j sin x_j.
std::int64_t small_coupling_onset(double C, double min_sin_x);

PruferSumDiagnostics prufer_sum_diagnostics(const std::vector<PruferTrajectory>& trajs,
                                            std::int64_t N_max,
                                            const PruferSumOptions& options = {});

/// Element of l^2(n0, ..., N-1) with inner product sum_n n b(n) c(n).
struct WeightedVector {
  std::int64_t n0 = 1;
  std::int64_t N = 2;
  Eigen::VectorXd entries;  // entries(i) is b(n0 + i)

  static WeightedVector zeros(std::int64_t n0, std::int64_t N);
  double& at(std::int64_t n) { return entries(n - n0); }
  double at(std::int64_t n) const { return entries(n - n0); }
};

double weighted_dot(const WeightedVector& b, const WeightedVector& c);
double weighted_norm(const WeightedVector& b);
WeightedVector weighted_normalized(const WeightedVector& b);

struct AlmostOrthogonality {
  double beta = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// sum_j <g, e_j>^2 <= (1 + beta m) ||g||^2 for m unit vectors with
/// beta = max_{k != j} |<e_k, e_j>| < 1/m.
AlmostOrthogonality almost_orthogonality_check(const WeightedVector& g,
                                               const std::vector<WeightedVector>& e);

/// (ln(1+x) >= x/(1+eps), ln(1-x) >= -x/(1-eps)) for 0 < x < eps < 1.
std::pair<bool, bool> log_bound_check(double x, double eps);

}  // namespace efgp
