#pragma once

// Eigenvalues of truncated Jacobi matrices (Sturm bisection, inverse
// iteration), decay certificates for candidate embedded eigenvalues, and
// resonant potentials that carry a prescribed embedded eigenvalue.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "efgp/lattice.hpp"
#include "efgp/prufer.hpp"

namespace efgp {

/// Number of eigenvalues of J strictly below E.
///
/// Shifted Sturm recurrence q_1 = d_1 - E, q_k = d_k - E - 1/q_{k-1}; the
/// count is the number of negative q_k. A pivot with |q| below the smallest
/// normal number is replaced by +min(), which leaves an eigenvalue equal to E
/// uncounted.
template <typename Scalar>
std::int64_t sturm_count(const JacobiMatrix<Scalar>& J, Scalar E) {
  const Scalar pivmin = std::numeric_limits<Scalar>::min();
  std::int64_t count = 0;
  Scalar q = Scalar(1);
  for (Eigen::Index k = 0; k < J.size(); ++k) {
    q = J.diagonal(k) - E - (k == 0 ? Scalar(0) : Scalar(1) / q);
    using std::abs;
    if (abs(q) < pivmin) q = pivmin;
    if (q < Scalar(0)) ++count;
  }
  return count;
}

/// All eigenvalues of J in the open window (lo, hi), ascending, each located
/// by bisection on sturm_count to a bracket of width <= tol.
template <typename Scalar>
std::vector<Scalar> eigenvalues_in_window(const JacobiMatrix<Scalar>& J, Scalar lo, Scalar hi,
                                          Scalar tol) {
  using std::abs;
  using std::max;
  if (!(lo < hi)) throw Error(ErrorKind::EmptyRange, "eigenvalue window is empty");
  const Scalar resolution = Scalar(4) * std::numeric_limits<Scalar>::epsilon() *
                            max({abs(lo), abs(hi), J.norm_estimate(), Scalar(1)});
  if (!(tol > Scalar(0)) || tol < resolution) {
    throw Error(ErrorKind::TolTooSmall, "bisection tolerance below machine resolution");
  }
  const Scalar a = max(lo, J.lower_bound());
  const Scalar b = std::min(hi, J.upper_bound());
  std::vector<Scalar> out;
  if (!(a < b)) return out;
  const std::int64_t first = sturm_count(J, a);
  const std::int64_t last = sturm_count(J, b);
  out.reserve(static_cast<std::size_t>(last - first));
  Scalar floor = a;
  for (std::int64_t i = first; i < last; ++i) {
    // The i-th eigenvalue (0-based) is the smallest E with count(E) > i.
    Scalar left = floor;
    Scalar right = b;
    while (right - left > tol) {
      const Scalar mid = left + (right - left) / Scalar(2);
      if (mid <= left || mid >= right) break;
      if (sturm_count(J, mid) > i) {
        right = mid;
      } else {
        left = mid;
      }
    }
    out.push_back(left + (right - left) / Scalar(2));
    floor = left;
  }
  return out;
}

namespace detail {

// LU factorization with partial pivoting of a tridiagonal matrix with unit
// off-diagonals shifted by -shift. Same layout as LAPACK ?gttrf.
template <typename Scalar>
struct TridiagonalLU {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vector dl, d, du, du2;
  std::vector<char> swapped;

  TridiagonalLU(const JacobiMatrix<Scalar>& J, Scalar shift, Scalar tiny) {
    const Eigen::Index n = J.size();
    d = J.diagonal.array() - shift;
    dl = Vector::Ones(std::max<Eigen::Index>(n - 1, 0));
    du = dl;
    du2 = Vector::Zero(std::max<Eigen::Index>(n - 2, 0));
    swapped.assign(static_cast<std::size_t>(n), 0);
    using std::abs;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (abs(d(i)) >= abs(dl(i))) {
        if (abs(d(i)) < tiny) d(i) = tiny;
        const Scalar f = dl(i) / d(i);
        dl(i) = f;
        d(i + 1) -= f * du(i);
      } else {
        const Scalar f = d(i) / dl(i);
        d(i) = dl(i);
        dl(i) = f;
        const Scalar tmp = du(i);
        du(i) = d(i + 1);
        d(i + 1) = tmp - f * d(i + 1);
        if (i + 2 < n) {
          du2(i) = du(i + 1);
          du(i + 1) = -f * du(i + 1);
        }
        swapped[static_cast<std::size_t>(i)] = 1;
      }
    }
    if (n > 0 && abs(d(n - 1)) < tiny) d(n - 1) = tiny;
  }

  Vector solve(Vector b) const {
    const Eigen::Index n = d.size();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (swapped[static_cast<std::size_t>(i)]) {
        const Scalar tmp = b(i);
        b(i) = b(i + 1);
        b(i + 1) = tmp - dl(i) * b(i);
      } else {
        b(i + 1) -= dl(i) * b(i);
      }
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      Scalar s = b(i);
      if (i + 1 < n) s -= du(i) * b(i + 1);
      if (i + 2 < n) s -= du2(i) * b(i + 2);
      b(i) = s / d(i);
    }
    return b;
  }
};

}  // namespace detail

inline constexpr int kInverseIterationCap = 16;

/// Unit eigenvector for the eigenvalue of J nearest to E by shifted inverse
/// iteration (at most kInverseIterationCap solves). Sign fixed so the first
/// significant component is positive.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigenvector(const JacobiMatrix<Scalar>& J, Scalar E,
                                                     Scalar residual_tol = Scalar(1e-10)) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using std::abs;
  const Eigen::Index n = J.size();
  const Scalar norm = J.norm_estimate();
  const detail::TridiagonalLU<Scalar> lu(J, E, std::numeric_limits<Scalar>::epsilon() * norm);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Scalar(1) + Scalar(i % 7) / Scalar(10);
  v.normalize();
  for (int it = 0; it < kInverseIterationCap; ++it) {
    v = lu.solve(v);
    const Scalar vn = v.norm();
    if (!(vn > Scalar(0)) || !std::isfinite(static_cast<double>(vn))) break;
    v /= vn;
    const Scalar res = (J.apply(v) - E * v).norm();
    if (res <= residual_tol * norm) {
      const Scalar peak = v.cwiseAbs().maxCoeff();
      for (Eigen::Index i = 0; i < n; ++i) {
        if (abs(v(i)) > Scalar(1e-8) * peak) {
          if (v(i) < Scalar(0)) v = -v;
          break;
        }
      }
      return v;
    }
  }
  throw Error(ErrorKind::NoConvergence, "inverse iteration did not converge");
}

struct Certificate {
  std::int64_t N_star = 0;
  double RN_sq = 0.0;
  bool passed = false;
};

struct CheckpointValue {
  std::int64_t N;
  double RN_sq;  // (R(N) / R(1))^2
};

struct EigenvalueRecord {
  double E = 0.0;
  std::optional<double> x;  // arccos(E/2) when E in (-2, 2)
  double weight = 0.0;      // 1 - E^2/4
  Certificate certificate;
  std::optional<double> decay_exponent;  // minus the slope of ln R against ln n
  std::vector<CheckpointValue> checkpoints;
};

// Uncertified record for a raw eigenvalue.
EigenvalueRecord make_record(double E);

class EigenvalueSet {
 public:
  static constexpr double kDefaultTolerance = 1e-8;

  EigenvalueSet() = default;
  // Sorts ascending and merges records closer than tolerance, keeping the
  // stronger certificate.
  explicit EigenvalueSet(std::vector<EigenvalueRecord> records,
                         double tolerance = kDefaultTolerance);

  const std::vector<EigenvalueRecord>& records() const noexcept { return records_; }
  double tolerance() const noexcept { return tolerance_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

 private:
  std::vector<EigenvalueRecord> records_;
  double tolerance_ = kDefaultTolerance;
};

// 10^2, 10^3, ... below N, then N itself.
std::vector<std::int64_t> default_checkpoints(std::int64_t N);

/// Decay exponent -d ln R / d ln n by least squares over samples spaced
/// uniformly in ln n across [n_lo, n_hi].
double fit_decay_exponent(const PruferTrajectory& traj, std::int64_t n_lo, std::int64_t n_hi);

/// Certificate (R(N*)/R(1))^2 <= 1/N* evaluated on an existing trajectory.
/// N_star is the largest passing checkpoint, or the last checkpoint if none
/// passes. The decay exponent is fitted over the upper half of [1, N] in
/// ln n, i.e. [sqrt(N), N].
EigenvalueRecord classify_trajectory(const PruferTrajectory& traj,
                                     const std::vector<std::int64_t>& checkpoints);

EigenvalueRecord classify_point_spectrum(const OperatorSpec& spec, double E,
                                         const std::vector<std::int64_t>& checkpoints);

struct ResonanceOptions {
  int coarse_points = 64;
  int refine_iterations = 40;
  std::int64_t scan_length = 1 << 16;  // trajectory length used to score each phase
  std::int64_t backward_factor = 16;   // backward sweep starts at backward_factor * N
};

struct ResonanceConstruction {
  Potential potential;  // c sin(2 x n + delta + pi) / n == -c sin(2 x n + delta) / n
  double phi = 0.0;
  double E = 0.0;
  double x = 0.0;
  double c = 0.0;
  double delta = 0.0;
  double predicted_exponent = 0.0;  // c / (4 sin x)
  double fitted_exponent = 0.0;     // over [sqrt(N), N]
  std::int64_t N = 0;
};

/// Growth exponent of a generic solution of the recurrence at E = 2 cos x
/// under V(n) = -c sin(2 x n + delta) / n, fitted over [sqrt(L), L].
double resonant_growth_exponent(double x, double c, double delta, std::int64_t length);

/// (u(0), u(1)) of the solution that decays forward, found by sweeping the
/// recurrence backward from n_start with terminal data (u(n_start+1), u(n_start)) = (0, 1).
Eigen::Vector2d backward_boundary_values(const Potential& potential, double E,
                                         std::int64_t n_start);

ResonanceConstruction resonance_construct(double x, double c, std::int64_t N,
                                          const ResonanceOptions& options = {});

}  // namespace efgp
