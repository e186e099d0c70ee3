#include "efgp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "efgp/numeric.hpp"

namespace efgp {

double theorem_weight(double E) noexcept { return 1.0 - E * E / 4.0; }

double theorem_bound(double C) {
  if (!(C >= 0.0)) throw Error(ErrorKind::NegativeConstant, "envelope constant must be >= 0");
  return (C * C + 2.0) / 2.0;
}

BoundReport check_theorem(const EigenvalueSet& set, double C, bool certified_only) {
  BoundReport rep;
  rep.rhs = theorem_bound(C);
  rep.C_used = C;
  CompensatedSum lhs;
  for (const auto& r : set.records()) {
    if (certified_only && !r.certificate.passed) continue;
    lhs.add(theorem_weight(r.E));
    rep.records.push_back(r);
  }
  rep.lhs = lhs.value();
  rep.records_used = static_cast<std::int64_t>(rep.records.size());
  rep.margin = rep.rhs - rep.lhs;
  rep.satisfied = rep.lhs <= rep.rhs;
  return rep;
}

double DyadicProfile::last_growth() const noexcept {
  if (sup.size() < 2) return 0.0;
  return sup[sup.size() - 1] - sup[sup.size() - 2];
}

double DyadicProfile::sup_up_to(std::int64_t n_end) const {
  for (std::size_t i = 0; i < window_end.size(); ++i) {
    if (window_end[i] == n_end) return sup[i];
  }
  throw Error(ErrorKind::InvalidArgument, "no dyadic window ends at " + std::to_string(n_end));
}

DyadicProfile dyadic_profile(const std::vector<double>& abs_values, std::int64_t first) {
  DyadicProfile p;
  if (abs_values.empty()) return p;
  const std::int64_t last = first + static_cast<std::int64_t>(abs_values.size()) - 1;
  double running = 0.0;
  std::int64_t end = 1;
  while (end < first) end *= 2;
  for (std::int64_t n = first; n <= last; ++n) {
    running = std::max(running, abs_values[static_cast<std::size_t>(n - first)]);
    if (n == end || n == last) {
      p.window_end.push_back(n);
      p.sup.push_back(running);
      if (n == end) end *= 2;
    }
  }
  return p;
}

OscSumSeries oscillatory_partial_sums(double alpha, const std::function<double(std::int64_t)>& gamma,
                                      std::int64_t N_max) {
  if (N_max < 1) throw Error(ErrorKind::InvalidArgument, "N_max must be >= 1");
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (std::abs(std::remainder(alpha, kTwoPi)) < 1e-12) {
    throw Error(ErrorKind::ResonantFrequency, "alpha is a multiple of 2 pi; the series diverges");
  }
  OscSumSeries s;
  s.alpha = alpha;
  const auto n_max = static_cast<std::size_t>(N_max);
  s.gamma.resize(n_max + 1);
  for (std::size_t n = 1; n <= n_max + 1; ++n) s.gamma[n - 1] = gamma(static_cast<std::int64_t>(n));
  s.partials.reserve(n_max);
  s.terms.reserve(n_max);
  CompensatedComplexSum acc;
  std::vector<double> mods;
  mods.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double dn = static_cast<double>(n);
    const double phase = alpha * dn + s.gamma[n - 1];
    const std::complex<double> term(std::cos(phase) / dn, std::sin(phase) / dn);
    acc.add(term);
    s.terms.push_back(term);
    s.partials.push_back(acc.value());
    mods.push_back(std::abs(s.partials.back()));
    s.sup_abs = std::max(s.sup_abs, mods.back());
    s.hypothesis_max_n_dgamma =
        std::max(s.hypothesis_max_n_dgamma, dn * std::abs(s.gamma[n] - s.gamma[n - 1]));
  }
  s.gamma.pop_back();
  s.profile = dyadic_profile(mods);
  return s;
}

std::int64_t small_coupling_onset(double C, double min_sin_x) {
  if (!(min_sin_x > 0.0)) throw Error(ErrorKind::ParamOutOfRange, "min sin x must be positive");
  if (!(C >= 0.0)) throw Error(ErrorKind::NegativeConstant, "envelope constant must be >= 0");
  // C / (a n) < 1/2  <=>  n > 2C / a
  return static_cast<std::int64_t>(std::floor(2.0 * C / min_sin_x)) + 1;
}

PruferSumDiagnostics prufer_sum_diagnostics(const std::vector<PruferTrajectory>& trajs,
                                            std::int64_t N_max, const PruferSumOptions& options) {
  const std::size_t m = trajs.size();
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "no trajectories");
  const std::int64_t n0 = options.n0;
  if (n0 < 1 || n0 > N_max) throw Error(ErrorKind::InvalidArgument, "n0 outside [1, N_max]");
  for (const auto& t : trajs) {
    if (t.N() < N_max) {
      throw Error(ErrorKind::LengthMismatch, "trajectory of length " + std::to_string(t.N()) +
                                                 " is shorter than N_max=" + std::to_string(N_max));
    }
  }
  const double pi = std::numbers::pi;
  const double tol = options.degeneracy_tol;
  for (std::size_t j = 0; j < m; ++j) {
    const double xj = trajs[j].param.x;
    if (std::abs(std::remainder(2.0 * xj, pi)) <= tol) {
      throw Error(ErrorKind::DegenerateFrequencies, "2 x_" + std::to_string(j) + " is a multiple of pi");
    }
    for (std::size_t k = 0; k < j; ++k) {
      const double xk = trajs[k].param.x;
      if (std::abs(std::remainder(xj - xk, pi)) <= tol || std::abs(std::remainder(xj + xk, pi)) <= tol) {
        throw Error(ErrorKind::DegenerateFrequencies,
                    "x_" + std::to_string(k) + " +/- x_" + std::to_string(j) + " is a multiple of pi");
      }
    }
  }

  const auto len = static_cast<std::size_t>(N_max - n0 + 1);
  std::vector<std::vector<double>> s2(m, std::vector<double>(len));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < len; ++i) {
      s2[j][i] = std::sin(2.0 * trajs[j].theta_bar_reduced(n0 + static_cast<std::int64_t>(i)));
    }
  }

  PruferSumDiagnostics d;
  d.n0 = n0;
  d.cross = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  d.diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  d.cross_profiles.assign(m, std::vector<DyadicProfile>(m));
  d.diag_profiles.resize(m);
  std::vector<double> mods(len);
  for (std::size_t j = 0; j < m; ++j) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < len; ++i) {
      const double dn = static_cast<double>(n0 + static_cast<std::int64_t>(i));
      acc.add(s2[j][i] * s2[j][i] / dn);
      mods[i] = std::abs(0.5 * std::log(dn) - acc.value());
    }
    d.diag_profiles[j] = dyadic_profile(mods, n0);
    d.diag(static_cast<Eigen::Index>(j)) = d.diag_profiles[j].sup.back();
    for (std::size_t k = j + 1; k < m; ++k) {
      CompensatedSum cross;
      for (std::size_t i = 0; i < len; ++i) {
        const double dn = static_cast<double>(n0 + static_cast<std::int64_t>(i));
        cross.add(s2[j][i] * s2[k][i] / dn);
        mods[i] = std::abs(cross.value());
      }
      d.cross_profiles[j][k] = dyadic_profile(mods, n0);
      d.cross_profiles[k][j] = d.cross_profiles[j][k];
      const double sup = d.cross_profiles[j][k].sup.back();
      d.cross(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = sup;
      d.cross(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = sup;
    }
  }

  d.hypothesis_ok = true;
  for (const auto& t : trajs) {
    for (std::int64_t n = n0; n < N_max && d.hypothesis_ok; ++n) {
      if (!(std::abs(t.nu(n)) < 0.5)) d.hypothesis_ok = false;
    }
    for (const auto& v : angle_increment_check(t, t.nu)) {
      if (v.n >= n0 && v.n < N_max) d.hypothesis_ok = false;
    }
  }
  return d;
}

WeightedVector WeightedVector::zeros(std::int64_t n0, std::int64_t N) {
  if (n0 < 1 || N <= n0) throw Error(ErrorKind::EmptyRange, "weighted index range is empty");
  return WeightedVector{n0, N, Eigen::VectorXd::Zero(N - n0)};
}

double weighted_dot(const WeightedVector& b, const WeightedVector& c) {
  if (b.n0 != c.n0 || b.N != c.N || b.entries.size() != c.entries.size()) {
    throw Error(ErrorKind::RangeMismatch, "weighted vectors live on different index ranges");
  }
  const Eigen::ArrayXd n = Eigen::ArrayXd::LinSpaced(b.N - b.n0, static_cast<double>(b.n0),
                                                      static_cast<double>(b.N - 1));
  return (n * b.entries.array() * c.entries.array()).sum();
}

double weighted_norm(const WeightedVector& b) { return std::sqrt(weighted_dot(b, b)); }

WeightedVector weighted_normalized(const WeightedVector& b) {
  const double nrm = weighted_norm(b);
  if (!(nrm > 0.0)) throw Error(ErrorKind::InvalidArgument, "cannot normalize the zero vector");
  WeightedVector out = b;
  out.entries /= nrm;
  return out;
}

AlmostOrthogonality almost_orthogonality_check(const WeightedVector& g,
                                               const std::vector<WeightedVector>& e) {
  if (e.empty()) throw Error(ErrorKind::InvalidArgument, "no vectors supplied");
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (std::abs(weighted_norm(e[j]) - 1.0) > 1e-12) {
      throw Error(ErrorKind::NotUnitVectors, "vector " + std::to_string(j) + " is not unit length");
    }
  }
  AlmostOrthogonality r;
  for (std::size_t j = 0; j < e.size(); ++j) {
    for (std::size_t k = 0; k < j; ++k) r.beta = std::max(r.beta, std::abs(weighted_dot(e[j], e[k])));
  }
  const double m = static_cast<double>(e.size());
  if (!(r.beta < 1.0 / m)) {
    throw Error(ErrorKind::PreconditionFailed,
                "beta=" + format_double(r.beta) + " is not below 1/m=" + format_double(1.0 / m));
  }
  for (const auto& ej : e) {
    const double p = weighted_dot(g, ej);
    r.lhs += p * p;
  }
  r.rhs = (1.0 + r.beta * m) * weighted_dot(g, g);
  r.holds = r.lhs <= r.rhs;
  return r;
}

std::pair<bool, bool> log_bound_check(double x, double eps) {
  if (!(x > 0.0 && x < eps)) {
    throw Error(ErrorKind::DomainError, "x=" + format_double(x) + " outside (0, eps)");
  }
  if (!(eps < 1.0)) throw Error(ErrorKind::DomainError, "eps must be < 1 for ln(1 - x)");
  return {std::log1p(x) >= x / (1.0 + eps), std::log1p(-x) >= -x / (1.0 - eps)};
}

}  // namespace efgp
