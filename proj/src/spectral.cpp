#include "efgp/spectral.hpp"

#include <numbers>

#include "efgp/numeric.hpp"

namespace efgp {

EigenvalueRecord make_record(double E) {
  EigenvalueRecord r;
  r.E = E;
  if (E > -2.0 && E < 2.0) r.x = std::acos(E / 2.0);
  r.weight = 1.0 - E * E / 4.0;
  return r;
}

namespace {

// Larger is stronger: passed beats failed, then deeper below 1/N.
double certificate_strength(const Certificate& c) {
  const double depth = c.N_star > 0 && c.RN_sq > 0.0
                           ? -std::log(c.RN_sq * static_cast<double>(c.N_star))
                           : -std::numeric_limits<double>::infinity();
  return (c.passed ? 1e6 : 0.0) + depth;
}

}  // namespace

EigenvalueSet::EigenvalueSet(std::vector<EigenvalueRecord> records, double tolerance)
    : tolerance_(tolerance) {
  if (!(tolerance >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative distinctness tolerance");
  std::stable_sort(records.begin(), records.end(),
                   [](const auto& a, const auto& b) { return a.E < b.E; });
  for (auto& r : records) {
    if (!records_.empty() && r.E - records_.back().E <= tolerance_) {
      if (certificate_strength(r.certificate) > certificate_strength(records_.back().certificate)) {
        records_.back() = std::move(r);
      }
      continue;
    }
    records_.push_back(std::move(r));
  }
}

std::vector<std::int64_t> default_checkpoints(std::int64_t N) {
  std::vector<std::int64_t> out;
  for (std::int64_t c = 100; c < N; c *= 10) out.push_back(c);
  out.push_back(N);
  return out;
}

namespace {

constexpr int kFitSamples = 1024;

// Distinct integers spaced uniformly in ln n over [n_lo, n_hi].
std::vector<std::int64_t> log_spaced_indices(std::int64_t n_lo, std::int64_t n_hi) {
  const double a = std::log(static_cast<double>(n_lo));
  const double b = std::log(static_cast<double>(n_hi));
  std::vector<std::int64_t> out;
  for (int k = 0; k < kFitSamples; ++k) {
    const auto n = static_cast<std::int64_t>(std::llround(std::exp(a + (b - a) * k / (kFitSamples - 1))));
    const std::int64_t nn = std::clamp(n, n_lo, n_hi);
    if (out.empty() || nn > out.back()) out.push_back(nn);
  }
  return out;
}

// Slope of ys against ln(ns).
double log_slope(const std::vector<std::int64_t>& ns, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto m = static_cast<double>(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double lx = std::log(static_cast<double>(ns[i]));
    sx += lx;
    sy += ys[i];
    sxx += lx * lx;
    sxy += lx * ys[i];
  }
  const double denom = m * sxx - sx * sx;
  if (ns.size() < 2 || denom <= 0.0) {
    throw Error(ErrorKind::EmptyRange, "decay fit needs two sample points");
  }
  return (m * sxy - sx * sy) / denom;
}

}  // namespace

double fit_decay_exponent(const PruferTrajectory& traj, std::int64_t n_lo, std::int64_t n_hi) {
  if (n_lo < 1 || n_hi > traj.N() || n_hi <= n_lo) {
    throw Error(ErrorKind::EmptyRange, "decay fit range [" + std::to_string(n_lo) + ", " +
                                           std::to_string(n_hi) + "] is invalid");
  }
  const auto ns = log_spaced_indices(n_lo, n_hi);
  std::vector<double> ys;
  ys.reserve(ns.size());
  for (auto n : ns) ys.push_back(traj.ln_R(n));
  return -log_slope(ns, ys);
}

EigenvalueRecord classify_trajectory(const PruferTrajectory& traj,
                                     const std::vector<std::int64_t>& checkpoints) {
  if (checkpoints.empty()) throw Error(ErrorKind::ParamOutOfRange, "no checkpoints given");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 2 || checkpoints[i] > traj.N() ||
        (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
      throw Error(ErrorKind::ParamOutOfRange,
                  "checkpoints must be strictly increasing within [2, " +
                      std::to_string(traj.N()) + "]");
    }
  }
  EigenvalueRecord rec = make_record(traj.param.E);
  rec.x = traj.param.x;
  const double ln_r1 = traj.ln_R(1);
  for (std::int64_t cp : checkpoints) {
    const double rn_sq = std::exp(2.0 * (traj.ln_R(cp) - ln_r1));
    rec.checkpoints.push_back({cp, rn_sq});
  }
  rec.certificate = {rec.checkpoints.back().N, rec.checkpoints.back().RN_sq, false};
  for (auto it = rec.checkpoints.rbegin(); it != rec.checkpoints.rend(); ++it) {
    if (it->RN_sq <= 1.0 / static_cast<double>(it->N)) {
      rec.certificate = {it->N, it->RN_sq, true};
      break;
    }
  }
  const std::int64_t N = traj.N();
  const auto lo = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(N))));
  if (N >= 4 && lo < N) rec.decay_exponent = fit_decay_exponent(traj, std::max<std::int64_t>(lo, 1), N);
  return rec;
}

EigenvalueRecord classify_point_spectrum(const OperatorSpec& spec, double E,
                                         const std::vector<std::int64_t>& checkpoints) {
  const SpectralParam param = SpectralParam::from_energy(E);
  const Solution sol = solve_recurrence(spec, param);
  return classify_trajectory(to_prufer(sol), checkpoints);
}

namespace {

Potential resonant_potential(double x, double c, double delta) {
  PotentialParams p;
  p.amplitude = c;
  p.frequency = 2.0 * x;
  p.phase = std::fmod(delta + std::numbers::pi, 2.0 * std::numbers::pi);
  return make_potential(PotentialFamily::Resonant, p);
}

}  // namespace

double resonant_growth_exponent(double x, double c, double delta, std::int64_t length) {
  const SpectralParam param = SpectralParam::from_x(x);
  const Potential v = resonant_potential(x, c, delta);
  const auto lo = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(length))));
  const auto ns = log_spaced_indices(std::max<std::int64_t>(lo, 1), length);
  std::vector<double> ys;
  ys.reserve(ns.size());
  const double cx = std::cos(x);
  double prev = 0.0;  // u(0), Dirichlet start
  double cur = 1.0;   // u(1)
  double acc = 0.0;
  std::size_t next_sample = 0;
  for (std::int64_t n = 1; n <= length && next_sample < ns.size(); ++n) {
    if (n == ns[next_sample]) {
      ys.push_back(0.5 * std::log(cur * cur + prev * prev - 2.0 * cur * prev * cx) + acc);
      ++next_sample;
    }
    const double nxt = (param.E - v(n)) * cur - prev;
    prev = cur;
    cur = nxt;
    const double mag = std::max(std::abs(cur), std::abs(prev));
    if (mag > 1e100) {
      acc += std::log(mag);
      cur /= mag;
      prev /= mag;
    }
  }
  return log_slope(ns, ys);
}

Eigen::Vector2d backward_boundary_values(const Potential& potential, double E,
                                         std::int64_t n_start) {
  double next = 0.0;  // u(n+1)
  double cur = 1.0;   // u(n)
  for (std::int64_t n = n_start; n >= 1; --n) {
    const double prev = (E - potential(n)) * cur - next;
    next = cur;
    cur = prev;
    const double mag = std::max(std::abs(cur), std::abs(next));
    if (mag > 1e100 || mag < 1e-100) {
      if (mag == 0.0) break;
      cur /= mag;
      next /= mag;
    }
  }
  return {cur, next};
}

ResonanceConstruction resonance_construct(double x, double c, std::int64_t N,
                                          const ResonanceOptions& options) {
  const SpectralParam param = SpectralParam::from_x(x);
  if (!(c > 2.0 * param.sin_x)) {
    throw Error(ErrorKind::SubcriticalAmplitude,
                "amplitude c=" + format_double(c) + " must exceed 2 sin x=" +
                    format_double(2.0 * param.sin_x));
  }
  if (N < 16) throw Error(ErrorKind::InvalidArgument, "construction length N must be >= 16");
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const std::int64_t scan_len = std::min(N, options.scan_length);
  auto score = [&](double delta) { return resonant_growth_exponent(x, c, delta, scan_len); };

  double best_delta = 0.0;
  double best_score = -std::numeric_limits<double>::infinity();
  const double h = kTwoPi / options.coarse_points;
  for (int k = 0; k < options.coarse_points; ++k) {
    const double d = h * k;
    const double s = score(d);
    if (s > best_score) {
      best_score = s;
      best_delta = d;
    }
  }
  // Golden-section refinement on [best - h, best + h].
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best_delta - h;
  double b = best_delta + h;
  double c1 = b - g * (b - a);
  double c2 = a + g * (b - a);
  double f1 = score(c1);
  double f2 = score(c2);
  for (int it = 0; it < options.refine_iterations; ++it) {
    if (f1 > f2) {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - g * (b - a);
      f1 = score(c1);
    } else {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + g * (b - a);
      f2 = score(c2);
    }
  }
  const double refined = f1 > f2 ? c1 : c2;
  if (std::max(f1, f2) >= best_score) best_delta = refined;
  best_delta = std::fmod(best_delta + kTwoPi, kTwoPi);

  ResonanceConstruction out;
  out.potential = resonant_potential(x, c, best_delta);
  out.E = param.E;
  out.x = x;
  out.c = c;
  out.delta = best_delta;
  out.N = N;
  out.predicted_exponent = c / (4.0 * param.sin_x);

  const Eigen::Vector2d init =
      backward_boundary_values(out.potential, param.E, options.backward_factor * N);
  if (init(0) == 0.0 && init(1) == 0.0) {
    throw Error(ErrorKind::ZeroInitial, "backward sweep produced u(0) = u(1) = 0");
  }
  // u(0) sin(phi) + u(1) cos(phi) = 0, phi in (0, pi).
  double phi = std::atan2(-init(1), init(0));
  if (phi <= 0.0) phi += std::numbers::pi;
  if (!(phi > 0.0 && phi < std::numbers::pi)) {
    throw Error(ErrorKind::PhaseOutOfRange, "decaying solution has u(1) = 0; no phase in (0, pi)");
  }
  out.phi = phi;

  const OperatorSpec spec = make_operator(out.potential, phi, N);
  const PruferTrajectory t = to_prufer(solve_recurrence(spec, param));
  const auto lo = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(N))));
  out.fitted_exponent = fit_decay_exponent(t, lo, N);
  return out;
}

}  // namespace efgp
