#include "efgp/lattice.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace efgp {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::UnknownFamily: return "UnknownFamily";
    case ErrorKind::EmptyTable: return "EmptyTable";
    case ErrorKind::EmptyRange: return "EmptyRange";
    case ErrorKind::PhaseOutOfRange: return "PhaseOutOfRange";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::DegenerateSolution: return "DegenerateSolution";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::TolTooSmall: return "TolTooSmall";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorKind::SubcriticalAmplitude: return "SubcriticalAmplitude";
    case ErrorKind::ZeroInitial: return "ZeroInitial";
    case ErrorKind::NegativeConstant: return "NegativeConstant";
    case ErrorKind::ResonantFrequency: return "ResonantFrequency";
    case ErrorKind::DegenerateFrequencies: return "DegenerateFrequencies";
    case ErrorKind::RangeMismatch: return "RangeMismatch";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::NotUnitVectors: return "NotUnitVectors";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

std::string_view to_string(PotentialFamily family) noexcept {
  switch (family) {
    case PotentialFamily::Coulomb: return "coulomb";
    case PotentialFamily::Alternating: return "alternating";
    case PotentialFamily::Resonant: return "resonant";
    case PotentialFamily::RandomSign: return "random_sign";
    case PotentialFamily::Table: return "table";
  }
  return "unknown";
}

PotentialFamily family_from_string(std::string_view name) {
  for (auto f : {PotentialFamily::Coulomb, PotentialFamily::Alternating, PotentialFamily::Resonant,
                 PotentialFamily::RandomSign, PotentialFamily::Table}) {
    if (name == to_string(f)) return f;
  }
  throw Error(ErrorKind::UnknownFamily, "unknown potential family '" + std::string(name) + "'");
}

namespace {

// SplitMix64 finalizer, used as a stateless hash of (seed, n).
std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Potential::Potential(PotentialFamily family, PotentialParams params)
    : family_(family),
      amplitude_(params.amplitude),
      frequency_(params.frequency),
      phase_(params.phase),
      seed_(params.seed),
      onset_(params.onset) {
  if (family == PotentialFamily::Table) {
    values_ = std::make_shared<const std::vector<double>>(std::move(params.values));
  }
}

const std::vector<double>& Potential::table() const noexcept {
  static const std::vector<double> empty;
  return values_ ? *values_ : empty;
}

int Potential::random_sign(std::uint64_t seed, std::int64_t n) noexcept {
  const std::uint64_t h = mix64(mix64(seed) + static_cast<std::uint64_t>(n) * 0x9E3779B97F4A7C15ULL);
  return (h >> 63) ? -1 : 1;
}

double Potential::operator()(std::int64_t n) const noexcept {
  if (n < onset_ || n < 1) return 0.0;
  const double dn = static_cast<double>(n);
  switch (family_) {
    case PotentialFamily::Coulomb:
      return amplitude_ / dn;
    case PotentialFamily::Alternating:
      return (n % 2 == 0 ? amplitude_ : -amplitude_) / dn;
    case PotentialFamily::Resonant:
      return amplitude_ * std::sin(frequency_ * dn + phase_) / dn;
    case PotentialFamily::RandomSign:
      return random_sign(seed_, n) * amplitude_ / dn;
    case PotentialFamily::Table: {
      const auto& v = *values_;
      return static_cast<std::size_t>(n) <= v.size() ? v[static_cast<std::size_t>(n - 1)] : 0.0;
    }
  }
  return 0.0;
}

Potential make_potential(PotentialFamily family, const PotentialParams& params) {
  if (!std::isfinite(params.amplitude) || !std::isfinite(params.frequency) ||
      !std::isfinite(params.phase)) {
    throw Error(ErrorKind::InvalidArgument, "potential parameters must be finite");
  }
  if (params.onset < 1) throw Error(ErrorKind::InvalidArgument, "onset must be >= 1");
  if (family == PotentialFamily::Table) {
    if (params.values.empty()) throw Error(ErrorKind::EmptyTable, "table potential has no values");
    if (!std::all_of(params.values.begin(), params.values.end(),
                     [](double v) { return std::isfinite(v); })) {
      throw Error(ErrorKind::InvalidArgument, "table potential contains non-finite values");
    }
  }
  return Potential(family, params);
}

Potential make_potential(std::string_view family, const PotentialParams& params) {
  return make_potential(family_from_string(family), params);
}

std::vector<double> load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open table file '" + path + "'");
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    double v = 0.0;
    std::string rest;
    if (!(ss >> v) || (ss >> rest)) {
      throw Error(ErrorKind::ParseError,
                  path + ":" + std::to_string(lineno) + ": expected one number per line");
    }
    values.push_back(v);
  }
  if (values.empty()) throw Error(ErrorKind::EmptyTable, "table file '" + path + "' has no values");
  return values;
}

double envelope_constant(const Potential& potential, std::int64_t n_lo, std::int64_t n_hi) {
  if (n_lo < 1 || n_lo > n_hi) {
    throw Error(ErrorKind::EmptyRange, "envelope range [" + std::to_string(n_lo) + ", " +
                                           std::to_string(n_hi) + "] is empty");
  }
  double c = 0.0;
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    c = std::max(c, static_cast<double>(n) * std::abs(potential(n)));
  }
  return c;
}

void OperatorSpec::validate() const {
  if (!(phi > 0.0 && phi < std::numbers::pi)) {
    throw Error(ErrorKind::PhaseOutOfRange, "boundary phase " + std::to_string(phi) +
                                                " must lie in (0, pi)");
  }
  if (N < 2) throw Error(ErrorKind::InvalidArgument, "truncation N must be >= 2");
}

OperatorSpec make_operator(Potential potential, double phi, std::int64_t N) {
  OperatorSpec spec{std::move(potential), phi, N};
  spec.validate();
  return spec;
}

}  // namespace efgp
