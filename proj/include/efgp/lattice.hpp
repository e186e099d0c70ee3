#pragma once

// Half-line lattice operators (Hy)(n) = y(n-1) + y(n+1) + V(n) y(n) with the
// phase boundary condition y(0) sin(phi) + y(1) cos(phi) = 0.

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "efgp/error.hpp"

namespace efgp {

enum class PotentialFamily { Coulomb, Alternating, Resonant, RandomSign, Table };

std::string_view to_string(PotentialFamily family) noexcept;
PotentialFamily family_from_string(std::string_view name);

struct PotentialParams {
  double amplitude = 0.0;
  double frequency = 0.0;  // Resonant only, radians per step
  double phase = 0.0;      // Resonant only
  std::uint64_t seed = 0;  // RandomSign only
  std::vector<double> values;  // Table only, values[0] is V(1)
  std::int64_t onset = 1;      // V(n) = 0 for n < onset
};

/// Immutable evaluation rule for V(n), n >= 1.
///
/// Analytic families honour n |V(n)| <= |amplitude|:
///   Coulomb      c / n
///   Alternating  (-1)^n c / n
///   Resonant     c sin(omega n + delta) / n
///   RandomSign   eps_n c / n, eps_n in {-1, +1} from a counter-based stream
/// Table returns the stored values and zero past the end of the table.
class Potential {
 public:
  Potential() = default;
  Potential(PotentialFamily family, PotentialParams params);

  static Potential zero() { return Potential(PotentialFamily::Coulomb, {}); }

  double operator()(std::int64_t n) const noexcept;

  PotentialFamily family() const noexcept { return family_; }
  double amplitude() const noexcept { return amplitude_; }
  double frequency() const noexcept { return frequency_; }
  double phase() const noexcept { return phase_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::int64_t onset() const noexcept { return onset_; }
  const std::vector<double>& table() const noexcept;

  // +1 or -1; the sign stream of the RandomSign family.
  static int random_sign(std::uint64_t seed, std::int64_t n) noexcept;

 private:
  PotentialFamily family_ = PotentialFamily::Coulomb;
  double amplitude_ = 0.0;
  double frequency_ = 0.0;
  double phase_ = 0.0;
  std::uint64_t seed_ = 0;
  std::int64_t onset_ = 1;
  std::shared_ptr<const std::vector<double>> values_;
};

Potential make_potential(PotentialFamily family, const PotentialParams& params);
Potential make_potential(std::string_view family, const PotentialParams& params);

// One value per line, V(1) first. Blank lines and '#' comments are skipped.
std::vector<double> load_table(const std::string& path);

/// max over n in [n_lo, n_hi] of n |V(n)|.
double envelope_constant(const Potential& potential, std::int64_t n_lo, std::int64_t n_hi);

struct OperatorSpec {
  Potential potential;
  double phi = std::numbers::pi / 2;
  std::int64_t N = 2;

  void validate() const;
};

OperatorSpec make_operator(Potential potential, double phi, std::int64_t N);

/// Symmetric tridiagonal matrix with unit off-diagonal.
template <typename Scalar>
struct JacobiMatrix {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector diagonal;

  Eigen::Index size() const noexcept { return diagonal.size(); }

  Vector apply(const Eigen::Ref<const Vector>& y) const {
    const Eigen::Index n = size();
    Vector out = diagonal.cwiseProduct(y);
    if (n > 1) {
      out.head(n - 1) += y.tail(n - 1);
      out.tail(n - 1) += y.head(n - 1);
    }
    return out;
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense() const {
    const Eigen::Index n = size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    m.diagonal() = diagonal;
    if (n > 1) {
      m.diagonal(1).setOnes();
      m.diagonal(-1).setOnes();
    }
    return m;
  }

  // Gershgorin enclosure [min d - 2, max d + 2].
  Scalar lower_bound() const { return diagonal.minCoeff() - Scalar(2); }
  Scalar upper_bound() const { return diagonal.maxCoeff() + Scalar(2); }

  Scalar norm_estimate() const {
    return diagonal.cwiseAbs().maxCoeff() + Scalar(2);
  }

  // Leading principal submatrix of size k.
  JacobiMatrix leading(Eigen::Index k) const { return JacobiMatrix{diagonal.head(k)}; }
};

using Jacobi = JacobiMatrix<double>;

/// Truncated matrix of H_phi on (y(1), ..., y(N)); y(0) = -y(1) cot(phi) is
/// folded into row 1 and y(N+1) = 0.
template <typename Scalar = double>
JacobiMatrix<Scalar> build_jacobi(const OperatorSpec& spec) {
  spec.validate();
  JacobiMatrix<Scalar> j;
  j.diagonal.resize(spec.N);
  for (std::int64_t n = 1; n <= spec.N; ++n) j.diagonal(n - 1) = Scalar(spec.potential(n));
  // cot(phi) = tan(pi/2 - phi); the offset is exact near pi/2, so the double
  // nearest pi/2 gives the Dirichlet row exactly.
  using std::tan;
  j.diagonal(0) -= tan(Scalar(std::numbers::pi / 2 - spec.phi));
  return j;
}

}  // namespace efgp
