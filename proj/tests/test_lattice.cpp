#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "doctest.h"

#include "efgp/lattice.hpp"

using namespace efgp;
using std::numbers::pi;

namespace {

PotentialParams amp(double c) {
  PotentialParams p;
  p.amplitude = c;
  return p;
}

}  // namespace

TEST_CASE("family formulas") {
  CHECK(make_potential(PotentialFamily::Coulomb, amp(1.0))(5) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(make_potential("alternating", amp(2.0))(3) == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));

  PotentialParams r = amp(1.0);
  r.frequency = pi;
  r.phase = pi / 2;
  CHECK(make_potential(PotentialFamily::Resonant, r)(4) == doctest::Approx(0.25).epsilon(1e-14));

  PotentialParams t;
  t.values = {0.5, -1.0, 2.0};
  const Potential tab = make_potential(PotentialFamily::Table, t);
  CHECK(tab(1) == 0.5);
  CHECK(tab(3) == 2.0);
  CHECK(tab(4) == 0.0);

  PotentialParams late = amp(1.0);
  late.onset = 10;
  const Potential p = make_potential(PotentialFamily::Coulomb, late);
  CHECK(p(9) == 0.0);
  CHECK(p(10) == doctest::Approx(0.1));
}

TEST_CASE("unknown family and empty table are rejected") {
  try {
    make_potential("gaussian", amp(1.0));
    FAIL("expected UnknownFamily");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownFamily);
  }
  try {
    make_potential(PotentialFamily::Table, PotentialParams{});
    FAIL("expected EmptyTable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyTable);
  }
  CHECK_THROWS_AS(make_potential(PotentialFamily::Coulomb, amp(std::nan(""))), Error);
}

TEST_CASE("random sign stream is deterministic and balanced") {
  PotentialParams p = amp(1.5);
  p.seed = 42;
  const Potential a = make_potential(PotentialFamily::RandomSign, p);
  const Potential b = make_potential(PotentialFamily::RandomSign, p);
  p.seed = 43;
  const Potential c = make_potential(PotentialFamily::RandomSign, p);
  int plus = 0;
  int differ = 0;
  for (std::int64_t n = 1; n <= 10000; ++n) {
    REQUIRE(a(n) == b(n));
    CHECK(std::abs(std::abs(a(n)) * n - 1.5) < 1e-12);
    plus += a(n) > 0;
    differ += (a(n) > 0) != (c(n) > 0);
  }
  CHECK(plus > 4800);
  CHECK(plus < 5200);
  CHECK(differ > 4800);
}

TEST_CASE("analytic families obey the Coulomb envelope on [1, 1e6]") {
  std::vector<Potential> ps;
  ps.push_back(make_potential(PotentialFamily::Coulomb, amp(1.3)));
  ps.push_back(make_potential(PotentialFamily::Alternating, amp(-0.7)));
  PotentialParams r = amp(2.5);
  r.frequency = 2.1;
  r.phase = 0.4;
  ps.push_back(make_potential(PotentialFamily::Resonant, r));
  PotentialParams s = amp(1.9);
  s.seed = 7;
  ps.push_back(make_potential(PotentialFamily::RandomSign, s));
  for (const auto& p : ps) {
    const double bound = std::abs(p.amplitude()) * (1.0 + 4e-16);
    bool ok = true;
    for (std::int64_t n = 1; n <= 1000000; ++n) ok = ok && (static_cast<double>(n) * std::abs(p(n)) <= bound);
    CHECK(ok);
  }
}

TEST_CASE("envelope constant") {
  CHECK(envelope_constant(make_potential(PotentialFamily::Coulomb, amp(1.0)), 1, 1000) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(envelope_constant(Potential::zero(), 3, 77) == 0.0);

  PotentialParams r = amp(2.5);
  r.frequency = pi / 2;
  const Potential res = make_potential(PotentialFamily::Resonant, r);
  // Direct scan oracle over the same range.
  double oracle = 0.0;
  for (int n = 1; n <= 10000; ++n) oracle = std::max(oracle, std::abs(std::sin(pi / 2 * n)));
  const double c = envelope_constant(res, 1, 10000);
  CHECK(c > 0.0);
  CHECK(c <= 2.5 * (1 + 4e-16));
  CHECK(c == doctest::Approx(2.5 * oracle).epsilon(1e-14));

  // Monotone in the upper end.
  PotentialParams s = amp(1.0);
  s.values = {0.1, -3.0, 0.2, 5.0, 0.0};
  const Potential tab = make_potential(PotentialFamily::Table, s);
  double prev = 0.0;
  for (std::int64_t hi = 1; hi <= 8; ++hi) {
    const double e = envelope_constant(tab, 1, hi);
    CHECK(e >= prev);
    prev = e;
  }
  CHECK(prev == doctest::Approx(20.0));

  try {
    envelope_constant(res, 5, 4);
    FAIL("expected EmptyRange");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyRange);
  }
}

TEST_CASE("build_jacobi folds the boundary condition into row one") {
  const auto j0 = build_jacobi(make_operator(Potential::zero(), pi / 2, 3));
  CHECK(j0.size() == 3);
  CHECK(j0.diagonal.cwiseAbs().maxCoeff() < 1e-15);

  const auto j1 = build_jacobi(make_operator(Potential::zero(), pi / 4, 2));
  CHECK(j1.diagonal(0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(j1.diagonal(1) == 0.0);

  const auto j2 = build_jacobi(make_operator(make_potential(PotentialFamily::Coulomb, amp(1.0)), pi / 2, 4));
  for (int n = 1; n <= 4; ++n) CHECK(j2.diagonal(n - 1) == doctest::Approx(1.0 / n).epsilon(1e-15));

  // Extended precision instantiation agrees.
  const auto jl = build_jacobi<long double>(make_operator(Potential::zero(), pi / 4, 2));
  CHECK(static_cast<double>(jl.diagonal(0)) == doctest::Approx(-1.0).epsilon(1e-15));

  for (double bad : {0.0, pi, -0.1, 4.0}) {
    try {
      build_jacobi(OperatorSpec{Potential::zero(), bad, 5});
      FAIL("expected PhaseOutOfRange");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::PhaseOutOfRange);
    }
  }
  CHECK_THROWS_AS(make_operator(Potential::zero(), 1.0, 1), Error);
}

TEST_CASE("Jacobi action reproduces the lattice equation with folded boundary") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_real_distribution<double> Phi(0.1, pi - 0.1);
  for (int trial = 0; trial < 50; ++trial) {
    PotentialParams s = amp(2.0 * U(rng));
    s.seed = static_cast<std::uint64_t>(trial);
    const Potential v = make_potential(PotentialFamily::RandomSign, s);
    const double phi = Phi(rng);
    const std::int64_t N = 20 + trial;
    const auto J = build_jacobi(make_operator(v, phi, N));
    Eigen::VectorXd y(N);
    for (auto& e : y) e = U(rng);
    const Eigen::VectorXd Hy = J.apply(y);
    CHECK((J.dense() * y - Hy).norm() <= 1e-14 * Hy.norm());
    for (std::int64_t n = 1; n <= N; ++n) {
      const double prev = n == 1 ? -y(0) * std::cos(phi) / std::sin(phi) : y(n - 2);
      const double next = n == N ? 0.0 : y(n);
      const double direct = prev + next + v(n) * y(n - 1);
      CHECK(std::abs(Hy(n - 1) - direct) <= 1e-14 * (std::abs(direct) + std::abs(y(n - 1)) + 1.0));
    }
  }
}

TEST_CASE("table file loader") {
  const std::string path = "efgp_table_test.txt";
  {
    std::ofstream out(path);
    out << "# V(n)\n0.5\n\n-0.25\n1e-3\n";
  }
  const auto v = load_table(path);
  REQUIRE(v.size() == 3);
  CHECK(v[1] == -0.25);
  {
    std::ofstream out(path);
    out << "0.5 0.6\n";
  }
  CHECK_THROWS_AS(load_table(path), Error);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_table("does/not/exist.txt"), Error);
}
