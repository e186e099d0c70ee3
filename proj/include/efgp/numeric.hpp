#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

namespace efgp {

// Neumaier-compensated running sum; add() is order-sensitive by design of
// the callers, which always accumulate in ascending n.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> v) noexcept {
    re_.add(v.real());
    im_.add(v.imag());
  }
  std::complex<double> value() const noexcept { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// FNV-1a, used for config fingerprints in output headers.
inline std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, 16);
  std::string s(buf, res.ptr);
  return std::string(16 - s.size(), '0') + s;
}

}  // namespace efgp
