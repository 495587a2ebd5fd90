#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "dml/error.hpp"

namespace dml {

// Deterministic random source. mt19937_64 output is fully specified by the
// standard, but std::*_distribution is implementation defined, so every
// distribution here is hand rolled: identical seeds give identical streams
// on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform in [0, n). Rejection keeps the draw exactly uniform.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) fail(Errc::InvalidArgument, "uniform_int bound must be positive");
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      std::uint64_t x = gen_();
      if (x < limit) return x % n;
    }
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log argument.
  double uniform_pos() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  // Box-Muller, cosine branch only so call count stays predictable.
  double normal() {
    double u1 = uniform_pos();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Marsaglia-Tsang squeeze; shapes below one are boosted through
  // G(a) = G(a + 1) * U^(1/a).
  double gamma(double shape) {
    if (!(shape > 0.0)) fail(Errc::InvalidArgument, "gamma shape must be positive");
    if (shape < 1.0) {
      double u = uniform_pos();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Normalized independent gammas.
  std::vector<double> dirichlet(const std::vector<double>& alphas) {
    if (alphas.empty()) fail(Errc::InvalidArgument, "dirichlet needs at least one alpha");
    std::vector<double> out(alphas.size());
    double total = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      out[i] = gamma(alphas[i]);
      total += out[i];
    }
    if (total <= 0.0) {
      // Underflow corner for tiny alphas; fall back to the mean direction.
      double a = 0.0;
      for (double x : alphas) a += x;
      for (std::size_t i = 0; i < alphas.size(); ++i) out[i] = alphas[i] / a;
      return out;
    }
    for (double& x : out) x /= total;
    return out;
  }

  // Fisher-Yates.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dml
