#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>

namespace pharmap {

// Thread count used by parallel_for. Every parallel loop in this library
// writes to disjoint output slots and every reduction runs over a
// materialized array with a fixed tree shape, so results are bit-identical
// for any thread count.
void set_num_threads(int n);
int num_threads();

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// Pairwise tree sum with a shape that depends only on v.size().
double pairwise_sum(std::span<const double> v);

/// L2 norm over the finite entries of v (NaN marks undefined nodes).
double l2_finite(std::span<const double> v);
/// RMS over finite entries; 0 if none.
double rms_finite(std::span<const double> v);
/// max |v_i| over finite entries; 0 if none.
double linf_finite(std::span<const double> v);
std::size_t count_finite(std::span<const double> v);

// mt19937_64 output is fully specified by the standard; the distribution
// classes are not. Uniforms are mapped from raw bits so that seeded runs
// are reproducible byte-for-byte across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  double log_uniform(double a, double b);
  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace pharmap
