#include "pharmap/numerics.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

namespace pharmap {

namespace {
std::atomic<int> g_threads{1};
}

void set_num_threads(int n) { g_threads.store(n < 1 ? 1 : n); }
int num_threads() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const int nt = num_threads();
  if (nt <= 1 || n < 2048) {
    body(0, n);
    return;
  }
  const std::size_t chunk = (n + nt - 1) / nt;
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    const std::size_t b = std::min(n, t * chunk);
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  for (auto& th : pool) th.join();
}

namespace {
double pairwise(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise(v, half) + pairwise(v + half, n - half);
}
}  // namespace

double pairwise_sum(std::span<const double> v) { return pairwise(v.data(), v.size()); }

double l2_finite(std::span<const double> v) {
  std::vector<double> sq;
  sq.reserve(v.size());
  for (double x : v)
    if (std::isfinite(x)) sq.push_back(x * x);
  return std::sqrt(pairwise_sum(sq));
}

double rms_finite(std::span<const double> v) {
  std::vector<double> sq;
  sq.reserve(v.size());
  for (double x : v)
    if (std::isfinite(x)) sq.push_back(x * x);
  if (sq.empty()) return 0.0;
  return std::sqrt(pairwise_sum(sq) / static_cast<double>(sq.size()));
}

double linf_finite(std::span<const double> v) {
  double m = 0.0;
  for (double x : v)
    if (std::isfinite(x) && std::fabs(x) > m) m = std::fabs(x);
  return m;
}

std::size_t count_finite(std::span<const double> v) {
  std::size_t c = 0;
  for (double x : v)
    if (std::isfinite(x)) ++c;
  return c;
}

double Rng::log_uniform(double a, double b) {
  return a * std::exp(uniform01() * std::log(b / a));
}

}  // namespace pharmap
