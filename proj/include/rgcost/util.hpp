#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace rgcost {

using Rng = std::mt19937_64;

/// Derives an independent stream seed from (seed, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Uniform integer in [0, n) with a fixed, library-independent mapping so that
/// seeded runs are reproducible across standard library implementations.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);
double uniform_unit(Rng& rng);

std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text);

/// Thread cap from RGCOST_THREADS (default 1, at least 1).
int thread_cap();

/// Runs fn(i) for i in [0, count) on up to `threads` threads. Callers write
/// results into per-index slots so the reduction order stays deterministic.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

/// Exact nonnegative rational for rank quotients and bound-chain values.
struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational make(long long num, long long den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
};

}  // namespace rgcost
