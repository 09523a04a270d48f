#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "levlab/error.hpp"

namespace levlab::arith {

/// (prime, exponent) pairs in increasing prime order.
inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  require(n >= 1, "factorize: n must be >= 1");
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::int64_t totient(std::int64_t n) {
  std::int64_t phi = n;
  for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

inline int mobius(std::int64_t n) {
  int mu = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

/// mu(0..n) by a linear sieve; entry 0 is 0.
inline std::vector<std::int8_t> mobius_table(std::int64_t n) {
  require(n >= 0, "mobius_table: n must be >= 0");
  const auto size = static_cast<std::size_t>(n) + 1;
  std::vector<std::int8_t> mu(size, 1);
  std::vector<bool> composite(size, false);
  std::vector<std::int64_t> primes;
  mu[0] = 0;
  for (std::int64_t i = 2; i <= n; ++i) {
    if (!composite[static_cast<std::size_t>(i)]) {
      primes.push_back(i);
      mu[static_cast<std::size_t>(i)] = -1;
    }
    for (std::int64_t p : primes) {
      const std::int64_t m = i * p;
      if (m > n) break;
      composite[static_cast<std::size_t>(m)] = true;
      if (i % p == 0) {
        mu[static_cast<std::size_t>(m)] = 0;
        break;
      }
      mu[static_cast<std::size_t>(m)] = static_cast<std::int8_t>(-mu[static_cast<std::size_t>(i)]);
    }
  }
  return mu;
}

/// Number of primitive characters mod q: the Dirichlet convolution (mu * phi)(q).
inline std::int64_t primitive_count(std::int64_t q) {
  require(q >= 1, "primitive_count: q must be >= 1");
  std::int64_t total = 0;
  for (std::int64_t d = 1; d <= q; ++d) {
    if (q % d != 0) continue;
    total += mobius(d) * totient(q / d);
  }
  return total;
}

/// Binary gcd; hot path of the mollifier double sums.
inline std::uint32_t gcd_u32(std::uint32_t a, std::uint32_t b) {
  if (a == 0) return b;
  if (b == 0) return a;
  const int shift = __builtin_ctz(a | b);
  a >>= __builtin_ctz(a);
  do {
    b >>= __builtin_ctz(b);
    if (a > b) std::swap(a, b);
    b -= a;
  } while (b != 0);
  return a << shift;
}

inline std::int64_t powmod(std::int64_t base, std::int64_t exp, std::int64_t mod) {
  std::int64_t result = 1 % mod;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) result = result * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return result;
}

}  // namespace levlab::arith
