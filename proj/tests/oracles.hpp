#pragma once

// Test-only reference implementations, kept independent of the library's
// evaluation paths.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "levlab/characters.hpp"

namespace oracle {

using cplx = std::complex<double>;

// Hurwitz zeta(s, a), 0 < a <= 1, by a plain Euler-Maclaurin sum with a fixed
// long head; s != 1.
inline cplx hurwitz_zeta(cplx s, double a) {
  static const double b2k[] = {1.0 / 6,       -1.0 / 30,     1.0 / 42,        -1.0 / 30,        5.0 / 66,
                               -691.0 / 2730, 7.0 / 6,       -3617.0 / 510,   43867.0 / 798,    -174611.0 / 330,
                               854513.0 / 138, -236364091.0 / 2730};
  const int n = 60 + static_cast<int>(std::abs(s));
  cplx head = 0.0;
  for (int k = 0; k < n; ++k) head += std::pow(cplx(k + a), -s);
  const cplx w = n + a;
  cplx tail = std::pow(w, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(w, -s);
  cplx rising = s;  // s (s+1) ... (s+2k-2)
  double fact = 2.0;
  for (int k = 1; k <= 12; ++k) {
    tail += b2k[k - 1] / fact * rising * std::pow(w, -s - double(2 * k - 1));
    rising *= (s + double(2 * k - 1)) * (s + double(2 * k));
    fact *= double(2 * k + 1) * double(2 * k + 2);
  }
  return head + tail;
}

// L(s, chi) = q^{-s} sum_r chi(r) zeta(s, r/q).
inline cplx l_hurwitz(const levlab::DirichletCharacter& chi, cplx s) {
  const auto q = chi.modulus();
  cplx acc = 0.0;
  for (std::int64_t r = 1; r <= q; ++r) {
    const cplx c = chi(r);
    if (c != cplx(0.0)) acc += c * hurwitz_zeta(s, double(r) / double(q));
  }
  return std::pow(double(q), -s) * acc;
}

// The character mod q whose values on `gens` equal `vals`.
inline levlab::DirichletCharacter find_character(std::int64_t q, const std::vector<std::int64_t>& gens,
                                                 const std::vector<cplx>& vals) {
  for (const auto& chi : levlab::enumerate_characters(q)) {
    bool ok = true;
    for (std::size_t i = 0; i < gens.size(); ++i) ok = ok && std::abs(chi(gens[i]) - vals[i]) < 1e-12;
    if (ok) return chi;
  }
  throw std::logic_error("no such character");
}

inline int mobius_brute(std::int64_t n) {
  int sign = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  return n > 1 ? -sign : sign;
}

inline std::int64_t totient_brute(std::int64_t n) {
  std::int64_t c = 0;
  for (std::int64_t k = 1; k <= n; ++k) c += std::gcd(k, n) == 1;
  return c;
}

// Smallest d | q such that chi is constant on residues = 1 mod d among units.
inline std::int64_t conductor_brute(const levlab::DirichletCharacter& chi) {
  const auto q = chi.modulus();
  for (std::int64_t d = 1; d <= q; ++d) {
    if (q % d) continue;
    bool induced = true;
    for (std::int64_t a = 1; a <= q && induced; ++a)
      if (std::gcd(a, q) == 1 && a % d == 1 % d && std::abs(chi(a) - cplx(1.0)) > 1e-9) induced = false;
    if (induced) return d;
  }
  return q;
}

}  // namespace oracle
