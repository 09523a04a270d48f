#pragma once

// Dirichlet characters mod q, built from the cyclic decomposition of
// (Z/qZ)^* over the prime-power factors of q.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <vector>

#include "levlab/arith.hpp"
#include "levlab/error.hpp"
#include "levlab/special.hpp"

namespace levlab {

/**
 * @brief A character mod q stored as an exact phase table.
 *
 * chi(n) = exp(2 pi i phase[n] / order) for gcd(n, q) = 1 and 0 otherwise
 * (phase[n] == -1). `order` is the exponent of the group (Z/qZ)^*, so every
 * character of the modulus shares the same denominator.
 */
class DirichletCharacter {
 public:
  /// `conj_index` is the position of the conjugate character; defaults to `index`.
  DirichletCharacter(std::int64_t modulus, std::int64_t order, std::vector<std::int64_t> phase,
                     std::size_t index, std::optional<std::size_t> conj_index = std::nullopt)
      : modulus_(modulus),
        order_(order),
        phase_(std::move(phase)),
        index_(index),
        conj_index_(conj_index.value_or(index)) {
    values_.resize(phase_.size());
    for (std::size_t n = 0; n < phase_.size(); ++n) {
      values_[n] = phase_[n] < 0 ? cplx{0.0, 0.0} : unit(phase_[n]);
    }
    const std::int64_t minus_one = phase_[static_cast<std::size_t>((modulus_ - 1) % modulus_)];
    parity_ = (modulus_ > 2 && 2 * minus_one == order_) ? 1 : 0;
    conductor_ = compute_conductor();
  }

  std::int64_t modulus() const { return modulus_; }
  std::int64_t conductor() const { return conductor_; }
  bool is_primitive() const { return conductor_ == modulus_; }
  bool is_principal() const {
    for (auto p : phase_)
      if (p > 0) return false;
    return true;
  }
  bool is_real() const {
    for (auto p : phase_)
      if (p > 0 && 2 * p != order_) return false;
    return true;
  }
  /// 0 if chi(-1) = 1, 1 if chi(-1) = -1.
  int parity() const { return parity_; }
  /// Position in enumerate_characters(modulus()).
  std::size_t index() const { return index_; }
  std::int64_t order() const { return order_; }

  cplx operator()(std::int64_t n) const { return values_[residue(n)]; }
  /// Exact phase numerator, or -1 when gcd(n, q) > 1.
  std::int64_t phase(std::int64_t n) const { return phase_[residue(n)]; }
  const std::vector<cplx>& values() const { return values_; }

  DirichletCharacter conj() const {
    std::vector<std::int64_t> ph(phase_.size());
    for (std::size_t n = 0; n < ph.size(); ++n) {
      ph[n] = phase_[n] < 0 ? -1 : (order_ - phase_[n]) % order_;
    }
    return DirichletCharacter(modulus_, order_, std::move(ph), conj_index_, index_);
  }

 private:
  std::size_t residue(std::int64_t n) const {
    std::int64_t r = n % modulus_;
    if (r < 0) r += modulus_;
    return static_cast<std::size_t>(r);
  }

  cplx unit(std::int64_t k) const {
    if (k == 0) return {1.0, 0.0};
    // exact on the quarter turns so real characters stay exactly real
    if (4 * k == order_) return {0.0, 1.0};
    if (2 * k == order_) return {-1.0, 0.0};
    if (4 * k == 3 * order_) return {0.0, -1.0};
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(order_);
    return std::polar(1.0, angle);
  }

  // Smallest d | q such that chi(n) = 1 whenever n = 1 (mod d), gcd(n, q) = 1.
  std::int64_t compute_conductor() const {
    if (modulus_ == 1) return 1;
    for (std::int64_t d = 1; d < modulus_; ++d) {
      if (modulus_ % d != 0) continue;
      bool trivial = true;
      for (std::int64_t n = 1; n < modulus_ && trivial; n += d) {
        if (phase_[static_cast<std::size_t>(n)] > 0) trivial = false;
      }
      if (trivial) return d;
    }
    return modulus_;
  }

  std::int64_t modulus_;
  std::int64_t order_;
  std::vector<std::int64_t> phase_;
  std::vector<cplx> values_;
  std::size_t index_;
  std::size_t conj_index_;
  int parity_ = 0;
  std::int64_t conductor_ = 1;
};

namespace detail {

// One cyclic factor of (Z/qZ)^*: its prime-power modulus, order, and the
// discrete log of every residue mod that prime power (-1 for non-units).
struct CyclicFactor {
  std::int64_t prime_power;
  std::int64_t order;
  std::vector<std::int64_t> dlog;
};

inline std::int64_t primitive_root(std::int64_t p, int e, std::int64_t pe) {
  const std::int64_t phi = pe / p * (p - 1);
  const auto primes = arith::factorize(phi);
  for (std::int64_t g = 2; g < pe; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (auto [l, k] : primes) {
      if (arith::powmod(g, phi / l, pe) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  (void)e;
  throw NumericalError("primitive_root: none found");
}

inline std::vector<CyclicFactor> cyclic_factors(std::int64_t q) {
  std::vector<CyclicFactor> out;
  for (auto [p, e] : arith::factorize(q)) {
    std::int64_t pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    if (p == 2) {
      if (e == 1) continue;
      // -1 generates a factor of order 2
      CyclicFactor minus{pe, 2, std::vector<std::int64_t>(static_cast<std::size_t>(pe), -1)};
      const std::int64_t five_order = e >= 3 ? pe / 4 : 1;
      CyclicFactor five{pe, five_order, std::vector<std::int64_t>(static_cast<std::size_t>(pe), -1)};
      std::int64_t x = 1;
      for (std::int64_t b = 0; b < five_order; ++b) {
        minus.dlog[static_cast<std::size_t>(x)] = 0;
        minus.dlog[static_cast<std::size_t>(pe - x)] = 1;
        five.dlog[static_cast<std::size_t>(x)] = b;
        five.dlog[static_cast<std::size_t>(pe - x)] = b;
        x = x * 5 % pe;
      }
      out.push_back(std::move(minus));
      if (e >= 3) out.push_back(std::move(five));
    } else {
      const std::int64_t g = primitive_root(p, e, pe);
      const std::int64_t order = pe / p * (p - 1);
      CyclicFactor f{pe, order, std::vector<std::int64_t>(static_cast<std::size_t>(pe), -1)};
      std::int64_t x = 1;
      for (std::int64_t k = 0; k < order; ++k) {
        f.dlog[static_cast<std::size_t>(x)] = k;
        x = x * g % pe;
      }
      out.push_back(std::move(f));
    }
  }
  return out;
}

}  // namespace detail

/**
 * @brief All phi(q) characters mod q.
 *
 * Order is lexicographic in the exponent tuple over the cyclic factors
 * (increasing primes; for 2^e the -1 factor precedes the 5 factor), so
 * index 0 is always the principal character.
 */
inline std::vector<DirichletCharacter> enumerate_characters(std::int64_t q) {
  require(q >= 1, "enumerate_characters: q must be >= 1");
  const auto factors = detail::cyclic_factors(q);
  std::int64_t order = 1;
  for (const auto& f : factors) order = std::lcm(order, f.order);

  // per-residue discrete-log vectors
  const auto size = static_cast<std::size_t>(q);
  std::vector<std::vector<std::int64_t>> logs(size);
  std::vector<bool> unit(size, false);
  for (std::int64_t n = 0; n < q; ++n) {
    if (std::gcd(n, q) != 1) continue;
    unit[static_cast<std::size_t>(n)] = true;
    auto& v = logs[static_cast<std::size_t>(n)];
    for (const auto& f : factors) v.push_back(f.dlog[static_cast<std::size_t>(n % f.prime_power)]);
  }

  std::vector<DirichletCharacter> out;
  std::vector<std::int64_t> exps(factors.size(), 0);
  for (;;) {
    std::vector<std::int64_t> phase(size, -1);
    for (std::size_t n = 0; n < size; ++n) {
      if (!unit[n]) continue;
      std::int64_t k = 0;
      for (std::size_t j = 0; j < factors.size(); ++j) {
        k = (k + exps[j] * logs[n][j] % factors[j].order * (order / factors[j].order)) % order;
      }
      phase[n] = k;
    }
    std::size_t conj_index = 0;
    for (std::size_t j = 0; j < factors.size(); ++j)
      conj_index = conj_index * static_cast<std::size_t>(factors[j].order) +
                   static_cast<std::size_t>((factors[j].order - exps[j]) % factors[j].order);
    out.emplace_back(q, order, std::move(phase), out.size(), conj_index);

    // odometer increment, last factor fastest
    std::size_t j = factors.size();
    while (j > 0) {
      --j;
      if (++exps[j] < factors[j].order) break;
      exps[j] = 0;
      if (j == 0) return out;
    }
    if (factors.empty()) return out;
  }
}

struct RootNumber {
  cplx epsilon;
};

/// tau(chi) = sum_a chi(a) e(a/q), by direct summation.
inline cplx gauss_sum(const DirichletCharacter& chi) {
  const std::int64_t q = chi.modulus();
  CompensatedSum<cplx> tau;
  for (std::int64_t a = 0; a < q; ++a) {
    if (chi.phase(a) < 0) continue;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(q);
    tau += chi(a) * std::polar(1.0, angle);
  }
  return tau.value();
}

/// epsilon_chi = tau(chi) / (i^nu sqrt(q)); defined for primitive chi only.
inline RootNumber root_number(const DirichletCharacter& chi) {
  require(chi.is_primitive(), "root_number: character must be primitive");
  const cplx inu = chi.parity() == 1 ? cplx{0.0, 1.0} : cplx{1.0, 0.0};
  return {gauss_sum(chi) / (inu * std::sqrt(static_cast<double>(chi.modulus())))};
}

inline std::vector<DirichletCharacter> primitive_characters(std::int64_t q) {
  std::vector<DirichletCharacter> out;
  for (auto& chi : enumerate_characters(q))
    if (chi.is_primitive()) out.push_back(std::move(chi));
  return out;
}

}  // namespace levlab
