#pragma once

// Integer helpers shared by the finite-field and difference-set code:
// 64-bit modular arithmetic, primality, factorization and the
// congruence tests used for order feasibility.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

namespace powersum::nt {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Deterministic Miller-Rabin for the full 64-bit range.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace detail {

inline u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    auto step = [&](u64 x) { return (mul_mod(x, x, n) + c) % n; };
    u64 x = 2, y = 2, d = 1;
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

inline void factor_into(u64 n, std::map<u64, int>& out) {
  if (n == 1) return;
  for (u64 p = 2; p < 1000 && p * p <= n; ++p) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  u64 d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

/// Prime factorization as (prime, exponent) pairs in increasing prime order.
inline std::vector<std::pair<u64, int>> factorize(u64 n) {
  std::map<u64, int> f;
  detail::factor_into(n, f);
  return {f.begin(), f.end()};
}

inline std::vector<u64> distinct_prime_factors(u64 n) {
  std::vector<u64> out;
  for (auto [p, e] : factorize(n)) out.push_back(p);
  return out;
}

struct PrimePower {
  u64 prime;
  int exponent;
};

/// Returns (p, e) with n = p^e, e >= 1, or nullopt when n is not a prime power.
/// Uses trial factorization.
inline std::optional<PrimePower> as_prime_power(u64 n) {
  if (n < 2) return std::nullopt;
  auto f = factorize(n);
  if (f.size() != 1) return std::nullopt;
  return PrimePower{f[0].first, f[0].second};
}

inline bool is_prime_power(u64 n) { return as_prime_power(n).has_value(); }

/// True iff n = a^2 + b^2 for integers a, b (zero allowed).
inline bool is_sum_of_two_squares(u64 n) {
  for (u64 a = 0; a * a <= n; ++a) {
    u64 rest = n - a * a;
    u64 b = static_cast<u64>(std::sqrt(static_cast<long double>(rest)));
    while (b * b > rest) --b;
    while ((b + 1) * (b + 1) <= rest) ++b;
    if (b * b == rest) return true;
  }
  return false;
}

/// Checked p^k; nullopt on 64-bit overflow.
inline std::optional<u64> checked_pow(u64 base, int exp) {
  u128 acc = 1;
  for (int i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > static_cast<u128>(UINT64_MAX)) return std::nullopt;
  }
  return static_cast<u64>(acc);
}

/// Residues in [1, m) coprime to m, ascending.
inline std::vector<u64> units_mod(u64 m) {
  std::vector<u64> out;
  for (u64 u = 1; u < m; ++u) {
    if (std::gcd(u, m) == 1) out.push_back(u);
  }
  if (m == 1) out.push_back(0);
  return out;
}

}  // namespace powersum::nt
