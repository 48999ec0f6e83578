#pragma once

// Brute-force reference computations used only by the tests. None of these
// call into the library routines they are compared against.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <set>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

/// Evaluates a polynomial (constant term first) at x over Z_p.
inline std::uint64_t eval_mod(const std::vector<std::uint64_t>& f, std::uint64_t x, std::uint64_t p) {
  std::uint64_t acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = (acc * x + *it) % p;
  return acc;
}

inline bool has_root_mod(const std::vector<std::uint64_t>& f, std::uint64_t p) {
  for (std::uint64_t x = 0; x < p; ++x) {
    if (eval_mod(f, x, p) == 0) return true;
  }
  return false;
}

/// Remainder of a by monic b over Z_p by schoolbook long division.
inline std::vector<std::uint64_t> poly_rem(std::vector<std::uint64_t> a, const std::vector<std::uint64_t>& b,
                                           std::uint64_t p) {
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const std::uint64_t lead = a.back() % p;
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] = (a[shift + i] + p * p - lead * b[i] % p) % p;
    a.pop_back();
  }
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

/// Irreducible over Z_p iff no monic polynomial of degree 1..deg/2 divides it
/// (exhaustive trial division; small p and degree only).
inline bool irreducible_by_trial_division(const std::vector<std::uint64_t>& f, std::uint64_t p) {
  const std::size_t deg = f.size() - 1;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= p;
    for (std::uint64_t code = 0; code < total; ++code) {
      std::vector<std::uint64_t> g(d + 1, 0);
      std::uint64_t c = code;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = c % p;
        c /= p;
      }
      g[d] = 1;
      if (poly_rem(f, g, p).empty()) return false;
    }
  }
  return true;
}

/// Multiplicative order of a mod p by enumeration.
inline std::uint64_t order_mod(std::uint64_t a, std::uint64_t p) {
  std::uint64_t x = a % p;
  for (std::uint64_t t = 1; t < p; ++t) {
    if (x == 1) return t;
    x = x * a % p;
  }
  return 0;
}

/// Direct difference-multiset test of the perfect difference set property.
inline bool is_perfect_difference_set(const std::vector<std::int64_t>& set, std::int64_t q) {
  const std::int64_t m = q * q + q + 1;
  if (static_cast<std::int64_t>(set.size()) != q + 1) return false;
  std::multiset<std::int64_t> diffs;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = 0; j < set.size(); ++j) {
      if (i != j) diffs.insert(((set[i] - set[j]) % m + m) % m);
    }
  }
  for (std::int64_t d = 1; d < m; ++d) {
    if (diffs.count(d) != 1) return false;
  }
  return diffs.size() == static_cast<std::size_t>(m - 1);
}

/// S(nu) from exp(2 pi i nu theta_k) directly, no running products.
inline Complex power_sum(const std::vector<double>& thetas, double alpha, std::int64_t nu) {
  Complex acc{};
  for (double t : thetas) acc += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(nu) * (t + alpha));
  return acc;
}

/// Coefficients a_1..a_n of prod_k (x - z_k) by repeated multiplication.
inline std::vector<Complex> monic_coefficients(const std::vector<Complex>& roots) {
  std::vector<Complex> c{Complex(1.0)};  // highest degree first
  for (const auto& z : roots) {
    std::vector<Complex> next(c.size() + 1, Complex{});
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= z * c[i];
    }
    c = std::move(next);
  }
  return {c.begin() + 1, c.end()};
}

/// Central finite difference of f at x along coordinate k.
template <class F>
double central_difference(F&& f, std::vector<double> x, std::size_t k, double h) {
  x[k] += h;
  const double up = f(x);
  x[k] -= 2.0 * h;
  const double down = f(x);
  return (up - down) / (2.0 * h);
}

/// Log-sum-exp surrogate written out directly (no max shift; small beta only).
inline double smoothed_direct(const std::vector<double>& thetas, double beta) {
  const std::size_t n = thetas.size();
  double total = 0.0;
  for (std::int64_t nu = 1; nu <= static_cast<std::int64_t>(n * n - n); ++nu) {
    total += std::exp(beta * std::norm(power_sum(thetas, 0.0, nu)));
  }
  return std::log(total) / beta;
}

}  // namespace oracle
