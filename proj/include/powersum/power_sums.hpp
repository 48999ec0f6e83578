#pragma once

// Pure power sums S(nu) = sum_k z_k^nu of unimodular tuples z_k = e(theta_k),
// e(x) = exp(2 pi i x), with angles stored in turns. Includes the Fejer
// kernel lower-bound certificate, Newton-Girard coefficients, the
// Fabrykowski tuple built from a perfect difference set, an exact integer
// evaluation of |S(nu)|^2 for such tuples, and recovery of the difference
// set from a numerically given minimizer.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "powersum/error.hpp"
#include "powersum/pds.hpp"

namespace powersum {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle in turns into [0, 1).
inline double wrap_turns(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;
  return r;
}

/// e(x) = exp(2 pi i x).
inline Complex unit(double turns) {
  const double r = wrap_turns(turns);
  return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

/// n points on the unit circle, z_k = e(theta_k + alpha).
class UnimodularTuple {
 public:
  UnimodularTuple() = default;

  /// Angles are wrapped into [0, 1). Requires n >= 2.
  explicit UnimodularTuple(std::vector<double> thetas, double alpha_turns = 0.0)
      : thetas_(std::move(thetas)), alpha_(wrap_turns(alpha_turns)) {
    if (thetas_.size() < 2) throw Error(ErrorCode::InvalidArgument, "a tuple needs n >= 2 points");
    for (double& t : thetas_) {
      if (!std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "angles must be finite");
      t = wrap_turns(t);
    }
    if (!std::isfinite(alpha_turns)) throw Error(ErrorCode::InvalidArgument, "phase must be finite");
  }

  std::size_t n() const { return thetas_.size(); }
  const std::vector<double>& thetas() const { return thetas_; }
  double alpha_turns() const { return alpha_; }

  Complex z(std::size_t k) const { return unit(thetas_[k] + alpha_); }

  UnimodularTuple with_alpha(double alpha_turns) const { return UnimodularTuple(thetas_, alpha_turns); }

 private:
  std::vector<double> thetas_;
  double alpha_ = 0.0;
};

/// Largest nu in the inf-max problem: n^2 - n.
inline std::int64_t horizon(std::size_t n) { return static_cast<std::int64_t>(n * n - n); }

/// S(1..nu_max) by running products z_k^nu.
inline std::vector<Complex> power_sums_complex(const UnimodularTuple& t, std::int64_t nu_max) {
  if (nu_max < 1) throw Error(ErrorCode::NuOutOfRange, "nu_max must be >= 1");
  std::vector<Complex> s(static_cast<std::size_t>(nu_max), Complex{});
  for (std::size_t k = 0; k < t.n(); ++k) {
    const Complex z = t.z(k);
    Complex w = z;
    for (std::int64_t nu = 1; nu <= nu_max; ++nu) {
      s[nu - 1] += w;
      w *= z;
    }
  }
  return s;
}

struct PowerSumProfile {
  std::size_t n = 0;
  std::int64_t m = 0;                // n^2 - n + 1
  std::vector<double> abs_values;    // |S(nu)|, nu = 1..nu_max
  std::vector<double> epsilons;      // |S(nu)|^2 - (n-1)
  double max_abs = 0.0;

  std::int64_t nu_max() const { return static_cast<std::int64_t>(abs_values.size()); }
};

inline PowerSumProfile power_sums(const UnimodularTuple& t, std::int64_t nu_max) {
  const auto s = power_sums_complex(t, nu_max);
  PowerSumProfile p;
  p.n = t.n();
  p.m = horizon(t.n()) + 1;
  p.abs_values.reserve(s.size());
  p.epsilons.reserve(s.size());
  const double base = static_cast<double>(t.n()) - 1.0;
  for (const auto& v : s) {
    p.abs_values.push_back(std::abs(v));
    p.epsilons.push_back(std::norm(v) - base);
    p.max_abs = std::max(p.max_abs, p.abs_values.back());
  }
  return p;
}

inline PowerSumProfile power_sums(const UnimodularTuple& t) { return power_sums(t, horizon(t.n())); }

/// The m-th Fejer kernel F_m(t) = (1/m) (sin(pi m t) / sin(pi t))^2, with
/// the limit value m at integer t. Nonnegative everywhere.
inline double fejer_kernel(std::int64_t m, double t) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "Fejer kernel order must be >= 1");
  const double r = t - std::round(t);  // distance to the nearest integer, in (-1/2, 1/2]
  if (r == 0.0) return static_cast<double>(m);
  const double md = static_cast<double>(m);
  const double ratio = std::sin(std::numbers::pi * md * r) / std::sin(std::numbers::pi * r);
  return ratio * ratio / md;
}

struct FejerCertificate {
  std::size_t n = 0;
  std::int64_t m = 0;              // n^2 - n + 1
  std::vector<double> epsilons;    // nu = 1..n^2-n
  double weighted_sum = 0.0;       // sum (1 - nu/m) eps_nu
  std::int64_t argmax_nu = 0;
  double max_epsilon = 0.0;
  double tolerance = 0.0;          // 1e-9 n^2
  /// Both sides of sum_{|nu|<m} (1-|nu|/m) |S(nu)|^2 = sum_{k,l} F_m(theta_k - theta_l).
  double weighted_power_sum = 0.0;
  double kernel_sum = 0.0;

  bool holds() const { return weighted_sum >= -tolerance; }
};

/// Lower-bound certificate: with m = n^2-n+1 and eps_nu = |S(nu)|^2-(n-1),
/// the diagonal of the Fejer kernel double sum forces
/// sum_{nu=1}^{n^2-n} (1 - nu/m) eps_nu >= 0, so some eps_nu >= 0.
inline FejerCertificate fejer_certificate(const UnimodularTuple& t) {
  const std::size_t n = t.n();
  FejerCertificate c;
  c.n = n;
  c.m = horizon(n) + 1;
  c.tolerance = 1e-9 * static_cast<double>(n * n);
  const auto s = power_sums_complex(t, horizon(n));
  const double md = static_cast<double>(c.m);
  const double base = static_cast<double>(n) - 1.0;
  c.max_epsilon = -INFINITY;
  c.weighted_power_sum = static_cast<double>(n * n);  // nu = 0 term
  for (std::int64_t nu = 1; nu <= horizon(n); ++nu) {
    const double sq = std::norm(s[nu - 1]);
    const double eps = sq - base;
    const double w = 1.0 - nu / md;
    c.epsilons.push_back(eps);
    c.weighted_sum += w * eps;
    c.weighted_power_sum += 2.0 * w * sq;
    if (eps > c.max_epsilon) {
      c.max_epsilon = eps;
      c.argmax_nu = nu;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) c.kernel_sum += fejer_kernel(c.m, t.thetas()[k] - t.thetas()[l]);
  }
  return c;
}

/// Coefficients a_1..a_n of prod (x - z_k) = x^n + a_1 x^(n-1) + ... + a_n
/// from the power sums S(1..n) via S(nu) + a_1 S(nu-1) + ... + nu a_nu = 0.
inline std::vector<Complex> newton_girard_coeffs(std::span<const Complex> s) {
  std::vector<Complex> a(s.size());
  for (std::size_t nu = 1; nu <= s.size(); ++nu) {
    Complex acc = s[nu - 1];
    for (std::size_t j = 1; j < nu; ++j) acc += a[j - 1] * s[nu - 1 - j];
    a[nu - 1] = -acc / static_cast<double>(nu);
  }
  return a;
}

/// Power-sum test: |S(nu)| <= tol for nu = 1..n-1.
inline bool is_regular_ngon(const UnimodularTuple& t, double tol) {
  if (t.n() < 2) throw Error(ErrorCode::InvalidArgument, "n must be >= 2");
  const auto s = power_sums_complex(t, static_cast<std::int64_t>(t.n()) - 1);
  return std::all_of(s.begin(), s.end(), [&](const Complex& v) { return std::abs(v) <= tol; });
}

/// Geometric test: sorted angles have all cyclic gaps equal to 1/n within tol.
inline bool has_equal_gaps(const UnimodularTuple& t, double tol) {
  std::vector<double> a = t.thetas();
  std::sort(a.begin(), a.end());
  const double target = 1.0 / static_cast<double>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double next = i + 1 < a.size() ? a[i + 1] : a[0] + 1.0;
    if (std::abs(next - a[i] - target) > tol) return false;
  }
  return true;
}

/// z_k = e(alpha) e(a_k / m) for a perfect difference set (a_k) mod m.
inline UnimodularTuple fabrykowski_tuple(const pds::PerfectDifferenceSet& d, double alpha_turns = 0.0) {
  if (!pds::verify(d).valid || d.m != pds::modulus_for_order(d.q)) {
    throw Error(ErrorCode::InvalidPds, "Fabrykowski tuple requires a verified perfect difference set");
  }
  std::vector<double> thetas;
  thetas.reserve(d.residues.size());
  for (auto a : d.residues) thetas.push_back(static_cast<double>(pds::reduce(a, d.m)) / static_cast<double>(d.m));
  return UnimodularTuple(std::move(thetas), alpha_turns);
}

/// |S(nu)|^2 for the Fabrykowski tuple of d, evaluated exactly.
///
/// With zeta = e(1/m), |S(nu)|^2 = sum_r c_r zeta^r where c_r counts ordered
/// pairs (k, l) with nu (a_k - a_l) = r (mod m). When c is constant on the
/// nonzero elements of the subgroup g Z_m (g = gcd(nu, m)) and zero off it,
/// the subgroup sum of roots vanishes and the value is c_0 - c.
inline std::int64_t exact_abs_squared(const pds::PerfectDifferenceSet& d, std::int64_t nu) {
  if (!pds::verify(d).valid || d.m != pds::modulus_for_order(d.q)) {
    throw Error(ErrorCode::InvalidPds, "exact_abs_squared requires a verified perfect difference set");
  }
  const std::int64_t m = d.m;
  if (nu < 1 || nu > m - 1) throw Error(ErrorCode::NuOutOfRange, "nu must lie in [1, m-1]");
  std::vector<std::int64_t> count(m, 0);
  for (auto a : d.residues) {
    for (auto b : d.residues) ++count[pds::reduce(nu * pds::reduce(a - b, m), m)];
  }
  const std::int64_t g = std::gcd(nu, m);
  std::optional<std::int64_t> level;
  for (std::int64_t r = 1; r < m; ++r) {
    if (r % g != 0) {
      if (count[r] != 0) throw Error(ErrorCode::InvalidPds, "internal: exponent multiset leaves the subgroup");
      continue;
    }
    if (!level) level = count[r];
    if (count[r] != *level) throw Error(ErrorCode::InvalidPds, "internal: exponent multiset is not uniform");
  }
  return count[0] - level.value_or(0);
}

struct DifferenceSpectrum {
  std::vector<double> lambdas;  // 0 followed by the n^2-n differences, sorted
};

/// Sorted pairwise differences theta_k - theta_l (k != l) mod 1, plus 0.
inline DifferenceSpectrum difference_spectrum(const UnimodularTuple& t) {
  DifferenceSpectrum out;
  out.lambdas.reserve(horizon(t.n()) + 1);
  out.lambdas.push_back(0.0);
  for (std::size_t k = 0; k < t.n(); ++k) {
    for (std::size_t l = 0; l < t.n(); ++l) {
      if (k != l) out.lambdas.push_back(wrap_turns(t.thetas()[k] - t.thetas()[l]));
    }
  }
  std::sort(out.lambdas.begin(), out.lambdas.end());
  return out;
}

enum class RecoveryStatus { IsMinimizer, NotMinimizer };

inline const char* to_string(RecoveryStatus s) {
  return s == RecoveryStatus::IsMinimizer ? "IsMinimizer" : "NotMinimizer";
}

struct RecoveryResult {
  RecoveryStatus status = RecoveryStatus::NotMinimizer;
  double alpha_turns = 0.0;
  std::optional<pds::PerfectDifferenceSet> pds;
  double residual = 0.0;          // max |theta_k - theta_1 - j_k/m| in turns
  double profile_deviation = 0.0; // max_nu | |S(nu)| - sqrt(n-1) |
  std::string reason;             // why recovery failed, empty on success
};

inline constexpr double kDefaultRecoveryTol = 1e-6;

/// Decides whether t attains |S(nu)| = sqrt(n-1) for all nu = 1..n^2-n and,
/// if so, recovers the phase and the underlying perfect difference set by
/// snapping theta_k - theta_1 to the lattice (1/m) Z.
inline RecoveryResult recover_structure(const UnimodularTuple& t, double tol = kDefaultRecoveryTol) {
  RecoveryResult r;
  const std::size_t n = t.n();
  const auto profile = power_sums(t);
  const double target = std::sqrt(static_cast<double>(n) - 1.0);
  for (double v : profile.abs_values) r.profile_deviation = std::max(r.profile_deviation, std::abs(v - target));
  r.alpha_turns = wrap_turns(t.thetas()[0] + t.alpha_turns());
  if (r.profile_deviation > tol) {
    r.reason = "profile deviates from sqrt(n-1)";
    return r;
  }
  const std::int64_t m = horizon(n) + 1;
  const double md = static_cast<double>(m);
  std::vector<std::int64_t> lattice;
  lattice.reserve(n);
  for (double theta : t.thetas()) {
    const double shifted = wrap_turns(theta - t.thetas()[0]);
    const double j = std::round(shifted * md);
    r.residual = std::max(r.residual, std::abs(shifted - j / md));
    lattice.push_back(pds::reduce(static_cast<std::int64_t>(j), m));
  }
  if (r.residual > tol) {
    r.reason = "angles are not on the (1/m) lattice";
    return r;
  }
  const std::int64_t q = static_cast<std::int64_t>(n) - 1;
  if (!pds::verify(lattice, q).valid) {
    r.reason = "lattice points do not form a perfect difference set";
    return r;
  }
  r.pds = pds::make_pds(q, std::move(lattice));
  r.status = RecoveryStatus::IsMinimizer;
  return r;
}

}  // namespace powersum
