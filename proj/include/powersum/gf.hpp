#pragma once

/**
 * Finite field arithmetic GF(p) and GF(p^k).
 *
 * Elements of GF(p^k) are dense coefficient vectors (constant term first)
 * reduced modulo a fixed monic irreducible polynomial of degree k. The
 * modulus is the smallest irreducible when monic polynomials are ordered by
 * their integer code sum_i c_i p^i, so field construction is reproducible.
 *
 * SmallField / CubicExtension are table-driven variants used to build
 * GF(q^3) as an extension of GF(q) for q a prime power.
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "powersum/error.hpp"
#include "powersum/number_theory.hpp"

namespace powersum::gf {

using nt::u64;

/// Polynomial over GF(p), coefficients constant term first.
using Poly = std::vector<u64>;

inline constexpr int kMaxDegree = 12;

namespace poly {

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline Poly sub(Poly a, const Poly& b, u64 p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i] % p) % p;
  trim(a);
  return a;
}

/// Remainder of a modulo b (b nonzero) over GF(p).
inline Poly rem(Poly a, const Poly& b, u64 p) {
  trim(a);
  const int db = degree(b);
  const u64 lead_inv = nt::pow_mod(b.back(), p - 2, p);
  while (degree(a) >= db) {
    const int shift = degree(a) - db;
    const u64 factor = nt::mul_mod(a.back(), lead_inv, p);
    for (int i = 0; i <= db; ++i) {
      const u64 t = nt::mul_mod(factor, b[i], p);
      a[i + shift] = (a[i + shift] + p - t) % p;
    }
    trim(a);
  }
  return a;
}

inline Poly mul_mod(const Poly& a, const Poly& b, const Poly& f, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = (out[i + j] + nt::mul_mod(a[i], b[j], p)) % p;
    }
  }
  return rem(std::move(out), f, p);
}

inline Poly pow_mod(Poly base, u64 exp, const Poly& f, u64 p) {
  Poly result{1};
  result = rem(result, f, p);
  base = rem(std::move(base), f, p);
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, f, p);
    base = mul_mod(base, base, f, p);
    exp >>= 1;
  }
  return result;
}

inline Poly gcd(Poly a, Poly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace poly

/// True iff the monic polynomial has no nontrivial factor over GF(p).
///
/// Ben-Or style factor-degree test: a degree-d polynomial f is irreducible
/// iff gcd(x^(p^i) - x, f) = 1 for every 1 <= i <= d/2.
inline bool is_irreducible(const Poly& f_in, u64 p) {
  if (!nt::is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  Poly f = f_in;
  for (auto& c : f) c %= p;
  poly::trim(f);
  if (f.empty() || f.back() != 1) throw Error(ErrorCode::NotMonic, "polynomial must be monic");
  const int d = poly::degree(f);
  if (d < 1) throw Error(ErrorCode::NotMonic, "polynomial must have degree >= 1");
  if (d == 1) return true;
  const Poly x{0, 1};
  Poly h = x;
  for (int i = 1; i <= d / 2; ++i) {
    h = poly::pow_mod(h, p, f, p);
    Poly g = poly::gcd(f, poly::sub(h, x, p), p);
    if (poly::degree(g) > 0) return false;
  }
  return true;
}

class GfField {
 public:
  u64 p() const { return data_->p; }
  int k() const { return data_->k; }
  /// Monic modulus, constant term first. Empty for prime fields (k = 1),
  /// which use plain mod-p arithmetic.
  const Poly& modulus_poly() const { return data_->modulus; }
  u64 order() const { return data_->order; }

  friend bool operator==(const GfField& a, const GfField& b) {
    return a.data_ == b.data_ ||
           (a.p() == b.p() && a.k() == b.k() && a.modulus_poly() == b.modulus_poly());
  }

 private:
  struct Data {
    u64 p;
    int k;
    Poly modulus;
    u64 order;
  };
  explicit GfField(Data d) : data_(std::make_shared<const Data>(std::move(d))) {}
  std::shared_ptr<const Data> data_;

  friend GfField make_field(u64 p, int k);
};

/// Builds GF(p^k) with the smallest irreducible modulus. k is capped at 12.
inline GfField make_field(u64 p, int k) {
  if (!nt::is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  if (k < 1 || k > kMaxDegree) {
    throw Error(ErrorCode::DegreeOutOfRange, "extension degree must be in [1, 12]");
  }
  auto order = nt::checked_pow(p, k);
  if (!order) throw Error(ErrorCode::OrderTooLarge, "p^k does not fit in 64 bits");
  if (k == 1) return GfField({p, 1, {}, p});

  const u64 lower_count = *nt::checked_pow(p, k);
  for (u64 code = 0; code < lower_count; ++code) {
    Poly f(k + 1, 0);
    u64 c = code;
    for (int i = 0; i < k; ++i) {
      f[i] = c % p;
      c /= p;
    }
    f[k] = 1;
    if (f[0] == 0) continue;  // divisible by x
    if (is_irreducible(f, p)) return GfField({p, k, std::move(f), *order});
  }
  throw Error(ErrorCode::NoIrreducibleFound, "internal: no irreducible polynomial found");
}

class GfElement {
 public:
  GfElement(GfField field, std::vector<u64> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) > field_.k()) {
      throw Error(ErrorCode::InvalidArgument, "too many coefficients for field degree");
    }
    coeffs_.resize(field_.k(), 0);
    for (auto& c : coeffs_) c %= field_.p();
  }

  static GfElement zero(const GfField& f) { return {f, {}}; }
  static GfElement one(const GfField& f) { return {f, {1}}; }

  /// Element with integer code sum_i c_i p^i.
  static GfElement from_index(const GfField& f, u64 index) {
    std::vector<u64> c(f.k(), 0);
    for (int i = 0; i < f.k(); ++i) {
      c[i] = index % f.p();
      index /= f.p();
    }
    return {f, std::move(c)};
  }

  u64 index() const {
    u64 out = 0;
    for (int i = field_.k() - 1; i >= 0; --i) out = out * field_.p() + coeffs_[i];
    return out;
  }

  const GfField& field() const { return field_; }
  const std::vector<u64>& coeffs() const { return coeffs_; }
  bool is_zero() const {
    for (u64 c : coeffs_) {
      if (c != 0) return false;
    }
    return true;
  }
  bool is_one() const { return coeffs_[0] == 1 && std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](u64 c) { return c == 0; }); }

  friend bool operator==(const GfElement& a, const GfElement& b) {
    return a.field_ == b.field_ && a.coeffs_ == b.coeffs_;
  }

  friend std::ostream& operator<<(std::ostream& os, const GfElement& a) {
    os << '[';
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) os << (i ? "," : "") << a.coeffs_[i];
    return os << ']';
  }

 private:
  GfField field_;
  std::vector<u64> coeffs_;
};

namespace detail {

inline void check_same(const GfElement& a, const GfElement& b) {
  if (!(a.field() == b.field())) throw Error(ErrorCode::FieldMismatch, "operands belong to different fields");
}

}  // namespace detail

inline GfElement add(const GfElement& a, const GfElement& b) {
  detail::check_same(a, b);
  const u64 p = a.field().p();
  std::vector<u64> c(a.coeffs().size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (a.coeffs()[i] + b.coeffs()[i]) % p;
  return {a.field(), std::move(c)};
}

inline GfElement neg(const GfElement& a) {
  const u64 p = a.field().p();
  std::vector<u64> c(a.coeffs().size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (p - a.coeffs()[i]) % p;
  return {a.field(), std::move(c)};
}

inline GfElement sub(const GfElement& a, const GfElement& b) {
  detail::check_same(a, b);
  return add(a, neg(b));
}

inline GfElement mul(const GfElement& a, const GfElement& b) {
  detail::check_same(a, b);
  const GfField& f = a.field();
  const u64 p = f.p();
  if (f.k() == 1) return {f, {nt::mul_mod(a.coeffs()[0], b.coeffs()[0], p)}};
  Poly r = poly::mul_mod(a.coeffs(), b.coeffs(), f.modulus_poly(), p);
  return {f, std::move(r)};
}

inline GfElement pow(GfElement base, u64 exp) {
  GfElement result = GfElement::one(base.field());
  while (exp > 0) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

inline GfElement inv(const GfElement& a) {
  if (a.is_zero()) throw Error(ErrorCode::DivisionByZero, "zero has no inverse");
  return pow(a, a.field().order() - 2);
}

inline GfElement div(const GfElement& a, const GfElement& b) { return mul(a, inv(b)); }

inline GfElement operator+(const GfElement& a, const GfElement& b) { return add(a, b); }
inline GfElement operator-(const GfElement& a, const GfElement& b) { return sub(a, b); }
inline GfElement operator-(const GfElement& a) { return neg(a); }
inline GfElement operator*(const GfElement& a, const GfElement& b) { return mul(a, b); }
inline GfElement operator/(const GfElement& a, const GfElement& b) { return div(a, b); }

/// Multiplicative order of a nonzero element; divides p^k - 1.
inline u64 element_order(const GfElement& a) {
  if (a.is_zero()) throw Error(ErrorCode::DivisionByZero, "zero has no multiplicative order");
  const u64 group = a.field().order() - 1;
  u64 t = group;
  for (u64 r : nt::distinct_prime_factors(group)) {
    while (t % r == 0 && pow(a, t / r).is_one()) t /= r;
  }
  return t;
}

/// Least generator of the multiplicative group, scanning integer codes
/// upward from 2. GF(2) returns 1.
inline GfElement primitive_element(const GfField& f) {
  if (f.order() == 2) return GfElement::one(f);
  const u64 group = f.order() - 1;
  const auto primes = nt::distinct_prime_factors(group);
  for (u64 idx = 2; idx < f.order(); ++idx) {
    GfElement g = GfElement::from_index(f, idx);
    bool generator = true;
    for (u64 r : primes) {
      if (pow(g, group / r).is_one()) {
        generator = false;
        break;
      }
    }
    if (generator) return g;
  }
  throw Error(ErrorCode::InvalidArgument, "internal: no primitive element found");
}

/// GF(q) with precomputed operation tables over element codes 0..q-1.
/// Intended for q small enough that q*q tables are cheap (q <= 4096).
class SmallField {
 public:
  explicit SmallField(const GfField& f) : field_(f), q_(static_cast<std::uint32_t>(f.order())) {
    if (f.order() > 4096) throw Error(ErrorCode::OrderTooLarge, "SmallField supports q <= 4096");
    add_.resize(std::size_t{q_} * q_);
    mul_.resize(std::size_t{q_} * q_);
    std::vector<GfElement> elems;
    elems.reserve(q_);
    for (std::uint32_t i = 0; i < q_; ++i) elems.push_back(GfElement::from_index(f, i));
    for (std::uint32_t i = 0; i < q_; ++i) {
      for (std::uint32_t j = 0; j < q_; ++j) {
        add_[i * q_ + j] = static_cast<std::uint32_t>((elems[i] + elems[j]).index());
        mul_[i * q_ + j] = static_cast<std::uint32_t>((elems[i] * elems[j]).index());
      }
    }
    neg_.resize(q_);
    inv_.assign(q_, 0);
    for (std::uint32_t i = 0; i < q_; ++i) {
      for (std::uint32_t j = 0; j < q_; ++j) {
        if (add_[i * q_ + j] == 0) neg_[i] = j;
        if (mul_[i * q_ + j] == 1) inv_[i] = j;
      }
    }
  }

  std::uint32_t order() const { return q_; }
  const GfField& field() const { return field_; }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return add_[a * q_ + b]; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return mul_[a * q_ + b]; }
  std::uint32_t neg(std::uint32_t a) const { return neg_[a]; }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
  std::uint32_t inv(std::uint32_t a) const {
    if (a == 0) throw Error(ErrorCode::DivisionByZero, "zero has no inverse");
    return inv_[a];
  }

 private:
  GfField field_;
  std::uint32_t q_;
  std::vector<std::uint32_t> add_, mul_, neg_, inv_;
};

/// GF(q^3) as GF(q)[y]/(g(y)) for the smallest irreducible monic cubic g.
/// Elements are coefficient triples of base-field codes, constant first;
/// the integer code of an element is c0 + c1 q + c2 q^2.
class CubicExtension {
 public:
  using Element = std::array<std::uint32_t, 3>;

  explicit CubicExtension(SmallField base) : base_(std::move(base)) {
    const std::uint32_t q = base_.order();
    // A cubic is irreducible iff it has no root in the base field.
    for (std::uint64_t code = 0; code < std::uint64_t{q} * q * q; ++code) {
      Element g{static_cast<std::uint32_t>(code % q), static_cast<std::uint32_t>((code / q) % q),
                static_cast<std::uint32_t>(code / q / q)};
      if (!has_root(g)) {
        modulus_ = g;
        return;
      }
    }
    throw Error(ErrorCode::NoIrreducibleFound, "internal: no irreducible cubic found");
  }

  const SmallField& base() const { return base_; }
  /// Lower coefficients of the monic modulus y^3 + m2 y^2 + m1 y + m0.
  const Element& modulus() const { return modulus_; }
  std::uint64_t order() const {
    const std::uint64_t q = base_.order();
    return q * q * q;
  }

  std::uint64_t index(const Element& a) const {
    const std::uint64_t q = base_.order();
    return a[0] + q * (a[1] + q * a[2]);
  }
  Element from_index(std::uint64_t idx) const {
    const std::uint32_t q = base_.order();
    return {static_cast<std::uint32_t>(idx % q), static_cast<std::uint32_t>((idx / q) % q),
            static_cast<std::uint32_t>(idx / q / q)};
  }

  Element add(const Element& a, const Element& b) const {
    return {base_.add(a[0], b[0]), base_.add(a[1], b[1]), base_.add(a[2], b[2])};
  }

  Element mul(const Element& a, const Element& b) const {
    std::array<std::uint32_t, 5> prod{};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) prod[i + j] = base_.add(prod[i + j], base_.mul(a[i], b[j]));
    }
    // y^3 = -(m2 y^2 + m1 y + m0)
    for (int d = 4; d >= 3; --d) {
      const std::uint32_t c = prod[d];
      if (c == 0) continue;
      prod[d] = 0;
      for (int i = 0; i < 3; ++i) prod[d - 3 + i] = base_.sub(prod[d - 3 + i], base_.mul(c, modulus_[i]));
    }
    return {prod[0], prod[1], prod[2]};
  }

  Element pow(Element base, std::uint64_t exp) const {
    Element result{1, 0, 0};
    while (exp > 0) {
      if (exp & 1) result = mul(result, base);
      base = mul(base, base);
      exp >>= 1;
    }
    return result;
  }

  /// Least generator of GF(q^3)* by integer code.
  Element primitive_element() const {
    const std::uint64_t group = order() - 1;
    const auto primes = nt::distinct_prime_factors(group);
    const Element one{1, 0, 0};
    for (std::uint64_t idx = 2; idx < order(); ++idx) {
      const Element g = from_index(idx);
      bool generator = true;
      for (auto r : primes) {
        if (pow(g, group / r) == one) {
          generator = false;
          break;
        }
      }
      if (generator) return g;
    }
    throw Error(ErrorCode::InvalidArgument, "internal: no primitive element found");
  }

 private:
  bool has_root(const Element& g) const {
    for (std::uint32_t x = 0; x < base_.order(); ++x) {
      // ((x + m2) x + m1) x + m0
      std::uint32_t v = base_.add(x, g[2]);
      v = base_.add(base_.mul(v, x), g[1]);
      v = base_.add(base_.mul(v, x), g[0]);
      if (v == 0) return true;
    }
    return false;
  }

  SmallField base_;
  Element modulus_{};
};

}  // namespace powersum::gf
