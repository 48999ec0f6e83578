#pragma once

/**
 * Perfect difference sets of order q: q+1 residues modulo m = q^2+q+1 whose
 * ordered pairwise differences cover every nonzero residue exactly once.
 *
 * Provides exact verification with a witness on failure, the Singer
 * construction from GF(q^3), canonical forms under the affine group
 * a -> u*a + t, exhaustive backtracking search, and the congruence tests
 * that rule out orders.
 */

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "powersum/error.hpp"
#include "powersum/gf.hpp"
#include "powersum/number_theory.hpp"

namespace powersum::pds {

/// Largest order accepted by singer_construct.
inline constexpr std::int64_t kMaxSingerOrder = 32;
inline constexpr std::uint64_t kDefaultSearchBudget = 100'000'000;

inline std::int64_t modulus_for_order(std::int64_t q) { return q * q + q + 1; }

/// Order q with q^2+q+1 = m, if one exists.
inline std::optional<std::int64_t> order_for_modulus(std::int64_t m) {
  for (std::int64_t q = 1; q * q + q + 1 <= m; ++q) {
    if (q * q + q + 1 == m) return q;
  }
  return std::nullopt;
}

struct PerfectDifferenceSet {
  std::int64_t q = 0;
  std::int64_t m = 0;
  std::vector<std::int64_t> residues;  // sorted, distinct, in [0, m)

  friend bool operator==(const PerfectDifferenceSet&, const PerfectDifferenceSet&) = default;
};

struct Witness {
  enum class Kind { WrongSize, DuplicateResidue, RepeatedDifference, MissingDifference };
  Kind kind;
  std::int64_t value;  // offending size, residue or difference
};

inline const char* to_string(Witness::Kind k) {
  switch (k) {
    case Witness::Kind::WrongSize: return "wrong_size";
    case Witness::Kind::DuplicateResidue: return "duplicate_residue";
    case Witness::Kind::RepeatedDifference: return "repeated_difference";
    case Witness::Kind::MissingDifference: return "missing_difference";
  }
  return "unknown";
}

struct VerifyResult {
  bool valid = false;
  std::optional<Witness> witness;

  explicit operator bool() const { return valid; }
};

inline std::int64_t reduce(std::int64_t a, std::int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

/// Checks the defining property directly from the difference multiset.
/// On failure the witness is the first problem found: size, then the
/// smallest duplicated residue, then the smallest doubly covered
/// difference, then the smallest missing one.
inline VerifyResult verify(std::span<const std::int64_t> candidate, std::int64_t q) {
  if (q < 1) return {false, Witness{Witness::Kind::WrongSize, static_cast<std::int64_t>(candidate.size())}};
  const std::int64_t m = modulus_for_order(q);
  if (static_cast<std::int64_t>(candidate.size()) != q + 1) {
    return {false, Witness{Witness::Kind::WrongSize, static_cast<std::int64_t>(candidate.size())}};
  }
  std::vector<std::int64_t> r;
  r.reserve(candidate.size());
  for (auto a : candidate) r.push_back(reduce(a, m));
  std::sort(r.begin(), r.end());
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (r[i] == r[i - 1]) return {false, Witness{Witness::Kind::DuplicateResidue, r[i]}};
  }
  std::vector<int> count(m, 0);
  for (auto a : r) {
    for (auto b : r) {
      if (a != b) ++count[reduce(a - b, m)];
    }
  }
  for (std::int64_t d = 1; d < m; ++d) {
    if (count[d] > 1) return {false, Witness{Witness::Kind::RepeatedDifference, d}};
  }
  for (std::int64_t d = 1; d < m; ++d) {
    if (count[d] == 0) return {false, Witness{Witness::Kind::MissingDifference, d}};
  }
  return {true, std::nullopt};
}

inline VerifyResult verify(const PerfectDifferenceSet& d) { return verify(d.residues, d.q); }

/// Validated constructor: reduces mod m, sorts, and throws InvalidPds when
/// the residues do not form a perfect difference set of order q.
inline PerfectDifferenceSet make_pds(std::int64_t q, std::vector<std::int64_t> residues) {
  auto res = verify(residues, q);
  if (!res.valid) {
    throw Error(ErrorCode::InvalidPds, std::string("not a perfect difference set (") +
                                           to_string(res.witness->kind) + " " +
                                           std::to_string(res.witness->value) + ")");
  }
  const std::int64_t m = modulus_for_order(q);
  for (auto& a : residues) a = reduce(a, m);
  std::sort(residues.begin(), residues.end());
  return {q, m, std::move(residues)};
}

/// Singer construction: with theta primitive in GF(q^3), the exponents i
/// (mod q^2+q+1) for which theta^i lies in the GF(q)-span of {1, theta}.
inline PerfectDifferenceSet singer_construct(std::int64_t q) {
  auto pp = nt::as_prime_power(q < 0 ? 0 : static_cast<std::uint64_t>(q));
  if (!pp) throw Error(ErrorCode::NotPrimePower, std::to_string(q) + " is not a prime power");
  if (q > kMaxSingerOrder) throw Error(ErrorCode::OrderTooLarge, "Singer construction is capped at q <= 32");

  gf::SmallField base(gf::make_field(pp->prime, pp->exponent));
  gf::CubicExtension ext(base);
  const auto theta = ext.primitive_element();
  const std::uint64_t group = ext.order() - 1;
  const std::int64_t m = modulus_for_order(q);

  // Discrete logarithm table over the whole multiplicative group.
  std::vector<std::int64_t> log(ext.order(), -1);
  gf::CubicExtension::Element power{1, 0, 0};
  for (std::uint64_t i = 0; i < group; ++i) {
    log[ext.index(power)] = static_cast<std::int64_t>(i);
    power = ext.mul(power, theta);
  }

  // Enumerate c0 + c1*theta over all (c0, c1) != (0, 0).
  std::vector<bool> in_line(m, false);
  const std::uint32_t qq = base.order();
  for (std::uint32_t c0 = 0; c0 < qq; ++c0) {
    for (std::uint32_t c1 = 0; c1 < qq; ++c1) {
      if (c0 == 0 && c1 == 0) continue;
      gf::CubicExtension::Element v = ext.mul({c1, 0, 0}, theta);
      v = ext.add(v, {c0, 0, 0});
      const auto l = log[ext.index(v)];
      in_line[l % m] = true;
    }
  }
  std::vector<std::int64_t> residues;
  for (std::int64_t i = 0; i < m; ++i) {
    if (in_line[i]) residues.push_back(i);
  }
  auto res = verify(residues, q);
  if (!res.valid) throw Error(ErrorCode::InvalidPds, "internal: Singer output failed verification");
  return {q, m, std::move(residues)};
}

/// Lex-least sorted representative of {u*D + t : gcd(u, m) = 1, t in Z_m}.
struct CanonicalForm {
  std::int64_t q = 0;
  std::int64_t m = 0;
  std::vector<std::int64_t> residues;

  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
  friend auto operator<=>(const CanonicalForm& a, const CanonicalForm& b) {
    return a.residues <=> b.residues;
  }
};

inline std::vector<std::int64_t> affine_image(std::span<const std::int64_t> residues, std::int64_t u, std::int64_t t,
                                              std::int64_t m) {
  std::vector<std::int64_t> out;
  out.reserve(residues.size());
  for (auto a : residues) out.push_back(reduce(u * a + t, m));
  std::sort(out.begin(), out.end());
  return out;
}

inline CanonicalForm canonical_form(const PerfectDifferenceSet& d) {
  if (!verify(d).valid) throw Error(ErrorCode::InvalidPds, "canonical_form requires a verified set");
  const std::int64_t m = d.m;
  std::vector<std::int64_t> best;
  for (auto u : nt::units_mod(static_cast<std::uint64_t>(m))) {
    std::vector<std::int64_t> scaled;
    scaled.reserve(d.residues.size());
    for (auto a : d.residues) scaled.push_back(reduce(static_cast<std::int64_t>(u) * a, m));
    // Only translations that move some element to 0 can be lex-least.
    for (auto a : scaled) {
      auto img = affine_image(scaled, 1, m - a, m);
      if (best.empty() || img < best) best = std::move(img);
    }
  }
  return {d.q, m, std::move(best)};
}

inline PerfectDifferenceSet to_pds(const CanonicalForm& c) { return {c.q, c.m, c.residues}; }

// ---------------------------------------------------------------------------
// Exhaustive search

enum class SearchStatus { Found, NoneExists, BudgetExceeded };

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "Found";
    case SearchStatus::NoneExists: return "NoneExists";
    case SearchStatus::BudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

struct SearchResult {
  SearchStatus status = SearchStatus::NoneExists;
  std::optional<PerfectDifferenceSet> set;
  std::uint64_t nodes = 0;
};

namespace detail {

/// Backtracking over increasing residues with 0 and 1 fixed. Every perfect
/// difference set has a translate containing {0, 1}: difference 1 occurs,
/// so shift the pair realizing it to (0, 1). The tree therefore covers
/// every set up to translation.
class Backtracker {
 public:
  Backtracker(std::int64_t q, std::uint64_t budget, const std::atomic<bool>* cancel = nullptr)
      : q_(q), m_(modulus_for_order(q)), budget_(budget), cancel_(cancel) {
    covered_.assign(m_, 0);
    chosen_.reserve(q + 1);
  }

  std::uint64_t nodes() const { return nodes_; }
  bool budget_exceeded() const { return exceeded_; }
  bool cancelled() const { return cancelled_; }

  /// Places {0, 1}; returns false if that alone is inconsistent (m <= 2).
  bool seed() {
    chosen_.clear();
    std::fill(covered_.begin(), covered_.end(), 0);
    chosen_.push_back(0);
    if (q_ + 1 == 1) return true;
    return try_place(1);
  }

  /// Runs the subtree under the current prefix. The visitor receives each
  /// complete set and returns false to stop.
  template <class Visitor>
  bool run(Visitor&& visit) {
    return descend(visit);
  }

  /// Try element c on top of the current prefix; undone with pop().
  bool try_place(std::int64_t c) {
    marks_.clear();
    for (auto a : chosen_) {
      const std::int64_t d1 = reduce(c - a, m_);
      const std::int64_t d2 = m_ - d1;
      if (covered_[d1] || covered_[d2] || d1 == d2) {
        for (auto d : marks_) covered_[d] = 0;
        return false;
      }
      covered_[d1] = 1;
      covered_[d2] = 1;
      marks_.push_back(d1);
      marks_.push_back(d2);
    }
    chosen_.push_back(c);
    return true;
  }

  void pop() {
    const std::int64_t c = chosen_.back();
    chosen_.pop_back();
    for (auto a : chosen_) {
      const std::int64_t d1 = reduce(c - a, m_);
      covered_[d1] = 0;
      covered_[m_ - d1] = 0;
    }
  }

  const std::vector<std::int64_t>& chosen() const { return chosen_; }

 private:
  bool tick() {
    if (++nodes_ > budget_) {
      exceeded_ = true;
      return false;
    }
    if (cancel_ != nullptr && (nodes_ & 1023) == 0 && cancel_->load(std::memory_order_relaxed)) {
      cancelled_ = true;
      return false;
    }
    return true;
  }

  template <class Visitor>
  bool descend(Visitor& visit) {
    const std::int64_t need = q_ + 1 - static_cast<std::int64_t>(chosen_.size());
    if (need == 0) return visit(chosen_);
    const std::int64_t start = chosen_.back() + 1;
    const std::int64_t stop = m_ - need;  // leave room for the rest
    for (std::int64_t c = start; c <= stop; ++c) {
      if (!tick()) return false;
      if (!try_place(c)) continue;
      const bool keep_going = descend(visit);
      pop();
      if (!keep_going) return false;
    }
    return true;
  }

  std::int64_t q_, m_;
  std::uint64_t budget_;
  const std::atomic<bool>* cancel_;
  std::vector<char> covered_;
  std::vector<std::int64_t> chosen_;
  std::vector<std::int64_t> marks_;
  std::uint64_t nodes_ = 0;
  bool exceeded_ = false;
  bool cancelled_ = false;
};

inline SearchResult sequential_search(std::int64_t q, std::uint64_t budget) {
  Backtracker bt(q, budget);
  SearchResult out;
  if (!bt.seed()) {
    out.status = SearchStatus::NoneExists;
    return out;
  }
  bt.run([&](const std::vector<std::int64_t>& s) {
    out.set = PerfectDifferenceSet{q, modulus_for_order(q), s};
    return false;
  });
  out.nodes = bt.nodes();
  if (out.set) {
    out.status = SearchStatus::Found;
  } else if (bt.budget_exceeded()) {
    out.status = SearchStatus::BudgetExceeded;
  } else {
    out.status = SearchStatus::NoneExists;
  }
  return out;
}

/// Splits the tree on the third element and searches the subtrees on a
/// pool of threads, each with its own node counter. The merge replays the
/// subtrees in ascending order against the budget, so status, set and node
/// count are exactly those of sequential_search.
inline SearchResult parallel_search(std::int64_t q, std::uint64_t budget, unsigned workers) {
  const std::int64_t m = modulus_for_order(q);
  if (q < 2) return sequential_search(q, budget);
  const std::int64_t first = 2;
  const std::int64_t last = m - (q + 1 - 2);
  const std::size_t count = last >= first ? static_cast<std::size_t>(last - first + 1) : 0;

  struct Slot {
    bool ran = false;
    bool complete = false;     // subtree exhausted or a set found
    std::uint64_t nodes = 0;   // including the node for the third element
    std::optional<std::vector<std::int64_t>> found;
    std::atomic<bool> cancel{false};
  };
  std::vector<Slot> slots(count);
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t best_found = count;

  // Nodes of finished subtrees below i: a lower bound on what the
  // sequential search spends before reaching subtree i.
  auto known_prefix = [&](std::size_t i) {
    std::uint64_t sum = 0;
    for (std::size_t j = 0; j < i; ++j) {
      if (slots[j].ran) sum += slots[j].nodes;
    }
    return sum;
  };

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      std::uint64_t local_budget = 0;
      {
        std::lock_guard lock(mu);
        const std::uint64_t before = known_prefix(i);
        if (i > best_found || before >= budget) continue;
        local_budget = budget - before;
      }
      Slot& slot = slots[i];
      Backtracker bt(q, local_budget, &slot.cancel);
      bt.seed();
      std::optional<std::vector<std::int64_t>> found;
      if (bt.try_place(first + static_cast<std::int64_t>(i))) {
        bt.run([&](const std::vector<std::int64_t>& s) {
          found = s;
          return false;
        });
      }
      std::lock_guard lock(mu);
      slot.ran = true;
      slot.nodes = 1 + bt.nodes();
      slot.complete = !bt.budget_exceeded() && !bt.cancelled();
      slot.found = std::move(found);
      if (slot.found && i < best_found) {
        best_found = i;
        for (std::size_t j = i + 1; j < count; ++j) slots[j].cancel = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::max(1u, workers); ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  SearchResult out;
  std::uint64_t spent = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const Slot& slot = slots[i];
    if (!slot.ran || !slot.complete || spent + slot.nodes > budget) {
      out.status = SearchStatus::BudgetExceeded;
      out.nodes = budget + 1;
      return out;
    }
    spent += slot.nodes;
    if (slot.found) {
      out.status = SearchStatus::Found;
      out.set = PerfectDifferenceSet{q, m, *slot.found};
      out.nodes = spent;
      return out;
    }
  }
  out.status = SearchStatus::NoneExists;
  out.nodes = spent;
  return out;
}

}  // namespace detail

/// First perfect difference set of order q in the normalized tree, or a
/// proof of nonexistence when the tree is exhausted within budget nodes.
inline SearchResult exhaustive_search(std::int64_t q, std::uint64_t budget = kDefaultSearchBudget,
                                      unsigned workers = 1) {
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "order must be >= 1");
  if (workers <= 1) return detail::sequential_search(q, budget);
  return detail::parallel_search(q, budget, workers);
}

struct EnumerationResult {
  bool complete = false;
  std::vector<PerfectDifferenceSet> sets;  // every set containing {0, 1}
  std::uint64_t nodes = 0;
};

/// Every perfect difference set of order q that contains 0 and 1.
inline EnumerationResult enumerate_normalized(std::int64_t q, std::uint64_t budget = kDefaultSearchBudget) {
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "order must be >= 1");
  detail::Backtracker bt(q, budget);
  EnumerationResult out;
  const std::int64_t m = modulus_for_order(q);
  if (bt.seed()) {
    bt.run([&](const std::vector<std::int64_t>& s) {
      out.sets.push_back({q, m, s});
      return true;
    });
  }
  out.nodes = bt.nodes();
  out.complete = !bt.budget_exceeded();
  return out;
}

// ---------------------------------------------------------------------------
// Order feasibility

/// Nonexistence test for orders n = 1, 2 (mod 4) that are not a sum of two squares.
inline bool bruck_ryser_excludes(std::int64_t order) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "order must be >= 1");
  const auto r = order % 4;
  if (r != 1 && r != 2) return false;
  return !nt::is_sum_of_two_squares(static_cast<std::uint64_t>(order));
}

/// Nonexistence test for orders n >= 6 with n = 3, 6 (mod 9).
inline bool wilbrink_excludes(std::int64_t order) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "order must be >= 1");
  const auto r = order % 9;
  return order >= 6 && (r == 3 || r == 6);
}

enum class ExhaustiveOutcome { Found, NoneExists, BudgetExceeded, NotAttempted };
enum class Verdict { Exists, Excluded, OpenByTheseTests };

inline const char* to_string(ExhaustiveOutcome o) {
  switch (o) {
    case ExhaustiveOutcome::Found: return "Found";
    case ExhaustiveOutcome::NoneExists: return "NoneExists";
    case ExhaustiveOutcome::BudgetExceeded: return "BudgetExceeded";
    case ExhaustiveOutcome::NotAttempted: return "NotAttempted";
  }
  return "Unknown";
}

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Exists: return "Exists";
    case Verdict::Excluded: return "Excluded";
    case Verdict::OpenByTheseTests: return "OpenByTheseTests";
  }
  return "Unknown";
}

struct FeasibilityReport {
  std::int64_t order = 0;
  bool is_prime_power = false;
  bool bruck_ryser_excludes = false;
  bool wilbrink_excludes = false;
  ExhaustiveOutcome exhaustive_result = ExhaustiveOutcome::NotAttempted;
  std::uint64_t search_nodes = 0;
  /// Found set, or the Singer set for prime-power orders within the Singer cap.
  std::optional<PerfectDifferenceSet> example;
  Verdict verdict = Verdict::OpenByTheseTests;
  /// Names of the tests that decided the verdict.
  std::vector<std::string> reasons;
};

/// Combines the prime-power test, both congruence tests and (for orders
/// that are not prime powers, when search_budget > 0) exhaustive search.
inline FeasibilityReport feasibility(std::int64_t order, std::uint64_t search_budget = kDefaultSearchBudget,
                                     unsigned workers = 1) {
  if (order < 1) throw Error(ErrorCode::InvalidArgument, "order must be >= 1");
  FeasibilityReport r;
  r.order = order;
  r.is_prime_power = nt::is_prime_power(static_cast<std::uint64_t>(order));
  r.bruck_ryser_excludes = bruck_ryser_excludes(order);
  r.wilbrink_excludes = wilbrink_excludes(order);

  if (r.is_prime_power) {
    if (order <= kMaxSingerOrder) r.example = singer_construct(order);
  } else if (search_budget > 0) {
    auto s = exhaustive_search(order, search_budget, workers);
    r.search_nodes = s.nodes;
    switch (s.status) {
      case SearchStatus::Found:
        r.exhaustive_result = ExhaustiveOutcome::Found;
        r.example = s.set;
        break;
      case SearchStatus::NoneExists: r.exhaustive_result = ExhaustiveOutcome::NoneExists; break;
      case SearchStatus::BudgetExceeded: r.exhaustive_result = ExhaustiveOutcome::BudgetExceeded; break;
    }
  }

  const bool exists = r.is_prime_power || r.exhaustive_result == ExhaustiveOutcome::Found;
  const bool excluded =
      r.bruck_ryser_excludes || r.wilbrink_excludes || r.exhaustive_result == ExhaustiveOutcome::NoneExists;
  if (exists && excluded) {
    throw Error(ErrorCode::InvalidArgument, "internal: contradictory feasibility tests for order " +
                                                std::to_string(order));
  }
  if (r.is_prime_power) r.reasons.push_back("prime-power");
  if (r.exhaustive_result == ExhaustiveOutcome::Found) r.reasons.push_back("search-found");
  if (r.bruck_ryser_excludes) r.reasons.push_back("bruck-ryser");
  if (r.wilbrink_excludes) r.reasons.push_back("wilbrink");
  if (r.exhaustive_result == ExhaustiveOutcome::NoneExists) r.reasons.push_back("exhaustive-search");
  r.verdict = exists ? Verdict::Exists : excluded ? Verdict::Excluded : Verdict::OpenByTheseTests;
  return r;
}

}  // namespace powersum::pds
