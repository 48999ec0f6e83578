// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "oracles.hpp"
#include "powersum/minimax.hpp"
#include "powersum/pds.hpp"
#include "powersum/power_sums.hpp"

using namespace powersum;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void run(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] %d %s (%.2fs)%s%s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.empty() ? "" : ": ",
              o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::vector<double> random_angles(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> th(n);
  for (auto& t : th) t = uni(rng);
  return th;
}

}  // namespace

int main() {
  run(1, "singer sets give tuples with max|S| = sqrt(q)", [] {
    for (std::int64_t q : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16}) {
      const auto d = pds::singer_construct(q);
      if (!oracle::is_perfect_difference_set(d.residues, q)) return Outcome{false, "q=" + std::to_string(q) + " invalid"};
      const double v = minimax::objective(fabrykowski_tuple(d, 0.123));
      if (std::abs(v - std::sqrt(static_cast<double>(q))) > 1e-9) {
        return Outcome{false, "q=" + std::to_string(q) + " max|S|=" + std::to_string(v)};
      }
    }
    return Outcome{true, "10 orders"};
  });

  run(2, "exact |S(nu)|^2 = q for every nu", [] {
    for (std::int64_t q : {2, 3, 4, 5, 7, 8, 9}) {
      const auto d = pds::singer_construct(q);
      const auto t = fabrykowski_tuple(d);
      for (std::int64_t nu = 1; nu < d.m; ++nu) {
        if (exact_abs_squared(d, nu) != q) return Outcome{false, "exact value wrong at q=" + std::to_string(q)};
        const double fl = std::norm(oracle::power_sum(t.thetas(), 0.0, nu));
        if (std::abs(fl - static_cast<double>(q)) > 1e-9) return Outcome{false, "float disagrees"};
      }
    }
    return Outcome{true, ""};
  });

  run(3, "random tuples never beat sqrt(n-1)", [] {
    std::mt19937_64 rng(2024);
    double worst = INFINITY;
    for (int i = 0; i < 10000; ++i) {
      const std::size_t n = 2 + static_cast<std::size_t>(i % 7);
      const UnimodularTuple t(random_angles(rng, n));
      const double gap = minimax::objective(t) - std::sqrt(n - 1.0);
      worst = std::min(worst, gap);
      if (gap < -1e-9) return Outcome{false, "violation at n=" + std::to_string(n)};
      if (!fejer_certificate(t).holds()) return Outcome{false, "certificate failed"};
    }
    return Outcome{true, "10000 tuples, smallest gap " + std::to_string(worst)};
  });

  run(4, "recovery round trip and rejection of perturbed tuples", [] {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    int trips = 0;
    for (std::int64_t q : {2, 3, 4, 5, 7, 8, 9}) {
      const auto d = pds::singer_construct(q);
      const auto canon = pds::canonical_form(d);
      for (int i = 0; i < 100; ++i) {
        const double alpha = uni(rng);
        const auto r = recover_structure(fabrykowski_tuple(d, alpha));
        if (r.status != RecoveryStatus::IsMinimizer || !r.pds || pds::canonical_form(*r.pds) != canon) {
          return Outcome{false, "round trip failed at q=" + std::to_string(q)};
        }
        ++trips;
      }
      auto th = fabrykowski_tuple(d, 0.31).thetas();
      th[1] += 1e-3;
      if (recover_structure(UnimodularTuple(th)).status != RecoveryStatus::NotMinimizer) {
        return Outcome{false, "perturbed tuple accepted at q=" + std::to_string(q)};
      }
    }
    return Outcome{true, std::to_string(trips) + " round trips"};
  });

  run(5, "order 6 has no perfect difference set", [] {
    const auto r = pds::exhaustive_search(6);
    if (r.status != pds::SearchStatus::NoneExists) return Outcome{false, pds::to_string(r.status)};
    if (!pds::bruck_ryser_excludes(6) || !pds::wilbrink_excludes(6)) return Outcome{false, "tests disagree"};
    return Outcome{true, std::to_string(r.nodes) + " nodes"};
  });

  run(6, "enumeration finds only the singer class for q <= 5", [] {
    for (std::int64_t q : {2, 3, 4, 5}) {
      const auto e = pds::enumerate_normalized(q);
      if (!e.complete || e.sets.empty()) return Outcome{false, "incomplete at q=" + std::to_string(q)};
      const auto singer = pds::canonical_form(pds::singer_construct(q));
      std::set<std::vector<std::int64_t>> classes;
      for (const auto& s : e.sets) {
        if (!oracle::is_perfect_difference_set(s.residues, q)) return Outcome{false, "invalid set found"};
        classes.insert(pds::canonical_form(s).residues);
        const double v = minimax::objective(fabrykowski_tuple(s));
        if (std::abs(v - std::sqrt(static_cast<double>(q))) > 1e-9) return Outcome{false, "objective off"};
      }
      if (classes.size() != 1 || *classes.begin() != singer.residues) {
        return Outcome{false, "extra class at q=" + std::to_string(q)};
      }
    }
    return Outcome{true, ""};
  });

  run(7, "optimizer reaches the bound for n = 3, 5 and stays above it for n = 7", [] {
    std::string detail;
    for (auto [n, restarts] : {std::pair<std::size_t, std::size_t>{3, 50}, {5, 100}}) {
      minimax::OptimizerConfig c;
      c.n = n;
      c.restarts = restarts;
      c.seed = 1;
      const auto r = minimax::minimize(c);
      if (std::abs(r.best_value - std::sqrt(n - 1.0)) > 1e-5) {
        return Outcome{false, "n=" + std::to_string(n) + " best " + std::to_string(r.best_value)};
      }
      if (r.recovered.status != RecoveryStatus::IsMinimizer) return Outcome{false, "not recovered"};
      if (r.bound_violations != 0) return Outcome{false, "bound violated"};
    }
    minimax::OptimizerConfig c;
    c.n = 7;
    c.restarts = 200;
    c.seed = 1;
    const auto r = minimax::minimize(c);
    if (!(r.best_value > std::sqrt(6.0)) || r.bound_violations != 0) return Outcome{false, "n=7 beat sqrt(6)"};
    char buf[96];
    std::snprintf(buf, sizeof buf, "n=7 best %.9f, gap to sqrt(6) %.6f", r.best_value, r.gap_to_bound);
    return Outcome{true, buf};
  });

  run(8, "surrogate gradient matches finite differences", [] {
    std::mt19937_64 rng(8);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const std::size_t n = 2 + static_cast<std::size_t>(i % 7);
      const auto th = random_angles(rng, n);
      const double beta = 4.0 / static_cast<double>(n * n);
      const auto sv = minimax::smoothed_value_and_gradient(th, beta);
      auto f = [&](const std::vector<double>& x) { return minimax::smoothed_value_and_gradient(x, beta).value; };
      for (std::size_t k = 0; k < n; ++k) {
        const double fd = oracle::central_difference(f, th, k, 1e-6);
        const double rel = std::abs(sv.grad[k] - fd) / std::max(1.0, std::abs(fd));
        worst = std::max(worst, rel);
        if (rel > 1e-5) return Outcome{false, "relative error " + std::to_string(rel)};
      }
    }
    return Outcome{true, "worst relative error " + std::to_string(worst)};
  });

  std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASS" : "SOME CRITERIA FAILED");
  return failures == 0 ? 0 : 1;
}
