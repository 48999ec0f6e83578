#pragma once

// Multi-start numerical minimization of f(theta) = max_{nu=1..n^2-n} |S(nu)|
// over unimodular n-tuples. Each restart anneals a log-sum-exp surrogate of
// max |S(nu)|^2 with gradient descent, then polishes on the true objective.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "powersum/error.hpp"
#include "powersum/power_sums.hpp"

namespace powersum::minimax {

/// max_{nu=1..n^2-n} |S(nu)|.
inline double objective(const UnimodularTuple& t) { return power_sums(t).max_abs; }

/// |S(nu)|^2 for nu = 1..n^2-n and, optionally, d|S(nu)|^2 / d theta_k.
/// grad is row-major [nu][k].
struct SquaredProfile {
  std::vector<double> values;
  std::vector<double> grad;
  std::size_t n = 0;

  double max() const { return *std::max_element(values.begin(), values.end()); }
};

inline SquaredProfile squared_profile(std::span<const double> thetas, bool with_grad) {
  const std::size_t n = thetas.size();
  const std::size_t horizon_len = n * n - n;
  SquaredProfile p;
  p.n = n;
  p.values.assign(horizon_len, 0.0);
  std::vector<Complex> sums(horizon_len);
  std::vector<Complex> powers;
  if (with_grad) powers.assign(horizon_len * n, Complex{});
  for (std::size_t k = 0; k < n; ++k) {
    const Complex z = unit(thetas[k]);
    Complex w = z;
    for (std::size_t i = 0; i < horizon_len; ++i) {
      sums[i] += w;
      if (with_grad) powers[i * n + k] = w;
      w *= z;
    }
  }
  for (std::size_t i = 0; i < horizon_len; ++i) p.values[i] = std::norm(sums[i]);
  if (with_grad) {
    // d|S|^2/d theta_k = 2 Re(conj(S) * 2 pi i nu z_k^nu) = -4 pi nu Im(conj(S) z_k^nu)
    p.grad.assign(horizon_len * n, 0.0);
    for (std::size_t i = 0; i < horizon_len; ++i) {
      const double nu = static_cast<double>(i + 1);
      for (std::size_t k = 0; k < n; ++k) {
        p.grad[i * n + k] = -2.0 * kTwoPi * nu * std::imag(std::conj(sums[i]) * powers[i * n + k]);
      }
    }
  }
  return p;
}

struct SmoothedValue {
  double value = 0.0;
  std::vector<double> grad;  // with respect to every theta_k
};

/// (1/beta) log sum_nu exp(beta |S(nu)|^2): an upper proxy for
/// max |S(nu)|^2 that decreases to it as beta grows.
inline SmoothedValue smoothed_value_and_gradient(std::span<const double> thetas, double beta) {
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  const auto p = squared_profile(thetas, true);
  const double top = p.max();
  std::vector<double> w(p.values.size());
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(beta * (p.values[i] - top));
    total += w[i];
  }
  SmoothedValue out;
  out.value = top + std::log(total) / beta;
  out.grad.assign(p.n, 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double wi = w[i] / total;
    for (std::size_t k = 0; k < p.n; ++k) out.grad[k] += wi * p.grad[i * p.n + k];
  }
  return out;
}

inline double smoothed_objective(const UnimodularTuple& t, double beta) {
  return smoothed_value_and_gradient(t.thetas(), beta).value;
}

enum class Polish { CoordinateDescent, TrustRegionLP };

struct OptimizerConfig {
  std::size_t n = 3;
  std::size_t restarts = 50;
  std::size_t max_iters = 400;  // per beta stage
  std::uint64_t seed = 0;
  std::vector<double> smoothing_betas{1.0, 4.0, 16.0, 64.0};
  double polish_tol = 1e-13;
  Polish polish = Polish::TrustRegionLP;
  unsigned workers = 1;
  bool record_trace = false;
};

struct TraceRow {
  std::size_t restart = 0;
  std::size_t iter = 0;
  double beta = 0.0;  // 0 marks polish iterations
  double value = 0.0; // current max |S(nu)|
};

struct OptimizerReport {
  double best_value = 0.0;
  UnimodularTuple best_tuple;
  std::size_t best_restart = 0;
  std::vector<double> per_restart_values;
  RecoveryResult recovered;
  double gap_to_bound = 0.0;  // best_value - sqrt(n-1)
  std::uint64_t evaluations = 0;
  /// Evaluated points with objective below sqrt(n-1) - 1e-9; always 0.
  std::uint64_t bound_violations = 0;
  std::vector<TraceRow> trace;
};

namespace detail {

/// Dense tableau simplex for max c^T x, A x <= b, x >= 0 with b >= 0.
/// Bland's rule; sizes here are tiny.
inline std::vector<double> simplex_max(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                                       const std::vector<double>& c) {
  const std::size_t rows = a.size();
  const std::size_t vars = c.size();
  const std::size_t cols = vars + rows + 1;
  std::vector<std::vector<double>> t(rows + 1, std::vector<double>(cols, 0.0));
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < vars; ++j) t[i][j] = a[i][j];
    t[i][vars + i] = 1.0;
    t[i][cols - 1] = b[i];
    basis[i] = vars + i;
  }
  for (std::size_t j = 0; j < vars; ++j) t[rows][j] = -c[j];
  constexpr double eps = 1e-12;
  for (int guard = 0; guard < 10000; ++guard) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (t[rows][j] < -eps) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = rows;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows; ++i) {
      if (t[i][enter] > eps) {
        const double ratio = t[i][cols - 1] / t[i][enter];
        if (ratio < best_ratio - 1e-15 || (ratio <= best_ratio + 1e-15 && leave < rows && basis[i] < basis[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave == rows) break;  // unbounded; cannot happen with box constraints
    const double piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i <= rows; ++i) {
      if (i == leave || t[i][enter] == 0.0) continue;
      const double f = t[i][enter];
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  std::vector<double> x(vars, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < vars) x[basis[i]] = t[i][cols - 1];
  }
  return x;
}

class Restart {
 public:
  Restart(const OptimizerConfig& cfg, std::size_t index, std::vector<double> start)
      : cfg_(cfg), index_(index), theta_(std::move(start)), bound_(std::sqrt(static_cast<double>(cfg.n) - 1.0)) {}

  void run() {
    for (double beta : cfg_.smoothing_betas) descend(beta);
    if (cfg_.polish == Polish::TrustRegionLP) {
      polish_lp();
    } else {
      polish_coordinates();
    }
  }

  double value() const { return std::sqrt(max_sq(theta_)); }
  const std::vector<double>& thetas() const { return theta_; }
  std::uint64_t evaluations() const { return evaluations_; }
  std::uint64_t violations() const { return violations_; }
  std::vector<TraceRow>& trace() { return trace_; }

 private:
  double max_sq(std::span<const double> th) const { return squared_profile(th, false).max(); }

  double checked_max_sq(std::span<const double> th) {
    const double v = max_sq(th);
    note(v);
    return v;
  }

  void note(double max_sq_value) {
    ++evaluations_;
    if (std::sqrt(max_sq_value) < bound_ - 1e-9) ++violations_;
  }

  void record(std::size_t iter, double beta) {
    if (cfg_.record_trace) trace_.push_back({index_, iter, beta, value()});
  }

  // Gradient descent with Armijo backtracking; theta_1 stays fixed at 0.
  void descend(double beta) {
    const std::size_t n = theta_.size();
    double step = 1e-3;
    auto sv = smoothed_value_and_gradient(theta_, beta);
    for (std::size_t iter = 0; iter < cfg_.max_iters; ++iter) {
      sv.grad[0] = 0.0;
      double gnorm2 = 0.0;
      for (double g : sv.grad) gnorm2 += g * g;
      if (gnorm2 < 1e-24) break;
      std::vector<double> trial(n);
      bool accepted = false;
      step *= 2.0;
      while (step > 1e-14) {
        for (std::size_t k = 0; k < n; ++k) trial[k] = theta_[k] - step * sv.grad[k];
        auto next = smoothed_value_and_gradient(trial, beta);
        note(squared_profile(trial, false).max());
        if (next.value <= sv.value - 1e-4 * step * gnorm2) {
          const double decrease = sv.value - next.value;
          theta_ = trial;
          sv = std::move(next);
          accepted = true;
          if (decrease < 1e-15 * std::max(1.0, std::abs(sv.value))) iter = cfg_.max_iters;
          break;
        }
        step *= 0.5;
      }
      if (cfg_.record_trace && (iter % 10 == 0 || !accepted)) record(iter, beta);
      if (!accepted) break;
    }
    for (auto& t : theta_) t = wrap_turns(t);
  }

  // Direct coordinate search on max |S(nu)|^2 with halving step.
  void polish_coordinates() {
    const std::size_t n = theta_.size();
    double best = checked_max_sq(theta_);
    std::size_t iter = 0;
    for (double h = 1e-3; h > cfg_.polish_tol; h *= 0.5) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (std::size_t k = 1; k < n; ++k) {
          for (double dir : {1.0, -1.0}) {
            auto trial = theta_;
            trial[k] += dir * h;
            const double v = checked_max_sq(trial);
            if (v < best) {
              best = v;
              theta_ = trial;
              improved = true;
            }
          }
        }
        if (cfg_.record_trace && improved) record(iter++, 0.0);
      }
    }
    for (auto& t : theta_) t = wrap_turns(t);
  }

  // Sequential linear programming with a box trust region on the free
  // angles: min tau s.t. f_nu + g_nu . d <= tau, |d_i| <= radius.
  void polish_lp() {
    const std::size_t n = theta_.size();
    const std::size_t dim = n - 1;
    double radius = 1e-3;
    auto prof = squared_profile(theta_, true);
    double current = prof.max();
    note(current);
    for (std::size_t iter = 0; iter < 500 && radius > 1e-16; ++iter) {
      const std::size_t rows = prof.values.size();
      // Substitute d = u - radius (u in [0, 2 radius]) and tau = upper - w
      // (w >= 0) so that the origin is feasible; maximize w.
      double grad_abs_max = 0.0;
      for (double g : prof.grad) grad_abs_max = std::max(grad_abs_max, std::abs(g));
      const double upper = current + 2.0 * radius * grad_abs_max * static_cast<double>(dim) + 1.0;
      std::vector<std::vector<double>> a;
      std::vector<double> b;
      a.reserve(rows + dim);
      for (std::size_t i = 0; i < rows; ++i) {
        std::vector<double> row(dim + 1, 0.0);
        double shift = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
          row[j] = prof.grad[i * n + j + 1];
          shift += row[j] * radius;
        }
        row[dim] = 1.0;
        a.push_back(std::move(row));
        b.push_back(upper - prof.values[i] + shift);
      }
      for (std::size_t j = 0; j < dim; ++j) {
        std::vector<double> row(dim + 1, 0.0);
        row[j] = 1.0;
        a.push_back(std::move(row));
        b.push_back(2.0 * radius);
      }
      std::vector<double> c(dim + 1, 0.0);
      c[dim] = 1.0;
      const auto x = simplex_max(a, b, c);
      const double predicted = current - (upper - x[dim]);
      if (predicted <= cfg_.polish_tol * std::max(1.0, current)) {
        if (radius < 1e-12) break;
        radius *= 0.25;
        continue;
      }
      auto trial = theta_;
      for (std::size_t j = 0; j < dim; ++j) trial[j + 1] += x[j] - radius;
      auto next = squared_profile(trial, true);
      const double actual_value = next.max();
      note(actual_value);
      const double ratio = (current - actual_value) / predicted;
      if (ratio > 0.0) {
        theta_ = std::move(trial);
        prof = std::move(next);
        current = actual_value;
        if (cfg_.record_trace) record(iter, 0.0);
      }
      if (ratio > 0.75) {
        radius *= 2.0;
      } else if (ratio < 0.25) {
        radius *= 0.25;
      }
      radius = std::min(radius, 0.05);
    }
    for (auto& t : theta_) t = wrap_turns(t);
  }

  const OptimizerConfig& cfg_;
  std::size_t index_;
  std::vector<double> theta_;
  double bound_;
  std::uint64_t evaluations_ = 0;
  std::uint64_t violations_ = 0;
  std::vector<TraceRow> trace_;
};

/// Start point of a restart: theta_1 = 0, the rest i.i.d. uniform. Each
/// restart owns a stream seeded from (seed, restart index).
inline std::vector<double> start_point(std::uint64_t seed, std::size_t restart, std::size_t n) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart), static_cast<std::uint32_t>(restart >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> th(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) th[k] = uni(rng);
  return th;
}

}  // namespace detail

/// Multi-start search for the inf-max value. Deterministic given the
/// config; the report does not depend on the worker count.
inline OptimizerReport minimize(const OptimizerConfig& cfg) {
  if (cfg.n < 2) throw Error(ErrorCode::InvalidArgument, "n must be >= 2");
  if (cfg.restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");
  if (cfg.smoothing_betas.empty()) throw Error(ErrorCode::InvalidArgument, "beta schedule is empty");
  for (std::size_t i = 0; i < cfg.smoothing_betas.size(); ++i) {
    if (!(cfg.smoothing_betas[i] > 0.0) || (i > 0 && !(cfg.smoothing_betas[i] > cfg.smoothing_betas[i - 1]))) {
      throw Error(ErrorCode::InvalidArgument, "betas must be positive and strictly increasing");
    }
  }

  std::vector<std::vector<double>> finals(cfg.restarts);
  std::vector<double> values(cfg.restarts);
  std::vector<std::uint64_t> evals(cfg.restarts), violations(cfg.restarts);
  std::vector<std::vector<TraceRow>> traces(cfg.restarts);

  auto run_one = [&](std::size_t r) {
    detail::Restart job(cfg, r, detail::start_point(cfg.seed, r, cfg.n));
    job.run();
    finals[r] = job.thetas();
    values[r] = job.value();
    evals[r] = job.evaluations();
    violations[r] = job.violations();
    traces[r] = std::move(job.trace());
  };

  const unsigned workers = std::max(1u, cfg.workers);
  if (workers == 1) {
    for (std::size_t r = 0; r < cfg.restarts; ++r) run_one(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r; (r = next.fetch_add(1)) < cfg.restarts;) run_one(r);
      });
    }
    for (auto& t : pool) t.join();
  }

  OptimizerReport rep;
  rep.per_restart_values = values;
  rep.best_restart = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  rep.best_value = values[rep.best_restart];
  rep.best_tuple = UnimodularTuple(finals[rep.best_restart]);
  rep.recovered = recover_structure(rep.best_tuple);
  rep.gap_to_bound = rep.best_value - std::sqrt(static_cast<double>(cfg.n) - 1.0);
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    rep.evaluations += evals[r];
    rep.bound_violations += violations[r];
    if (cfg.record_trace) rep.trace.insert(rep.trace.end(), traces[r].begin(), traces[r].end());
  }
  return rep;
}

}  // namespace powersum::minimax
