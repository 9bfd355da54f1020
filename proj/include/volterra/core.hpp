#pragma once

// Volterra quadratic stochastic operator of a two-sex population on S^1 x S^1.
//
// Four heredity parameters (a, b, alpha, beta) define the map
//
//   x' = (b - a) x y + a x + (1 - b) y
//   y' = (beta - alpha) x y + alpha x + (1 - beta) y
//
// on the reduced state (x, y) = (x_1, y_1) in [0,1]^2, and the equivalent
// four-coordinate map on pairs of probability vectors.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace volterra {

/// Invalid argument to a library function (bad tolerance, out-of-range parameter, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Arithmetic left the domain by more than rounding noise.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A closed-form formula was evaluated outside the hypotheses it was derived under.
class HypothesisViolated : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A formula denominator vanished (within its tolerance).
class DenominatorVanishes : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kClampSlack = 1e-12;
inline constexpr double kStateSumTol = 1e-12;

namespace detail {

inline void require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ArgumentError(std::string(name) + " must lie in [0,1], got " + std::to_string(v));
  }
}

// Snap rounding noise back into [0,1]; anything larger is a bug.
inline double clamp_unit(double v) {
  if (v >= 0.0 && v <= 1.0) return v;
  if (v < 0.0 && v >= -kClampSlack) return 0.0;
  if (v > 1.0 && v <= 1.0 + kClampSlack) return 1.0;
  throw ConsistencyError("coordinate " + std::to_string(v) + " left [0,1]");
}

// One coordinate of the map, c1 the coefficient of x y_2 and c2 the one of x_2 y.
// Anchoring on x (resp. y) keeps the identity, swap, invariant-coordinate and
// corner cases bit-exact.
inline double coordinate(double c1, double c2, double x, double y) {
  if (c1 + c2 >= 1.0) {
    return x + (1.0 - c2) * y * (1.0 - x) - (1.0 - c1) * x * (1.0 - y);
  }
  return y + c1 * x * (1.0 - y) - c2 * y * (1.0 - x);
}

}  // namespace detail

/// Heredity parameters (a, b, alpha, beta), each in [0,1].
class ParamSet {
 public:
  ParamSet(double a, double b, double alpha, double beta) : a_(a), b_(b), alpha_(alpha), beta_(beta) {
    detail::require_unit(a, "a");
    detail::require_unit(b, "b");
    detail::require_unit(alpha, "alpha");
    detail::require_unit(beta, "beta");
  }

  double a() const { return a_; }
  double b() const { return b_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  friend bool operator==(const ParamSet&, const ParamSet&) = default;

 private:
  double a_;
  double b_;
  double alpha_;
  double beta_;
};

/// Reduced state: x = frequency of female type 1, y = frequency of male type 1.
struct State2 {
  double x = 0.0;
  double y = 0.0;

  State2() = default;
  State2(double x_, double y_) : x(x_), y(y_) {
    detail::require_unit(x, "x");
    detail::require_unit(y, "y");
  }

  friend bool operator==(const State2&, const State2&) = default;
};

inline double distance_inf(const State2& u, const State2& v) {
  return std::max(std::abs(u.x - v.x), std::abs(u.y - v.y));
}

/// Full state (x1, x2; y1, y2) on S^1 x S^1.
struct State4 {
  double x1 = 0.0;
  double x2 = 1.0;
  double y1 = 0.0;
  double y2 = 1.0;

  State4() = default;
  State4(double x1_, double x2_, double y1_, double y2_) : x1(x1_), x2(x2_), y1(y1_), y2(y2_) {
    if (x1 < 0 || x2 < 0 || y1 < 0 || y2 < 0) throw ArgumentError("State4 coordinates must be non-negative");
    if (std::abs(x1 + x2 - 1.0) > kStateSumTol || std::abs(y1 + y2 - 1.0) > kStateSumTol) {
      throw ArgumentError("State4 marginals must each sum to 1");
    }
  }

  friend bool operator==(const State4&, const State4&) = default;
};

/// The reduced map without clamping; used to audit closure.
inline std::array<double, 2> step2_raw(const ParamSet& p, double x, double y) {
  return {detail::coordinate(p.a(), p.b(), x, y), detail::coordinate(p.alpha(), p.beta(), x, y)};
}

inline State2 step2(const ParamSet& p, const State2& s) {
  const auto [x, y] = step2_raw(p, s.x, s.y);
  State2 out;
  out.x = detail::clamp_unit(x);
  out.y = detail::clamp_unit(y);
  return out;
}

inline State4 lift(const State2& s) {
  State4 out;
  out.x1 = s.x;
  out.x2 = 1.0 - s.x;
  out.y1 = s.y;
  out.y2 = 1.0 - s.y;
  return out;
}

inline State2 project(const State4& s) {
  State2 out;
  out.x = detail::clamp_unit(s.x1);
  out.y = detail::clamp_unit(s.y1);
  return out;
}

/// The four-coordinate operator, applied term by term.
inline State4 step4(const ParamSet& p, const State4& s) {
  const double a = p.a(), b = p.b(), al = p.alpha(), be = p.beta();
  const double x11 = s.x1 * s.y1, x12 = s.x1 * s.y2, x21 = s.x2 * s.y1, x22 = s.x2 * s.y2;

  State4 out;
  out.x1 = x11 + a * x12 + (1.0 - b) * x21;
  out.x2 = x22 + b * x21 + (1.0 - a) * x12;
  out.y1 = x11 + al * x12 + (1.0 - be) * x21;
  out.y2 = x22 + be * x21 + (1.0 - al) * x12;

  // Renormalize only if rounding drift is visible.
  auto fix = [](double& u, double& v) {
    u = detail::clamp_unit(u);
    v = detail::clamp_unit(v);
    const double sum = u + v;
    if (std::abs(sum - 1.0) > kStateSumTol) {
      u /= sum;
      v /= sum;
    }
  };
  fix(out.x1, out.x2);
  fix(out.y1, out.y2);
  return out;
}

// ---------------------------------------------------------------------------
// Trajectories

inline constexpr double kDefaultTol = 1e-12;
inline constexpr std::size_t kDefaultMaxIter = 1'000'000;
inline constexpr int kConvergenceRun = 5;
inline constexpr std::size_t kMaxCyclePeriod = 8;
inline constexpr double kCycleTol = 1e-12;
// A period match must also be this small relative to the step size, so a
// slowly converging oscillation is not mistaken for a cycle.
inline constexpr double kCycleRelTol = 1e-6;

struct Converged {
  State2 limit;
  std::size_t steps = 0;
};

struct Cycle {
  std::size_t period = 0;
  std::vector<State2> states;
  std::size_t steps = 0;  // iterate index at which the cycle was confirmed
};

struct MaxIterReached {
  State2 last;
  std::size_t steps = 0;
};

using Outcome = std::variant<Converged, Cycle, MaxIterReached>;

struct Trajectory {
  State2 initial;
  std::vector<State2> states;  // states[0] == initial
  Outcome outcome;

  bool converged() const { return std::holds_alternative<Converged>(outcome); }
  bool cycled() const { return std::holds_alternative<Cycle>(outcome); }
};

/// Fixed-point residual bound a converged limit satisfies.
inline double fixed_point_tol(double tol) { return 100.0 * tol; }

/// Iterates the map from s0, calling visit(n, state) for every state
/// (n = 0 is s0), until convergence, a short cycle, or max_iter steps.
///
/// Converged: the step size stayed below tol for kConvergenceRun consecutive
/// steps, or a state was mapped exactly onto itself. The limit is the last
/// iterate. Cycle: for some period 2..8 a whole period of states repeats its
/// predecessors within min(kCycleTol, kCycleRelTol * step size).
template <class Visitor>
Outcome iterate_visit(const ParamSet& p, const State2& s0, std::size_t max_iter, double tol, Visitor&& visit) {
  if (max_iter < 1) throw ArgumentError("max_iter must be at least 1");
  if (!(tol > 0.0)) throw ArgumentError("tol must be positive");

  constexpr std::size_t kHistory = 2 * kMaxCyclePeriod;
  std::array<State2, kHistory> ring{};  // ring[n % kHistory] = state n

  State2 cur = s0;
  ring[0] = cur;
  visit(std::size_t{0}, cur);

  int small_run = 0;
  for (std::size_t n = 1; n <= max_iter; ++n) {
    const State2 next = step2(p, cur);
    const double delta = distance_inf(next, cur);

    if (delta == 0.0) {
      // Exactly fixed: cur repeats forever.
      return Converged{cur, n - 1};
    }

    ring[n % kHistory] = next;
    visit(n, next);

    small_run = delta < tol ? small_run + 1 : 0;
    if (small_run >= kConvergenceRun) return Converged{next, n};

    if (delta >= tol) {
      const double match_tol = std::min(kCycleTol, kCycleRelTol * delta);
      for (std::size_t k = 2; k <= kMaxCyclePeriod; ++k) {
        if (n + 1 < 2 * k) break;
        bool whole_period = true;
        for (std::size_t j = 0; j < k && whole_period; ++j) {
          const State2& a = ring[(n - j) % kHistory];
          const State2& b = ring[(n - j - k) % kHistory];
          whole_period = std::abs(a.x - b.x) <= match_tol && std::abs(a.y - b.y) <= match_tol;
        }
        if (whole_period) {
          Cycle c;
          c.period = k;
          c.steps = n;
          for (std::size_t j = k; j-- > 0;) c.states.push_back(ring[(n - j) % kHistory]);
          return c;
        }
      }
    }
    cur = next;
  }
  return MaxIterReached{cur, max_iter};
}

/// Iterates and records every state up to the outcome.
inline Trajectory iterate(const ParamSet& p, const State2& s0, std::size_t max_iter = kDefaultMaxIter,
                          double tol = kDefaultTol) {
  Trajectory t;
  t.initial = s0;
  t.outcome = iterate_visit(p, s0, max_iter, tol, [&](std::size_t, const State2& s) { t.states.push_back(s); });
  return t;
}

/// Iterates without recording the states.
inline Outcome run(const ParamSet& p, const State2& s0, std::size_t max_iter = kDefaultMaxIter,
                   double tol = kDefaultTol) {
  return iterate_visit(p, s0, max_iter, tol, [](std::size_t, const State2&) {});
}

}  // namespace volterra
