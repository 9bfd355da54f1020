#pragma once

// The regular subfamilies: detection, closed-form limits and the auxiliary
// sequences, Lyapunov functions and logistic conjugacy that explain them.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "volterra/core.hpp"

namespace volterra {

enum class Subfamily { Identity, Involution, Linear, YInvariant, XInvariant, Corner, Diagonal, General };

inline std::string_view to_string(Subfamily s) {
  switch (s) {
    case Subfamily::Identity: return "Identity";
    case Subfamily::Involution: return "Involution";
    case Subfamily::Linear: return "Linear";
    case Subfamily::YInvariant: return "YInvariant";
    case Subfamily::XInvariant: return "XInvariant";
    case Subfamily::Corner: return "Corner";
    case Subfamily::Diagonal: return "Diagonal";
    case Subfamily::General: return "General";
  }
  return "?";
}

struct SubfamilyTag {
  Subfamily tag = Subfamily::General;
  ParamSet params{0, 0, 0, 0};
};

/// Most specific subfamily, by exact parameter equality.
/// Precedence: Identity > Involution > Corner > Linear > YInvariant > XInvariant > Diagonal.
inline SubfamilyTag detect_subfamily(const ParamSet& p) {
  const double a = p.a(), b = p.b(), al = p.alpha(), be = p.beta();
  Subfamily tag = Subfamily::General;
  if (a == 1 && b == 1 && al == 0 && be == 0) tag = Subfamily::Identity;
  else if (a == 0 && b == 0 && al == 1 && be == 1) tag = Subfamily::Involution;
  else if (b == 1 && al == 0) tag = Subfamily::Corner;
  else if (a == b && al == be) tag = Subfamily::Linear;
  else if (al == 0 && be == 0) tag = Subfamily::YInvariant;
  else if (a == 1 && b == 1) tag = Subfamily::XInvariant;
  else if (a == al && b == be) tag = Subfamily::Diagonal;
  return {tag, p};
}

enum class LimitFormula { Linear, YInvariant, XInvariant, CornerOrigin, DiagonalOrigin, DiagonalUnit, DirectIteration };

inline std::string_view to_string(LimitFormula f) {
  switch (f) {
    case LimitFormula::Linear: return "linear";
    case LimitFormula::YInvariant: return "y-invariant";
    case LimitFormula::XInvariant: return "x-invariant";
    case LimitFormula::CornerOrigin: return "corner-origin";
    case LimitFormula::DiagonalOrigin: return "diagonal-origin";
    case LimitFormula::DiagonalUnit: return "diagonal-unit";
    case LimitFormula::DirectIteration: return "direct-iteration";
  }
  return "?";
}

struct ClosedFormLimit {
  State2 limit;
  LimitFormula formula = LimitFormula::DirectIteration;
  bool valid = false;  // hypotheses of the formula held
};

class DegenerateDenominator : public DenominatorVanishes {
 public:
  using DenominatorVanishes::DenominatorVanishes;
};

class DegenerateConjugacy : public DenominatorVanishes {
 public:
  using DenominatorVanishes::DenominatorVanishes;
};

namespace detail {

inline void require_linear(const ParamSet& p) {
  if (p.a() != p.b() || p.alpha() != p.beta()) throw HypothesisViolated("linear case needs a=b and alpha=beta");
  if (p.a() == 1 && p.alpha() == 0) throw DegenerateDenominator("1-a+alpha vanishes (identity operator)");
  if (p.a() == 0 && p.alpha() == 1) throw HypothesisViolated("a=0, alpha=1 is the swap operator; trajectories cycle");
}

inline void require_diagonal(const ParamSet& p) {
  if (p.a() != p.alpha() || p.b() != p.beta()) throw HypothesisViolated("diagonal case needs a=alpha and b=beta");
}

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace detail

// ---------------------------------------------------------------------------
// a = b, alpha = beta: a linear map

/// x* = y* = (alpha x0 + (1-a) y0) / (1 - a + alpha).
inline ClosedFormLimit linear_limit(const ParamSet& p, const State2& s0) {
  detail::require_linear(p);
  const double a = p.a(), al = p.alpha();
  const double denom = 1.0 - a + al;
  const double v = detail::clamp01((al * s0.x + (1.0 - a) * s0.y) / denom);
  return {State2(v, v), LimitFormula::Linear, true};
}

/// xi_n = x_n - y_n and eta_n = x_n + y_n along the trajectory from s0, in closed form.
inline std::pair<double, double> linear_aux_sequences(const ParamSet& p, const State2& s0, std::size_t n) {
  detail::require_linear(p);
  const double a = p.a(), al = p.alpha();
  const double xi0 = s0.x - s0.y;
  if (n == 0) return {xi0, s0.x + s0.y};
  const double r = a - al;
  const double rn = std::pow(r, static_cast<double>(n));
  const double denom = 1.0 - a + al;
  const double a1 = 2.0 * (al * s0.x + (1.0 - a) * s0.y) / denom;
  const double a2 = (1.0 - a - al) * xi0 / denom;
  return {rn * xi0, a1 + a2 * rn};
}

struct LyapunovReport {
  bool phi_magnitude_nonincreasing = true;  // |x - y| never grows
  bool phi_directional = true;              // x - y moves toward 0 from its side (a > alpha only)
  bool psi_directional = true;              // x + y moves as the half-plane dictates
  bool ok() const { return phi_magnitude_nonincreasing && phi_directional && psi_directional; }
};

inline constexpr double kMonotoneSlack = 1e-14;

/// Checks phi = x - y and psi = x + y along a linear-case trajectory.
///
/// |phi| contracts by |a - alpha|. For a > alpha, phi keeps its sign and moves
/// toward 0. psi changes by (a + alpha - 1)(x - y), so above the diagonal
/// (x < y) it is non-increasing and below it non-decreasing when a + alpha >= 1,
/// and the other way round when a + alpha < 1.
inline LyapunovReport lyapunov_report(const ParamSet& p, std::span<const State2> states) {
  detail::require_linear(p);
  if (p.a() == p.alpha()) throw HypothesisViolated("Lyapunov check needs a != alpha");
  const bool phi_sided = p.a() > p.alpha();
  const double psi_sign = p.a() + p.alpha() >= 1.0 ? 1.0 : -1.0;

  LyapunovReport rep;
  for (std::size_t i = 1; i < states.size(); ++i) {
    const State2& u = states[i - 1];
    const State2& v = states[i];
    const double phi0 = u.x - u.y, phi1 = v.x - v.y;
    const double dpsi = (v.x + v.y) - (u.x + u.y);
    if (std::abs(phi1) > std::abs(phi0) + kMonotoneSlack) rep.phi_magnitude_nonincreasing = false;
    if (phi_sided) {
      if (phi0 < 0 && phi1 < phi0 - kMonotoneSlack) rep.phi_directional = false;
      if (phi0 > 0 && phi1 > phi0 + kMonotoneSlack) rep.phi_directional = false;
    }
    if (phi0 < 0 && psi_sign * dpsi > kMonotoneSlack) rep.psi_directional = false;
    if (phi0 > 0 && psi_sign * dpsi < -kMonotoneSlack) rep.psi_directional = false;
    if (phi0 == 0 && std::abs(dpsi) > kMonotoneSlack) rep.psi_directional = false;
  }
  return rep;
}

inline bool lyapunov_check(const ParamSet& p, std::span<const State2> states) {
  return lyapunov_report(p, states).ok();
}

// ---------------------------------------------------------------------------
// alpha = beta = 0: y is invariant, x follows an affine recurrence

namespace detail {

inline void require_y_invariant(const ParamSet& p) {
  if (p.alpha() != 0 || p.beta() != 0) throw HypothesisViolated("y-invariant case needs alpha=beta=0");
}

inline void require_x_invariant(const ParamSet& p) {
  if (p.a() != 1 || p.b() != 1) throw HypothesisViolated("x-invariant case needs a=b=1");
}

}  // namespace detail

/// (x*, y*) = ((1-b) y0 / (1 - a - (b-a) y0), y0), valid while |(b-a) y0 + a| < 1.
inline ClosedFormLimit y_invariant_limit(const ParamSet& p, const State2& s0) {
  detail::require_y_invariant(p);
  if (p.a() == p.b()) throw HypothesisViolated("y-invariant case needs a != b");
  const double ratio = (p.b() - p.a()) * s0.y + p.a();
  if (!(std::abs(ratio) < 1.0)) {
    throw HypothesisViolated("|(b-a) y0 + a| = " + std::to_string(std::abs(ratio)) + " is not below 1");
  }
  const double gap = (1.0 - p.a()) - (p.b() - p.a()) * s0.y;
  State2 lim;
  lim.x = detail::clamp01((1.0 - p.b()) * s0.y / gap);
  lim.y = s0.y;
  return {lim, LimitFormula::YInvariant, true};
}

/// x_n = r^n x0 + (1-b) y0 (1 - r^n) / (1 - r) with r = (b-a) y0 + a.
inline double y_invariant_iterate_formula(const ParamSet& p, const State2& s0, std::size_t n) {
  detail::require_y_invariant(p);
  if (n == 0) return s0.x;
  const double r = (p.b() - p.a()) * s0.y + p.a();
  const double one_minus_r = (1.0 - p.a()) - (p.b() - p.a()) * s0.y;
  const double nn = static_cast<double>(n);
  double rn, series;
  if (one_minus_r == 0.0) {
    rn = 1.0;
    series = nn;
  } else if (r > 0.0) {
    const double log_r = std::log1p(-one_minus_r);
    rn = std::exp(nn * log_r);
    series = -std::expm1(nn * log_r) / one_minus_r;
  } else {
    rn = std::pow(r, nn);
    series = (1.0 - rn) / one_minus_r;
  }
  return rn * s0.x + (1.0 - p.b()) * s0.y * series;
}

/// Mirror of the y-invariant case: a = b = 1 fixes x and
/// y* = alpha x0 / (beta - (beta-alpha) x0), valid while |(beta-alpha) x0 + 1 - beta| < 1.
inline ClosedFormLimit x_invariant_limit(const ParamSet& p, const State2& s0) {
  detail::require_x_invariant(p);
  if (p.alpha() == p.beta()) throw HypothesisViolated("x-invariant case needs alpha != beta");
  const double ratio = (p.beta() - p.alpha()) * s0.x + (1.0 - p.beta());
  if (!(std::abs(ratio) < 1.0)) {
    throw HypothesisViolated("|(beta-alpha) x0 + 1 - beta| = " + std::to_string(std::abs(ratio)) +
                             " is not below 1");
  }
  const double gap = p.beta() - (p.beta() - p.alpha()) * s0.x;
  State2 lim;
  lim.x = s0.x;
  lim.y = detail::clamp01(p.alpha() * s0.x / gap);
  return {lim, LimitFormula::XInvariant, true};
}

// ---------------------------------------------------------------------------
// b = 1, alpha = 0: both coordinates decrease toward the origin

/// Limit of the trajectory from s0 != (1,1).
///
/// For a < 1 and beta > 0 every such trajectory decreases to (0,0). With
/// beta = 0 the y coordinate is frozen and the y-invariant limit applies; with
/// a = 1 the x coordinate is frozen and the limit is found by iteration.
inline ClosedFormLimit corner_limit(const ParamSet& p, const State2& s0) {
  if (p.b() != 1 || p.alpha() != 0) throw HypothesisViolated("corner case needs b=1 and alpha=0");
  if (s0.x == 1 && s0.y == 1) throw HypothesisViolated("(1,1) is a fixed point");

  if (p.a() < 1 && p.beta() > 0) return {State2(0, 0), LimitFormula::CornerOrigin, true};
  if (p.a() < 1 && s0.y < 1) {
    // beta = 0: y' = y and x' = x ((1-a) y0 + a).
    return {State2(0, s0.y), LimitFormula::YInvariant, true};
  }
  const Outcome out = run(p, s0);
  if (const auto* c = std::get_if<Converged>(&out)) return {c->limit, LimitFormula::DirectIteration, false};
  throw ConsistencyError("corner-case trajectory did not converge");
}

/// Whether x_n and y_n are strictly decreasing until each falls below floor.
inline bool corner_monotone(const ParamSet& p, const State2& s0, std::size_t max_steps, double floor = 1e-14) {
  State2 cur = s0;
  for (std::size_t n = 0; n < max_steps; ++n) {
    if (cur.x < floor && cur.y < floor) return true;
    const State2 next = step2(p, cur);
    if (cur.x >= floor && !(next.x < cur.x)) return false;
    if (cur.y >= floor && !(next.y < cur.y)) return false;
    if (cur.x < floor && next.x > cur.x) return false;
    if (cur.y < floor && next.y > cur.y) return false;
    cur = next;
  }
  return true;
}

// ---------------------------------------------------------------------------
// a = alpha, b = beta: one step onto the diagonal, then a logistic-type map

/// f(x) = (b-a) x^2 + (1+a-b) x, the map restricted to the diagonal.
inline double diagonal_restriction(const ParamSet& p, double x) {
  detail::require_diagonal(p);
  const double d = p.b() - p.a();
  return d * x * x + (1.0 - d) * x;
}

/// Logistic parameter mu = 1 + a - b.
inline double logistic_mu(const ParamSet& p) { return 1.0 + p.a() - p.b(); }

/// |phi(f(x)) - F_mu(phi(x))| with phi(x) = (a-b)/(1+a-b) x and F_mu(x) = mu x (1-x).
inline double conjugacy_defect(const ParamSet& p, double x) {
  detail::require_diagonal(p);
  if (p.a() == p.b()) throw HypothesisViolated("conjugacy needs a != b");
  const double mu = logistic_mu(p);
  if (p.a() == 0 && p.b() == 1) throw DegenerateConjugacy("mu = 0: f(x) = x^2 has no logistic conjugate");
  const double scale = (p.a() - p.b()) / mu;
  const double lhs = scale * diagonal_restriction(p, x);
  const double px = scale * x;
  const double rhs = mu * px * (1.0 - px);
  return std::abs(lhs - rhs);
}

/// (0,0) when a <= b, (1,1) when a > b.
inline ClosedFormLimit diagonal_limit(const ParamSet& p, const State2& s0) {
  detail::require_diagonal(p);
  if (p.a() == p.b()) throw HypothesisViolated("a = b belongs to the linear case");
  if (p.a() < p.b()) {
    if (s0.x == 1 && s0.y == 1) throw HypothesisViolated("(1,1) is a fixed point");
    return {State2(0, 0), LimitFormula::DiagonalOrigin, true};
  }
  if (s0.x == 0 && s0.y == 0) throw HypothesisViolated("(0,0) is a fixed point");
  return {State2(1, 1), LimitFormula::DiagonalUnit, true};
}

/// The closed-form limit for whichever subfamily p belongs to, if it has one.
inline std::optional<ClosedFormLimit> closed_form_limit(const ParamSet& p, const State2& s0) {
  switch (detect_subfamily(p).tag) {
    case Subfamily::Identity: return ClosedFormLimit{s0, LimitFormula::DirectIteration, true};
    case Subfamily::Involution:
    case Subfamily::General: return std::nullopt;
    case Subfamily::Linear: return linear_limit(p, s0);
    case Subfamily::YInvariant: return y_invariant_limit(p, s0);
    case Subfamily::XInvariant: return x_invariant_limit(p, s0);
    case Subfamily::Corner: return corner_limit(p, s0);
    case Subfamily::Diagonal: return diagonal_limit(p, s0);
  }
  return std::nullopt;
}

}  // namespace volterra
