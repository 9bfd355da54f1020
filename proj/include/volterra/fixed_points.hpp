#pragma once

// Fixed-point locus, Jacobian eigenvalues and hyperbolicity classes.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "volterra/core.hpp"

namespace volterra {

inline constexpr double kHyperbolicityTol = 1e-9;
inline constexpr double kContinuumTol = 1e-12;
inline constexpr double kDenominatorTol = 1e-12;
inline constexpr double kWitnessTol = 1e-12;
inline constexpr double kFixedPointWarnTol = 1e-9;
inline constexpr int kWitnessGrid = 11;

// ---------------------------------------------------------------------------
// The curve x~(y) and the continuum condition

/// x~(y) = (1-b) y / (1 + (a-b) y - a), the first coordinate solving x' = x.
inline double x_tilde(const ParamSet& p, double y) {
  const double denom = (1.0 - p.a()) + (p.a() - p.b()) * y;
  if (std::abs(denom) < kDenominatorTol) {
    throw DenominatorVanishes("x~ denominator vanishes at y = " + std::to_string(y));
  }
  return (1.0 - p.b()) * y / denom;
}

/// alpha(1-b) == beta(1-a): the operator has a curve of fixed points.
inline bool continuum_condition(const ParamSet& p) {
  return std::abs(p.alpha() * (1.0 - p.b()) - p.beta() * (1.0 - p.a())) < kContinuumTol;
}

// ---------------------------------------------------------------------------
// Fixed-point sets

enum class LocusKind { IsolatedPair, CurveContinuum, SegmentX0, CurveAB1, SegmentY };

inline std::string_view to_string(LocusKind k) {
  switch (k) {
    case LocusKind::IsolatedPair: return "IsolatedPair";
    case LocusKind::CurveContinuum: return "CurveContinuum";
    case LocusKind::SegmentX0: return "SegmentX0";
    case LocusKind::CurveAB1: return "CurveAB1";
    case LocusKind::SegmentY: return "SegmentY";
  }
  return "?";
}

/// One connected piece of a fixed-point locus.
struct LocusComponent {
  enum class Shape {
    Corners,        // just (0,0) and (1,1)
    Everything,     // identity: the whole square
    CurveXOfY,      // { (x~(y), y) }
    CurveYOfX,      // { (x, alpha x / ((alpha-beta) x + beta)) }, a = b = 1
    HorizontalLine, // { (t, level) : t in [0,1] }
    VerticalLine,   // { (level, t) : t in [0,1] }
  };
  Shape shape = Shape::Corners;
  double level = 0.0;
};

inline std::string_view to_string(LocusComponent::Shape s) {
  using S = LocusComponent::Shape;
  switch (s) {
    case S::Corners: return "corners";
    case S::Everything: return "everything";
    case S::CurveXOfY: return "curve-x-of-y";
    case S::CurveYOfX: return "curve-y-of-x";
    case S::HorizontalLine: return "horizontal-line";
    case S::VerticalLine: return "vertical-line";
  }
  return "?";
}

struct FixedPointSet {
  LocusKind kind = LocusKind::IsolatedPair;
  ParamSet params{0, 0, 0, 0};
  std::vector<LocusComponent> components;
  std::vector<State2> witnesses;
  std::vector<double> skipped_y;  // grid y values where x~ is undefined
  bool every_point_fixed = false; // identity operator
  bool period_two = false;        // swap operator: W o W = id
  int curve_sign = 0;             // +1/-1: sign of beta in the a=b=1 curve denominator; 0 if n/a

  /// Point of the x~ curve at height y.
  State2 curve_point(double y) const { return State2(x_tilde(params, y), y); }

  /// Point of the a=b=1 curve at abscissa x.
  State2 ab1_point(double x) const {
    const double al = params.alpha(), be = params.beta();
    const double denom = (al - be) * x + curve_sign * be;
    if (std::abs(denom) < kDenominatorTol) throw DenominatorVanishes("a=b=1 curve denominator vanishes");
    return State2(x, std::clamp(al * x / denom, 0.0, 1.0));
  }
};

inline double residual(const ParamSet& p, const State2& s) { return distance_inf(step2(p, s), s); }

namespace detail {

inline double grid_value(int i) { return static_cast<double>(i) / (kWitnessGrid - 1); }

inline void add_witness(FixedPointSet& fps, const State2& w) {
  const double r = residual(fps.params, w);
  if (!(r < kWitnessTol)) {
    throw ConsistencyError("fixed-point witness (" + std::to_string(w.x) + ", " + std::to_string(w.y) +
                           ") has residual " + std::to_string(r));
  }
  if (std::find(fps.witnesses.begin(), fps.witnesses.end(), w) == fps.witnesses.end()) {
    fps.witnesses.push_back(w);
  }
}

inline void add_line(FixedPointSet& fps, LocusComponent::Shape shape, double level) {
  fps.components.push_back({shape, level});
  for (int i = 0; i < kWitnessGrid; ++i) {
    const double t = grid_value(i);
    add_witness(fps, shape == LocusComponent::Shape::HorizontalLine ? State2(t, level) : State2(level, t));
  }
}

inline void add_x_tilde_curve(FixedPointSet& fps) {
  fps.components.push_back({LocusComponent::Shape::CurveXOfY, 0.0});
  for (int i = 0; i < kWitnessGrid; ++i) {
    const double y = grid_value(i);
    try {
      const double x = x_tilde(fps.params, y);
      add_witness(fps, State2(std::clamp(x, 0.0, 1.0), y));
    } catch (const DenominatorVanishes&) {
      fps.skipped_y.push_back(y);
    }
  }
}

// The a=b=1 curve: y (alpha-beta) x + sign*beta y = alpha x. Keep the sign
// whose curve actually consists of fixed points.
inline int resolve_ab1_sign(const ParamSet& p) {
  const double al = p.alpha(), be = p.beta();
  double worst[2] = {0.0, 0.0};
  const int signs[2] = {+1, -1};
  for (int k = 0; k < 2; ++k) {
    for (int i = 1; i < kWitnessGrid; ++i) {
      const double x = grid_value(i);
      const double denom = (al - be) * x + signs[k] * be;
      const double y = std::abs(denom) < kDenominatorTol ? -1.0 : al * x / denom;
      if (!(y >= 0.0 && y <= 1.0)) {
        worst[k] = INFINITY;
        break;
      }
      worst[k] = std::max(worst[k], residual(p, State2(x, y)));
    }
  }
  return worst[0] <= worst[1] ? +1 : -1;
}

}  // namespace detail

/// The complete set of fixed points of the operator.
///
/// Overlapping branches are resolved in a fixed order: identity, swap,
/// a=1 with alpha=0, a=b=1, continuum condition, isolated corners.
inline FixedPointSet fixed_point_set(const ParamSet& p) {
  using S = LocusComponent::Shape;
  FixedPointSet fps;
  fps.params = p;
  const double a = p.a(), b = p.b(), al = p.alpha(), be = p.beta();

  if (a == 1 && b == 1 && al == 0 && be == 0) {
    fps.kind = LocusKind::CurveContinuum;
    fps.every_point_fixed = true;
    fps.components.push_back({S::Everything, 0.0});
    for (int i = 0; i < kWitnessGrid; ++i) {
      detail::add_witness(fps, State2(detail::grid_value(i), 1.0 - detail::grid_value(i)));
    }
  } else if (a == 0 && b == 0 && al == 1 && be == 1) {
    // Swap map: the diagonal is fixed and everything else has period two.
    fps.kind = LocusKind::CurveContinuum;
    fps.period_two = true;
    detail::add_x_tilde_curve(fps);
  } else if (a == 1 && al == 0) {
    fps.kind = LocusKind::SegmentX0;
    detail::add_line(fps, S::HorizontalLine, 0.0);
    detail::add_line(fps, S::VerticalLine, 1.0);
  } else if (a == 1 && b == 1) {
    if (be == 0) {
      fps.kind = LocusKind::SegmentY;
      detail::add_line(fps, S::VerticalLine, 0.0);
      detail::add_line(fps, S::HorizontalLine, 1.0);
    } else {
      fps.kind = LocusKind::CurveAB1;
      fps.curve_sign = detail::resolve_ab1_sign(p);
      fps.components.push_back({S::CurveYOfX, 0.0});
      for (int i = 0; i < kWitnessGrid; ++i) {
        detail::add_witness(fps, fps.ab1_point(detail::grid_value(i)));
      }
    }
  } else if (continuum_condition(p)) {
    fps.kind = LocusKind::CurveContinuum;
    detail::add_x_tilde_curve(fps);
    // b = 1 forces beta = 0 here; x~ is undefined at y = 1 and the whole top edge is fixed.
    if (b == 1) detail::add_line(fps, S::HorizontalLine, 1.0);
  } else {
    fps.kind = LocusKind::IsolatedPair;
    fps.components.push_back({S::Corners, 0.0});
  }

  detail::add_witness(fps, State2(0, 0));
  detail::add_witness(fps, State2(1, 1));
  return fps;
}

/// Whether s lies on the locus (within tol in the defining equation).
inline bool on_locus(const FixedPointSet& fps, const State2& s, double tol = 1e-9) {
  using S = LocusComponent::Shape;
  if (distance_inf(s, State2(0, 0)) <= tol || distance_inf(s, State2(1, 1)) <= tol) return true;
  const ParamSet& p = fps.params;
  for (const auto& c : fps.components) {
    switch (c.shape) {
      case S::Corners: break;
      case S::Everything: return true;
      case S::HorizontalLine:
        if (std::abs(s.y - c.level) <= tol) return true;
        break;
      case S::VerticalLine:
        if (std::abs(s.x - c.level) <= tol) return true;
        break;
      case S::CurveXOfY: {
        const double denom = (1.0 - p.a()) + (p.a() - p.b()) * s.y;
        if (std::abs(denom * s.x - (1.0 - p.b()) * s.y) <= tol) return true;
        break;
      }
      case S::CurveYOfX: {
        const double denom = (p.alpha() - p.beta()) * s.x + fps.curve_sign * p.beta();
        if (std::abs(denom * s.y - p.alpha() * s.x) <= tol) return true;
        break;
      }
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Linearization

struct Mat2 {
  double a00 = 0, a01 = 0;
  double a10 = 0, a11 = 0;

  double trace() const { return a00 + a11; }
  double det() const { return a00 * a11 - a01 * a10; }

  friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// Matrix of partial derivatives of the reduced map at s.
inline Mat2 jacobian(const ParamSet& p, const State2& s) {
  const double dxy = p.b() - p.a();
  const double dab = p.beta() - p.alpha();
  return {dxy * s.y + p.a(), dxy * s.x + (1.0 - p.b()), dab * s.y + p.alpha(), dab * s.x + (1.0 - p.beta())};
}

/// Central-difference Jacobian; the polynomial map is evaluated past the square's edges if needed.
inline Mat2 numeric_jacobian(const ParamSet& p, const State2& s, double h = 1e-6) {
  const auto fxp = step2_raw(p, s.x + h, s.y), fxm = step2_raw(p, s.x - h, s.y);
  const auto fyp = step2_raw(p, s.x, s.y + h), fym = step2_raw(p, s.x, s.y - h);
  const double inv = 0.5 / h;
  return {(fxp[0] - fxm[0]) * inv, (fyp[0] - fym[0]) * inv, (fxp[1] - fxm[1]) * inv, (fyp[1] - fym[1]) * inv};
}

inline double max_entry_difference(const Mat2& u, const Mat2& v) {
  return std::max({std::abs(u.a00 - v.a00), std::abs(u.a01 - v.a01), std::abs(u.a10 - v.a10),
                   std::abs(u.a11 - v.a11)});
}

using Eigenpair = std::array<std::complex<double>, 2>;

/// Roots of lambda^2 - tr lambda + det = 0, sorted by descending magnitude
/// then descending real part (and imaginary part for a conjugate pair).
inline Eigenpair eigenvalues_from(double tr, double det) {
  const double disc = std::fma(tr, tr, -4.0 * det);
  Eigenpair ev;
  if (disc >= 0.0) {
    // Larger root from the branch without cancellation, the other from the product.
    const double big = 0.5 * (tr + std::copysign(std::sqrt(disc), tr));
    const double small = big != 0.0 ? det / big : 0.0;
    ev = {std::complex<double>(big, 0.0), std::complex<double>(small, 0.0)};
  } else {
    const double im = 0.5 * std::sqrt(-disc);
    ev = {std::complex<double>(0.5 * tr, im), std::complex<double>(0.5 * tr, -im)};
  }
  auto before = [](const std::complex<double>& u, const std::complex<double>& v) {
    if (std::abs(u) != std::abs(v)) return std::abs(u) > std::abs(v);
    if (u.real() != v.real()) return u.real() > v.real();
    return u.imag() > v.imag();
  };
  if (before(ev[1], ev[0])) std::swap(ev[0], ev[1]);
  return ev;
}

inline Eigenpair eigenvalues(const Mat2& j) { return eigenvalues_from(j.trace(), j.det()); }

enum class Stability { Attracting, Repelling, Saddle, NonHyperbolic };

inline std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::Attracting: return "Attracting";
    case Stability::Repelling: return "Repelling";
    case Stability::Saddle: return "Saddle";
    case Stability::NonHyperbolic: return "NonHyperbolic";
  }
  return "?";
}

inline Stability classify(const std::array<double, 2>& magnitudes) {
  constexpr double lo = 1.0 - kHyperbolicityTol;
  constexpr double hi = 1.0 + kHyperbolicityTol;
  int inside = 0, outside = 0;
  for (double m : magnitudes) {
    if (m < lo) ++inside;
    else if (m > hi) ++outside;
    else return Stability::NonHyperbolic;
  }
  if (inside == 2) return Stability::Attracting;
  if (outside == 2) return Stability::Repelling;
  return Stability::Saddle;
}

/// Which closed-form eigenvalue expression a point admits.
enum class ClosedForm { None, Origin, Unit, Continuum, SegmentX0, CurveAB1 };

inline std::string_view to_string(ClosedForm c) {
  switch (c) {
    case ClosedForm::None: return "none";
    case ClosedForm::Origin: return "origin";
    case ClosedForm::Unit: return "unit";
    case ClosedForm::Continuum: return "continuum";
    case ClosedForm::SegmentX0: return "segment-x0";
    case ClosedForm::CurveAB1: return "curve-ab1";
  }
  return "?";
}

/// Eigenvalues of the Jacobian at (0,0) from the explicit root formula.
inline std::array<double, 2> origin_eigenvalues(const ParamSet& p) {
  const double a = p.a(), b = p.b(), al = p.alpha(), be = p.beta();
  const double root = std::sqrt((be - 1.0 + a) * (be - 1.0 + a) + 4.0 * al * (1.0 - b));
  return {0.5 * (1.0 + a - be + root), 0.5 * (1.0 + a - be - root)};
}

/// Eigenvalues of the Jacobian at (1,1) from the explicit root formula.
inline std::array<double, 2> unit_eigenvalues(const ParamSet& p) {
  const double a = p.a(), b = p.b(), al = p.alpha(), be = p.beta();
  const double root = std::sqrt((al + b - 1.0) * (al + b - 1.0) + 4.0 * be * (1.0 - a));
  return {0.5 * (1.0 - al + b + root), 0.5 * (1.0 - al + b - root)};
}

/// Eigenvalues at a point (x, y) of the continuum curve, written through
/// gamma1 = (b-a)(1-beta) + (alpha-beta)(1-b) and gamma2 = a(beta-alpha) + alpha(a-b).
/// Complex when the radicand is negative.
inline Eigenpair continuum_eigenvalues(const ParamSet& p, const State2& s) {
  const double a = p.a(), b = p.b(), al = p.alpha(), be = p.beta();
  const double g1 = (b - a) * (1.0 - be) + (al - be) * (1.0 - b);
  const double g2 = a * (be - al) + al * (a - b);
  const double half_tr = 0.5 * ((b - a) * s.y + (be - al) * s.x + 1.0 + a - be);
  const double u = (a - b) * s.y + (al - be) * s.x + be - a - 1.0;
  const double radicand = u * u - 4.0 * (g1 * s.y + g2 * s.x + a * (1.0 - be) + al * (b - 1.0));
  const std::complex<double> root = std::sqrt(std::complex<double>(radicand, 0.0));
  return {half_tr + 0.5 * root, half_tr - 0.5 * root};
}

struct StabilityReport {
  State2 point;
  Mat2 jacobian;
  Eigenpair eigenvalues;
  std::array<double, 2> magnitudes{};
  Stability stability = Stability::NonHyperbolic;
  double fixed_point_residual = 0.0;
  bool not_fixed_warning = false;  // point is not a fixed point (residual >= 1e-9)
  ClosedForm closed_form = ClosedForm::None;
  std::optional<Eigenpair> closed_form_eigenvalues;
  double closed_form_deviation = 0.0;  // max |closed form - Jacobian eigenvalue|, matched by pairing
};

namespace detail {

inline double pair_deviation(const Eigenpair& computed, const Eigenpair& reference) {
  const double direct = std::max(std::abs(computed[0] - reference[0]), std::abs(computed[1] - reference[1]));
  const double swapped = std::max(std::abs(computed[0] - reference[1]), std::abs(computed[1] - reference[0]));
  return std::min(direct, swapped);
}

inline Eigenpair real_pair(double l1, double l2) { return {std::complex<double>(l1, 0), std::complex<double>(l2, 0)}; }

}  // namespace detail

/// Linearization at s. The primary path is Jacobian -> eigenvalues -> class;
/// where a closed form exists it is evaluated as a cross-check.
inline StabilityReport stability_at(const ParamSet& p, const State2& s) {
  StabilityReport r;
  r.point = s;
  r.jacobian = jacobian(p, s);
  r.eigenvalues = eigenvalues(r.jacobian);
  r.magnitudes = {std::abs(r.eigenvalues[0]), std::abs(r.eigenvalues[1])};
  r.stability = classify(r.magnitudes);
  r.fixed_point_residual = residual(p, s);
  r.not_fixed_warning = r.fixed_point_residual >= kFixedPointWarnTol;

  const double a = p.a(), b = p.b(), al = p.alpha(), be = p.beta();
  if (s.x == 0 && s.y == 0) {
    const auto l = origin_eigenvalues(p);
    r.closed_form = ClosedForm::Origin;
    r.closed_form_eigenvalues = detail::real_pair(l[0], l[1]);
  } else if (s.x == 1 && s.y == 1) {
    const auto l = unit_eigenvalues(p);
    r.closed_form = ClosedForm::Unit;
    r.closed_form_eigenvalues = detail::real_pair(l[0], l[1]);
  } else if (a == 1 && al == 0 && s.y == 0) {
    r.closed_form = ClosedForm::SegmentX0;
    r.closed_form_eigenvalues = detail::real_pair(1.0 + (s.x - 1.0) * be, 1.0);
  } else if (a == 1 && b == 1 && !r.not_fixed_warning) {
    r.closed_form = ClosedForm::CurveAB1;
    r.closed_form_eigenvalues = detail::real_pair(1.0, 1.0 - be + (be - al) * s.x);
  } else if (continuum_condition(p) && !r.not_fixed_warning) {
    r.closed_form = ClosedForm::Continuum;
    r.closed_form_eigenvalues = continuum_eigenvalues(p, s);
  }
  if (r.closed_form_eigenvalues) {
    r.closed_form_deviation = detail::pair_deviation(r.eigenvalues, *r.closed_form_eigenvalues);
  }
  return r;
}

/// Classes along the x~ curve for a uniform grid of y values (skips undefined points).
inline std::vector<std::pair<double, Stability>> continuum_sweep(const ParamSet& p, int samples) {
  std::vector<std::pair<double, Stability>> out;
  if (samples < 2) throw ArgumentError("continuum sweep needs at least 2 samples");
  if (!continuum_condition(p)) return out;
  for (int i = 0; i < samples; ++i) {
    const double y = static_cast<double>(i) / (samples - 1);
    try {
      const double x = std::clamp(x_tilde(p, y), 0.0, 1.0);
      out.emplace_back(y, stability_at(p, State2(x, y)).stability);
    } catch (const DenominatorVanishes&) {
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The published five-row stability table.

struct TableRow {
  ParamSet params;
  std::array<double, 2> origin_magnitudes;
  std::array<double, 2> unit_magnitudes;
  Stability origin_type;
  Stability unit_type;
};

inline const std::array<TableRow, 5>& published_table() {
  using St = Stability;
  static const std::array<TableRow, 5> rows{{
      {ParamSet(0.67, 0.97, 0.896, 0.908), {0.713, 0.0487}, {0.836, 0.238}, St::Attracting, St::Attracting},
      {ParamSet(0.173, 0.718, 0.027, 0.927), {0.224, 0.022}, {1.210, 1.210}, St::Attracting, St::Repelling},
      {ParamSet(0.487, 0.329, 0.0017, 0.0675), {0.935, 0.484}, {1.521, 0.193}, St::Attracting, St::Saddle},
      {ParamSet(0.345, 0.6244, 0.829, 0.185), {1.185, 0.025}, {0.777, 0.0185}, St::Saddle, St::Attracting},
      {ParamSet(0.422, 0.786, 0.584, 0.024), {1.148, 0.025}, {1.422, 0.220}, St::Saddle, St::Saddle},
  }};
  return rows;
}

}  // namespace volterra
