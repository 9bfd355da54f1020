#pragma once

// Command implementations behind the `volterra` executable. Each command
// writes to a stream and returns a process exit status, so the commands can
// be driven directly from tests.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "volterra/core.hpp"
#include "volterra/fixed_points.hpp"
#include "volterra/subfamilies.hpp"

namespace volterra::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Format { JsonLines, Csv };

struct Grid {
  std::size_t nx = 0;
  std::size_t ny = 0;
};

struct RunConfig {
  ParamSet params{0, 0, 0, 0};
  std::optional<State2> initial;
  std::optional<Grid> grid;
  std::size_t max_iter = kDefaultMaxIter;
  double tol = kDefaultTol;
  std::optional<std::uint64_t> seed;
  Format format = Format::JsonLines;
  std::string output;  // empty: standard output
  bool paper_table = false;

  void validate() const {
    if (max_iter < 1) throw UsageError("--max-iter must be at least 1");
    if (!(tol > 0.0)) throw UsageError("--tol must be positive");
    if (grid && (grid->nx < 2 || grid->ny < 2)) throw UsageError("--nx and --ny must be at least 2");
  }
};

// ---------------------------------------------------------------------------
// Records

/// Shortest decimal string that reads back to the same double.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

using Value = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

/// A flat record with ordered fields, printable as one JSON object or one CSV row.
class Record {
 public:
  Record& set(std::string key, Value v) {
    for (auto& [k, old] : fields_) {
      if (k == key) {
        old = std::move(v);
        return *this;
      }
    }
    fields_.emplace_back(std::move(key), std::move(v));
    return *this;
  }
  Record& set(std::string key, double v) { return set(std::move(key), Value(v)); }
  Record& set(std::string key, bool v) { return set(std::move(key), Value(v)); }
  Record& set(std::string key, std::size_t v) { return set(std::move(key), Value(static_cast<std::int64_t>(v))); }
  Record& set(std::string key, int v) { return set(std::move(key), Value(static_cast<std::int64_t>(v))); }
  Record& set(std::string key, const char* v) { return set(std::move(key), Value(std::string(v))); }
  Record& set(std::string key, std::string_view v) { return set(std::move(key), Value(std::string(v))); }
  Record& set(std::string key, const std::string& v) { return set(std::move(key), Value(v)); }
  Record& set(std::string key, std::int64_t v) { return set(std::move(key), Value(v)); }

  const Value* get(std::string_view key) const {
    for (const auto& [k, v] : fields_) {
      if (k == key) return &v;
    }
    return nullptr;
  }
  const std::vector<std::pair<std::string, Value>>& fields() const { return fields_; }

 private:
  std::vector<std::pair<std::string, Value>> fields_;
};

namespace detail {

inline std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string render(const Value& v, bool json) {
  struct Visitor {
    bool json;
    std::string operator()(std::monostate) const { return json ? "null" : ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(const std::string& s) const { return json ? json_escape(s) : csv_escape(s); }
  };
  return std::visit(Visitor{json}, v);
}

}  // namespace detail

/// Writes records with a fixed column list. JSON lines carry the fields a
/// record sets, in column order; CSV starts with a header row and leaves
/// unset cells empty.
class RecordWriter {
 public:
  RecordWriter(std::ostream& os, Format fmt, std::vector<std::string> columns)
      : os_(os), fmt_(fmt), columns_(std::move(columns)) {}

  void write(const Record& r) {
    if (fmt_ == Format::Csv && !header_done_) {
      for (std::size_t i = 0; i < columns_.size(); ++i) os_ << (i ? "," : "") << columns_[i];
      os_ << '\n';
      header_done_ = true;
    }
    if (fmt_ == Format::JsonLines) {
      os_ << '{';
      bool first = true;
      for (const std::string& col : columns_) {
        const Value* v = r.get(col);
        if (!v) continue;
        os_ << (first ? "" : ",") << detail::json_escape(col) << ':' << detail::render(*v, true);
        first = false;
      }
      os_ << "}\n";
    } else {
      for (std::size_t i = 0; i < columns_.size(); ++i) {
        const Value* v = r.get(columns_[i]);
        os_ << (i ? "," : "") << detail::render(v ? *v : Value{}, false);
      }
      os_ << '\n';
    }
  }

 private:
  std::ostream& os_;
  Format fmt_;
  std::vector<std::string> columns_;
  bool header_done_ = false;
};

/// JSON object with only the fields that are set.
inline std::string to_json(const Record& r) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : r.fields()) {
    out += first ? "" : ",";
    out += detail::json_escape(k) + ":" + detail::render(v, true);
    first = false;
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// step

inline const State2& require_initial(const RunConfig& cfg) {
  if (!cfg.initial) throw UsageError("this command needs --x0 and --y0");
  return *cfg.initial;
}

inline int cmd_step(const RunConfig& cfg, std::ostream& os) {
  cfg.validate();
  const State2 next = step2(cfg.params, require_initial(cfg));
  os << format_number(next.x) << ' ' << format_number(next.y) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// trajectory

inline std::string_view outcome_name(const Outcome& o) {
  if (std::holds_alternative<Converged>(o)) return "converged";
  if (std::holds_alternative<Cycle>(o)) return "cycle";
  return "max-iter";
}

inline const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> cols{"n", "x", "y", "outcome", "period", "steps"};
  return cols;
}

/// One record per iterate, then a terminal record carrying the outcome.
inline int cmd_trajectory(const RunConfig& cfg, std::ostream& os) {
  cfg.validate();
  const State2& s0 = require_initial(cfg);
  RecordWriter w(os, cfg.format, trajectory_columns());
  const Outcome out = iterate_visit(cfg.params, s0, cfg.max_iter, cfg.tol, [&](std::size_t n, const State2& s) {
    w.write(Record().set("n", n).set("x", s.x).set("y", s.y));
  });

  Record term;
  term.set("outcome", outcome_name(out));
  if (const auto* c = std::get_if<Converged>(&out)) {
    term.set("n", c->steps).set("x", c->limit.x).set("y", c->limit.y).set("steps", c->steps);
    if (distance_inf(step2(cfg.params, c->limit), c->limit) >= fixed_point_tol(cfg.tol)) {
      throw ConsistencyError("converged limit fails the fixed-point residual bound");
    }
  } else if (const auto* c = std::get_if<Cycle>(&out)) {
    term.set("period", c->period).set("steps", c->steps);
  } else {
    const auto& m = std::get<MaxIterReached>(out);
    term.set("n", m.steps).set("x", m.last.x).set("y", m.last.y).set("steps", m.steps);
  }
  w.write(term);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// fixed-points

inline const std::vector<std::string>& fixed_point_columns() {
  static const std::vector<std::string> cols{
      "record",    "kind",       "components", "every_point_fixed", "period_two", "curve_sign",
      "x",         "y",          "residual",   "lambda1_re",        "lambda1_im", "lambda2_re",
      "lambda2_im", "mag1",      "mag2",       "class",             "closed_form", "closed_form_deviation"};
  return cols;
}

inline std::string describe_components(const FixedPointSet& fps) {
  std::string out;
  for (const auto& c : fps.components) {
    if (!out.empty()) out += ';';
    out += std::string(to_string(c.shape));
    if (c.shape == LocusComponent::Shape::HorizontalLine || c.shape == LocusComponent::Shape::VerticalLine) {
      out += '@' + format_number(c.level);
    }
  }
  return out;
}

inline Record stability_record(const StabilityReport& r) {
  Record rec;
  rec.set("record", "stability")
      .set("x", r.point.x)
      .set("y", r.point.y)
      .set("residual", r.fixed_point_residual)
      .set("lambda1_re", r.eigenvalues[0].real())
      .set("lambda1_im", r.eigenvalues[0].imag())
      .set("lambda2_re", r.eigenvalues[1].real())
      .set("lambda2_im", r.eigenvalues[1].imag())
      .set("mag1", r.magnitudes[0])
      .set("mag2", r.magnitudes[1])
      .set("class", to_string(r.stability))
      .set("closed_form", to_string(r.closed_form));
  if (r.closed_form_eigenvalues) rec.set("closed_form_deviation", r.closed_form_deviation);
  return rec;
}

inline void write_fixed_points(const RunConfig& cfg, std::ostream& os) {
  const FixedPointSet fps = fixed_point_set(cfg.params);
  RecordWriter w(os, cfg.format, fixed_point_columns());
  w.write(Record()
              .set("record", "locus")
              .set("kind", to_string(fps.kind))
              .set("components", describe_components(fps))
              .set("every_point_fixed", fps.every_point_fixed)
              .set("period_two", fps.period_two)
              .set("curve_sign", fps.curve_sign));
  for (const State2& s : fps.witnesses) {
    w.write(Record().set("record", "witness").set("x", s.x).set("y", s.y).set("residual", residual(cfg.params, s)));
  }
  w.write(stability_record(stability_at(cfg.params, State2(0, 0))));
  w.write(stability_record(stability_at(cfg.params, State2(1, 1))));
  if (cfg.initial) w.write(stability_record(stability_at(cfg.params, *cfg.initial)));
}

/// Magnitudes for one row of the published table next to recomputed values.
struct TableComparison {
  TableRow row;
  StabilityReport origin;
  StabilityReport unit;
  double origin_discrepancy = 0.0;  // max |recomputed - printed|
  double unit_discrepancy = 0.0;
  double jacobian_fd_error = 0.0;   // max entry gap to central differences, both corners
  double closed_form_error = 0.0;   // max |root formula - Jacobian eigenvalue|, both corners
};

inline constexpr double kTableTolerance = 1e-3;

inline std::vector<TableComparison> compare_published_table() {
  std::vector<TableComparison> out;
  for (const TableRow& row : published_table()) {
    TableComparison c{row, stability_at(row.params, State2(0, 0)), stability_at(row.params, State2(1, 1))};
    for (int i = 0; i < 2; ++i) {
      c.origin_discrepancy = std::max(c.origin_discrepancy, std::abs(c.origin.magnitudes[i] - row.origin_magnitudes[i]));
      c.unit_discrepancy = std::max(c.unit_discrepancy, std::abs(c.unit.magnitudes[i] - row.unit_magnitudes[i]));
    }
    c.jacobian_fd_error =
        std::max(max_entry_difference(c.origin.jacobian, numeric_jacobian(row.params, State2(0, 0))),
                 max_entry_difference(c.unit.jacobian, numeric_jacobian(row.params, State2(1, 1))));
    c.closed_form_error = std::max(c.origin.closed_form_deviation, c.unit.closed_form_deviation);
    out.push_back(c);
  }
  return out;
}

inline std::string fixed3(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << v;
  return s.str();
}

inline std::string pair3(const std::array<double, 2>& m) { return "(" + fixed3(m[0]) + ", " + fixed3(m[1]) + ")"; }

inline void write_paper_table(std::ostream& os) {
  os << "row  (a, b, alpha, beta)            |  (0,0) recomputed   printed             diff   |"
        "  (1,1) recomputed   printed             diff   |  type recomputed           printed                  "
        "| fd-err    formula-err  flags\n";
  int idx = 1;
  for (const TableComparison& c : compare_published_table()) {
    const ParamSet& p = c.row.params;
    std::ostringstream params;
    params << "(" << format_number(p.a()) << ", " << format_number(p.b()) << ", " << format_number(p.alpha())
           << ", " << format_number(p.beta()) << ")";
    const std::string recomputed_type =
        std::string(to_string(c.origin.stability)) + ", " + std::string(to_string(c.unit.stability));
    const std::string printed_type =
        std::string(to_string(c.row.origin_type)) + ", " + std::string(to_string(c.row.unit_type));

    std::string flags;
    if (c.origin_discrepancy > kTableTolerance) flags += "origin-mismatch ";
    if (c.unit_discrepancy > kTableTolerance) flags += "unit-mismatch ";
    if (recomputed_type != printed_type) flags += "type-mismatch ";
    if (flags.empty()) flags = "ok";

    char fd[32], cf[32];
    std::snprintf(fd, sizeof fd, "%.1e", c.jacobian_fd_error);
    std::snprintf(cf, sizeof cf, "%.1e", c.closed_form_error);
    os << std::left << std::setw(5) << idx++ << std::setw(31) << params.str() << "|  " << std::setw(19)
       << pair3(c.origin.magnitudes) << std::setw(20) << pair3(c.row.origin_magnitudes) << std::setw(7)
       << fixed3(c.origin_discrepancy) << "|  " << std::setw(19) << pair3(c.unit.magnitudes) << std::setw(20)
       << pair3(c.row.unit_magnitudes) << std::setw(7) << fixed3(c.unit_discrepancy) << "|  " << std::setw(26)
       << recomputed_type << std::setw(25) << printed_type << "| " << std::setw(10) << fd << std::setw(13) << cf
       << flags << '\n';
  }
  os << "diff = max |recomputed - printed| over the pair; mismatch flagged above " << fixed3(kTableTolerance)
     << ". fd-err = max Jacobian entry gap to central differences (h = 1e-6);"
        " formula-err = max gap between the root formula and the Jacobian eigenvalues.\n";
}

inline int cmd_fixed_points(const RunConfig& cfg, std::ostream& os) {
  cfg.validate();
  if (cfg.paper_table) {
    write_paper_table(os);
  } else {
    write_fixed_points(cfg, os);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// portrait

struct PortraitRecord {
  double x0 = 0.0;
  double y0 = 0.0;
  std::string outcome;
  std::optional<double> x_lim;
  std::optional<double> y_lim;
  std::size_t steps = 0;
  Subfamily subfamily = Subfamily::General;
};

inline const std::vector<std::string>& portrait_columns() {
  static const std::vector<std::string> cols{"x0", "y0", "outcome", "x_lim", "y_lim", "steps", "subfamily"};
  return cols;
}

inline Record to_record(const PortraitRecord& r) {
  Record rec;
  rec.set("x0", r.x0).set("y0", r.y0).set("outcome", r.outcome);
  rec.set("x_lim", r.x_lim ? Value(*r.x_lim) : Value{});
  rec.set("y_lim", r.y_lim ? Value(*r.y_lim) : Value{});
  rec.set("steps", r.steps).set("subfamily", to_string(r.subfamily));
  return rec;
}

inline double grid_coordinate(std::size_t i, std::size_t n) {
  if (i + 1 == n) return 1.0;
  return static_cast<double>(i) / static_cast<double>(n - 1);
}

/// Iterates from every node of an nx-by-ny grid with inclusive endpoints,
/// in row-major order starting at (0,0) (x varies fastest).
inline std::vector<PortraitRecord> portrait(const ParamSet& p, Grid grid, std::size_t max_iter, double tol,
                                            unsigned threads = 0) {
  if (grid.nx < 2 || grid.ny < 2) throw ArgumentError("portrait grid needs at least 2 nodes per axis");
  const Subfamily tag = detect_subfamily(p).tag;
  std::vector<PortraitRecord> out(grid.nx * grid.ny);

  auto fill_row = [&](std::size_t j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      PortraitRecord& r = out[j * grid.nx + i];
      r.x0 = grid_coordinate(i, grid.nx);
      r.y0 = grid_coordinate(j, grid.ny);
      r.subfamily = tag;
      const Outcome o = run(p, State2(r.x0, r.y0), max_iter, tol);
      r.outcome = std::string(outcome_name(o));
      if (const auto* c = std::get_if<Converged>(&o)) {
        r.x_lim = c->limit.x;
        r.y_lim = c->limit.y;
        r.steps = c->steps;
      } else if (const auto* c = std::get_if<Cycle>(&o)) {
        r.steps = c->steps;
      } else {
        r.steps = std::get<MaxIterReached>(o).steps;
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, grid.ny));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t j = t; j < grid.ny; j += threads) fill_row(j);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

inline int cmd_portrait(const RunConfig& cfg, std::ostream& os) {
  cfg.validate();
  if (!cfg.grid) throw UsageError("portrait needs --nx and --ny");
  RecordWriter w(os, cfg.format, portrait_columns());
  for (const PortraitRecord& r : portrait(cfg.params, *cfg.grid, cfg.max_iter, cfg.tol)) w.write(to_record(r));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// subfamily

inline constexpr std::size_t kSweepStarts = 200;
inline constexpr std::uint64_t kDefaultSeed = 0;
inline constexpr int kConjugacyGrid = 1001;

struct SweepSummary {
  std::size_t samples = 0;
  std::size_t converged = 0;
  std::size_t cycles = 0;
  std::size_t max_iter_reached = 0;
  std::size_t closed_form_checked = 0;
  double closed_form_max_error = 0.0;
  bool lyapunov_ok = true;
  bool invariant_coordinate_exact = true;
  bool absorbed_in_one_step = true;
};

/// Iterates from seeded random starts and compares against the closed form where one applies.
inline SweepSummary subfamily_sweep(const ParamSet& p, std::uint64_t seed, std::size_t starts, std::size_t max_iter,
                                    double tol) {
  const Subfamily tag = detect_subfamily(p).tag;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SweepSummary sum;
  for (std::size_t k = 0; k < starts; ++k) {
    const State2 s0(unit(rng), unit(rng));
    ++sum.samples;
    const Trajectory t = iterate(p, s0, max_iter, tol);
    if (const auto* c = std::get_if<Converged>(&t.outcome)) {
      ++sum.converged;
      try {
        if (auto cf = closed_form_limit(p, s0); cf && cf->valid) {
          ++sum.closed_form_checked;
          sum.closed_form_max_error = std::max(sum.closed_form_max_error, distance_inf(cf->limit, c->limit));
        }
      } catch (const std::domain_error&) {
      }
    } else if (t.cycled()) {
      ++sum.cycles;
    } else {
      ++sum.max_iter_reached;
    }

    if (tag == Subfamily::Linear && p.a() != p.alpha()) {
      sum.lyapunov_ok = sum.lyapunov_ok && lyapunov_check(p, t.states);
    }
    for (const State2& s : t.states) {
      if (tag == Subfamily::YInvariant && s.y != s0.y) sum.invariant_coordinate_exact = false;
      if (tag == Subfamily::XInvariant && s.x != s0.x) sum.invariant_coordinate_exact = false;
    }
    if (tag == Subfamily::Diagonal && t.states.size() > 1 && t.states[1].x != t.states[1].y) {
      sum.absorbed_in_one_step = false;
    }
  }
  return sum;
}

inline double max_conjugacy_defect(const ParamSet& p) {
  double worst = 0.0;
  for (int i = 0; i < kConjugacyGrid; ++i) {
    worst = std::max(worst, conjugacy_defect(p, static_cast<double>(i) / (kConjugacyGrid - 1)));
  }
  return worst;
}

inline Record subfamily_report(const RunConfig& cfg) {
  const ParamSet& p = cfg.params;
  const Subfamily tag = detect_subfamily(p).tag;
  const std::uint64_t seed = cfg.seed.value_or(kDefaultSeed);
  Record rec;
  rec.set("subfamily", to_string(tag))
      .set("a", p.a())
      .set("b", p.b())
      .set("alpha", p.alpha())
      .set("beta", p.beta())
      .set("continuum_condition", continuum_condition(p))
      .set("fixed_point_kind", to_string(fixed_point_set(p).kind));

  if (tag == Subfamily::Diagonal) {
    rec.set("mu", logistic_mu(p));
    rec.set("limit_x", p.a() < p.b() ? 0.0 : 1.0).set("limit_y", p.a() < p.b() ? 0.0 : 1.0);
    if (!(p.a() == 0 && p.b() == 1)) rec.set("conjugacy_max_defect", max_conjugacy_defect(p));
  }
  if (tag == Subfamily::Corner && p.a() < 1 && p.beta() > 0) rec.set("limit_x", 0.0).set("limit_y", 0.0);

  if (cfg.initial) {
    const State2& s0 = *cfg.initial;
    rec.set("x0", s0.x).set("y0", s0.y);
    try {
      if (auto cf = closed_form_limit(p, s0)) {
        rec.set("closed_form", to_string(cf->formula))
            .set("closed_form_valid", cf->valid)
            .set("limit_x", cf->limit.x)
            .set("limit_y", cf->limit.y);
      } else {
        rec.set("closed_form", "none");
      }
    } catch (const std::domain_error& e) {
      rec.set("closed_form", "hypothesis-violated").set("closed_form_error", e.what());
    }
    const Outcome o = run(p, s0, cfg.max_iter, cfg.tol);
    rec.set("iterated_outcome", outcome_name(o));
    if (const auto* c = std::get_if<Converged>(&o)) {
      rec.set("iterated_x", c->limit.x).set("iterated_y", c->limit.y).set("iterated_steps", c->steps);
    }
  } else if (tag == Subfamily::General || tag == Subfamily::Involution) {
    rec.set("closed_form", "none");
  }

  const SweepSummary sw = subfamily_sweep(p, seed, kSweepStarts, cfg.max_iter, cfg.tol);
  rec.set("seed", static_cast<std::int64_t>(seed))
      .set("sweep_samples", sw.samples)
      .set("sweep_converged", sw.converged)
      .set("sweep_cycles", sw.cycles)
      .set("sweep_max_iter", sw.max_iter_reached);
  if (sw.closed_form_checked > 0) {
    rec.set("closed_form_checked", sw.closed_form_checked).set("closed_form_max_error", sw.closed_form_max_error);
  }
  if (tag == Subfamily::Linear && p.a() != p.alpha()) rec.set("lyapunov_ok", sw.lyapunov_ok);
  if (tag == Subfamily::YInvariant || tag == Subfamily::XInvariant) {
    rec.set("invariant_coordinate_exact", sw.invariant_coordinate_exact);
  }
  if (tag == Subfamily::Diagonal) rec.set("absorbed_in_one_step", sw.absorbed_in_one_step);

  std::string verdict;
  if (tag == Subfamily::Involution) verdict = "period-2";
  else if (sw.converged == sw.samples) verdict = "regular";
  else verdict = "not-regular";
  rec.set("verdict", verdict);
  return rec;
}

inline int cmd_subfamily(const RunConfig& cfg, std::ostream& os) {
  cfg.validate();
  const Record rec = subfamily_report(cfg);
  if (cfg.format == Format::JsonLines) {
    os << to_json(rec) << '\n';
  } else {
    os << "key,value\n";
    for (const auto& [k, v] : rec.fields()) os << k << ',' << detail::render(v, false) << '\n';
  }
  return kExitOk;
}

}  // namespace volterra::cli
