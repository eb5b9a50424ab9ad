#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tsfrac {

// Classification of a point of a time scale relative to its neighbors.
// right_scattered <=> sigma(t) > t; right_dense <=> sigma(t) == t (a finite
// maximum counts as right-dense by the sigma(max)=max convention, with
// is_max set). Left side analogous via rho; a minimum with rho(t)==t is
// neither left-scattered nor left-dense (is_min is set instead).
struct point_class {
  bool right_scattered = false;
  bool right_dense = false;
  bool left_scattered = false;
  bool left_dense = false;
  bool is_max = false;
  bool is_min = false;

  bool operator==(const point_class&) const = default;
};

std::string to_string(const point_class& c);

enum class direction { from_left, from_right };

// Sides of t on which points of the scale accumulate (where a limit s -> t
// within the scale can be probed).
struct directions {
  bool from_left = false;
  bool from_right = false;

  bool empty() const { return !from_left && !from_right; }
  bool has(direction d) const { return d == direction::from_left ? from_left : from_right; }
};

struct reals_scale {};
struct integers_scale {};

// {offset + k*h : k in Z}, h > 0.
struct hstep_scale {
  double h = 1.0;
  double offset = 0.0;
};

// {q^k : k in Z} together with 0, q > 1. All points are nonnegative; the
// positive points accumulate at 0 from the right.
struct qscale {
  double q = 2.0;
};

// Strictly increasing finite list of points.
struct finite_set_scale {
  std::vector<double> points;
};

// Closed interval [lo, hi]; lo == hi is an isolated point.
struct closed_interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Ordered pairwise-disjoint closed intervals and isolated points.
struct interval_union_scale {
  std::vector<closed_interval> parts;
};

// A nonempty closed subset of the reals in one of the canonical
// representations. All queries are pure; values are immutable once built.
class time_scale {
 public:
  using rep_type = std::variant<reals_scale, integers_scale, hstep_scale, qscale,
                                finite_set_scale, interval_union_scale>;

  static time_scale reals();
  static time_scale integers();
  static time_scale h_step(double h, double offset = 0.0);
  static time_scale q_scale(double q);
  static time_scale finite_set(std::vector<double> points);
  static time_scale interval_union(std::vector<closed_interval> parts);

  // Scale-spec grammar:
  //   "R" | "Z" | "hZ:<h>" | "hZ:<h>:<offset>" | "qZ:<q>"
  //   | "{p1,p2,...}" | "[a,b]" joined by "u", e.g. "[0,1]u[2,3]u{5}"
  static time_scale parse(std::string_view spec);

  const rep_type& rep() const { return rep_; }
  std::string str() const;

  // Default membership tolerance at t: 1e-12 * max(1, |t|).
  static double default_tol(double t);

  bool member(double t, std::optional<double> tol = std::nullopt) const;

  // Canonical member value nearest t (lattice scales snap decimal input to
  // the exact lattice point). Throws point_not_in_scale.
  double snap(double t) const;

  double sigma(double t) const;       // inf{s in T : s > t}; t itself at a maximum
  double rho(double t) const;         // sup{s in T : s < t}; t itself at a minimum
  double graininess(double t) const;  // sigma(t) - t
  point_class classify(double t) const;
  bool in_kappa(double t) const;      // false only at a left-scattered maximum
  directions approach_directions(double t) const;

  // A member s on the requested side of t with 0 < |s - t| <= h; exact
  // distance h when the local geometry allows, otherwise the nearest
  // admissible member. Throws no_point_on_side when none exists within h.
  double sample_toward(double t, direction dir, double h) const;

  double supremum() const;  // +inf for unbounded-above scales
  double infimum() const;   // -inf for unbounded-below scales

 private:
  explicit time_scale(rep_type rep) : rep_(std::move(rep)) {}

  rep_type rep_;
};

}  // namespace tsfrac
