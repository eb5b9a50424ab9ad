#include "tsfrac/timescale.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "tsfrac/errors.hpp"
#include "tsfrac/format.hpp"

namespace tsfrac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) raise(errc::invalid_scale, std::string(what) + " must be finite");
}

// Nearest lattice index of t in {offset + k*h}; clamped so llround stays in
// range (beyond 2^53 the lattice outresolves the doubles anyway).
long long lattice_index(double t, double h, double offset) {
  double r = std::clamp((t - offset) / h, -9.0e15, 9.0e15);
  return static_cast<long long>(std::llround(r));
}

double lattice_point(long long k, double h, double offset) {
  return offset + static_cast<double>(k) * h;
}

// Nearest exponent k with q^k ~ t, t > 0.
long long q_index(double t, double q) {
  return static_cast<long long>(std::llround(std::log(t) / std::log(q)));
}

// Index of the part containing t (within tol), or -1.
int find_part(const std::vector<closed_interval>& parts, double t, double tol) {
  auto it = std::upper_bound(parts.begin(), parts.end(), t,
                             [](double v, const closed_interval& p) { return v < p.lo; });
  if (it != parts.begin()) {
    const closed_interval& p = *(it - 1);
    if (t <= p.hi + tol) return static_cast<int>(it - 1 - parts.begin());
  }
  if (it != parts.end() && it->lo - t <= tol) return static_cast<int>(it - parts.begin());
  return -1;
}

}  // namespace

std::string to_string(const point_class& c) {
  std::string out;
  out += c.right_scattered ? "right-scattered" : "right-dense";
  if (c.left_scattered)
    out += "|left-scattered";
  else if (c.left_dense)
    out += "|left-dense";
  if (c.is_max) out += "|max";
  if (c.is_min) out += "|min";
  return out;
}

time_scale time_scale::reals() { return time_scale(reals_scale{}); }

time_scale time_scale::integers() { return time_scale(integers_scale{}); }

time_scale time_scale::h_step(double h, double offset) {
  require_finite(h, "hZ step");
  require_finite(offset, "hZ offset");
  if (h <= 0.0) raise(errc::invalid_scale, "hZ step must be positive");
  return time_scale(hstep_scale{h, offset});
}

time_scale time_scale::q_scale(double q) {
  require_finite(q, "qZ ratio");
  if (q <= 1.0) raise(errc::invalid_scale, "qZ ratio must exceed 1");
  return time_scale(qscale{q});
}

time_scale time_scale::finite_set(std::vector<double> points) {
  if (points.empty()) raise(errc::invalid_scale, "finite set must be nonempty");
  for (double p : points) require_finite(p, "finite-set point");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i] <= points[i - 1])
      raise(errc::invalid_scale, "finite-set points must be strictly increasing");
  return time_scale(finite_set_scale{std::move(points)});
}

time_scale time_scale::interval_union(std::vector<closed_interval> parts) {
  if (parts.empty()) raise(errc::invalid_scale, "interval union must be nonempty");
  for (const auto& p : parts) {
    require_finite(p.lo, "interval endpoint");
    require_finite(p.hi, "interval endpoint");
    if (p.lo > p.hi) raise(errc::invalid_scale, "interval [a,b] needs a <= b");
  }
  std::sort(parts.begin(), parts.end(),
            [](const closed_interval& a, const closed_interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < parts.size(); ++i)
    if (parts[i].lo <= parts[i - 1].hi)
      raise(errc::invalid_scale, "interval-union parts must be disjoint and ordered");
  return time_scale(interval_union_scale{std::move(parts)});
}

double time_scale::default_tol(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }

bool time_scale::member(double t, std::optional<double> tol_opt) const {
  if (!std::isfinite(t)) return false;
  double tol = tol_opt.value_or(default_tol(t));
  if (tol < 0.0) raise(errc::invalid_argument, "membership tolerance must be >= 0");

  struct visitor {
    double t, tol;
    bool operator()(const reals_scale&) const { return true; }
    bool operator()(const integers_scale&) const {
      return std::abs(t - static_cast<double>(lattice_index(t, 1.0, 0.0))) <= tol;
    }
    bool operator()(const hstep_scale& s) const {
      return std::abs(t - lattice_point(lattice_index(t, s.h, s.offset), s.h, s.offset)) <= tol;
    }
    bool operator()(const qscale& s) const {
      if (t < -tol) return false;
      if (std::abs(t) <= tol) return true;
      return std::abs(t - std::pow(s.q, static_cast<double>(q_index(t, s.q)))) <= tol;
    }
    bool operator()(const finite_set_scale& s) const {
      auto it = std::lower_bound(s.points.begin(), s.points.end(), t);
      if (it != s.points.end() && std::abs(*it - t) <= tol) return true;
      return it != s.points.begin() && std::abs(*(it - 1) - t) <= tol;
    }
    bool operator()(const interval_union_scale& s) const {
      return find_part(s.parts, t, tol) >= 0;
    }
  };
  return std::visit(visitor{t, tol}, rep_);
}

double time_scale::snap(double t) const {
  if (!member(t))
    raise(errc::point_not_in_scale, format_double(t) + " is not a point of " + str());
  double tol = default_tol(t);

  struct visitor {
    double t, tol;
    double operator()(const reals_scale&) const { return t; }
    double operator()(const integers_scale&) const {
      return static_cast<double>(lattice_index(t, 1.0, 0.0));
    }
    double operator()(const hstep_scale& s) const {
      return lattice_point(lattice_index(t, s.h, s.offset), s.h, s.offset);
    }
    double operator()(const qscale& s) const {
      if (std::abs(t) <= tol) return 0.0;
      return std::pow(s.q, static_cast<double>(q_index(t, s.q)));
    }
    double operator()(const finite_set_scale& s) const {
      auto it = std::lower_bound(s.points.begin(), s.points.end(), t);
      if (it == s.points.end()) return s.points.back();
      if (it != s.points.begin() && t - *(it - 1) < *it - t) return *(it - 1);
      return *it;
    }
    double operator()(const interval_union_scale& s) const {
      const closed_interval& p = s.parts[find_part(s.parts, t, tol)];
      return std::clamp(t, p.lo, p.hi);
    }
  };
  return std::visit(visitor{t, tol}, rep_);
}

double time_scale::sigma(double t) const {
  double ts = snap(t);

  struct visitor {
    double ts;
    double operator()(const reals_scale&) const { return ts; }
    double operator()(const integers_scale&) const { return ts + 1.0; }
    double operator()(const hstep_scale& s) const { return ts + s.h; }
    double operator()(const qscale& s) const { return ts == 0.0 ? 0.0 : ts * s.q; }
    double operator()(const finite_set_scale& s) const {
      auto it = std::lower_bound(s.points.begin(), s.points.end(), ts);
      return (it + 1 == s.points.end()) ? ts : *(it + 1);
    }
    double operator()(const interval_union_scale& s) const {
      double tol = default_tol(ts);
      std::size_t i = static_cast<std::size_t>(find_part(s.parts, ts, tol));
      if (ts < s.parts[i].hi) return ts;
      return (i + 1 < s.parts.size()) ? s.parts[i + 1].lo : ts;
    }
  };
  return std::visit(visitor{ts}, rep_);
}

double time_scale::rho(double t) const {
  double ts = snap(t);

  struct visitor {
    double ts;
    double operator()(const reals_scale&) const { return ts; }
    double operator()(const integers_scale&) const { return ts - 1.0; }
    double operator()(const hstep_scale& s) const { return ts - s.h; }
    double operator()(const qscale& s) const { return ts == 0.0 ? 0.0 : ts / s.q; }
    double operator()(const finite_set_scale& s) const {
      auto it = std::lower_bound(s.points.begin(), s.points.end(), ts);
      return (it == s.points.begin()) ? ts : *(it - 1);
    }
    double operator()(const interval_union_scale& s) const {
      double tol = default_tol(ts);
      std::size_t i = static_cast<std::size_t>(find_part(s.parts, ts, tol));
      if (ts > s.parts[i].lo) return ts;
      return (i > 0) ? s.parts[i - 1].hi : ts;
    }
  };
  return std::visit(visitor{ts}, rep_);
}

double time_scale::graininess(double t) const {
  // Exact step for the lattice scales; the generic difference elsewhere.
  if (std::holds_alternative<reals_scale>(rep_)) {
    snap(t);
    return 0.0;
  }
  if (std::holds_alternative<integers_scale>(rep_)) {
    snap(t);
    return 1.0;
  }
  if (const auto* s = std::get_if<hstep_scale>(&rep_)) {
    snap(t);
    return s->h;
  }
  double ts = snap(t);
  return sigma(ts) - ts;
}

double time_scale::supremum() const {
  struct visitor {
    double operator()(const reals_scale&) const { return kInf; }
    double operator()(const integers_scale&) const { return kInf; }
    double operator()(const hstep_scale&) const { return kInf; }
    double operator()(const qscale&) const { return kInf; }
    double operator()(const finite_set_scale& s) const { return s.points.back(); }
    double operator()(const interval_union_scale& s) const { return s.parts.back().hi; }
  };
  return std::visit(visitor{}, rep_);
}

double time_scale::infimum() const {
  struct visitor {
    double operator()(const reals_scale&) const { return -kInf; }
    double operator()(const integers_scale&) const { return -kInf; }
    double operator()(const hstep_scale&) const { return -kInf; }
    double operator()(const qscale&) const { return 0.0; }
    double operator()(const finite_set_scale& s) const { return s.points.front(); }
    double operator()(const interval_union_scale& s) const { return s.parts.front().lo; }
  };
  return std::visit(visitor{}, rep_);
}

point_class time_scale::classify(double t) const {
  double ts = snap(t);
  double sig = sigma(ts);
  double rh = rho(ts);

  point_class c;
  c.is_max = ts >= supremum();
  c.is_min = ts <= infimum();
  c.right_scattered = sig > ts;
  c.right_dense = !c.right_scattered;
  c.left_scattered = rh < ts;
  c.left_dense = (rh == ts) && !c.is_min;
  return c;
}

bool time_scale::in_kappa(double t) const {
  point_class c = classify(t);
  return !(c.is_max && c.left_scattered);
}

directions time_scale::approach_directions(double t) const {
  point_class c = classify(t);
  directions d;
  d.from_right = c.right_dense && !c.is_max;
  d.from_left = c.left_dense;
  return d;
}

double time_scale::sample_toward(double t, direction dir, double h) const {
  if (!(h > 0.0) || !std::isfinite(h))
    raise(errc::invalid_argument, "sample_toward needs h > 0");
  double ts = snap(t);
  bool right = dir == direction::from_right;

  auto none = [&]() -> double {
    raise(errc::no_point_on_side,
          "no point of " + str() + (right ? " right of " : " left of ") + format_double(ts) +
              " within " + format_double(h));
  };
  // Admissibility needs absolute slack in ts: fl(ts +- h) may land up to
  // ulp(ts)/2 beyond the exact distance h, which dwarfs any h-relative
  // tolerance once h is small against |ts|.
  double slack = h * 1e-12 + 8.0 * std::numeric_limits<double>::epsilon() * std::abs(ts);
  auto checked = [&, slack](double s) {
    if (s == ts || std::abs(s - ts) > h + slack) return none();
    return s;
  };

  struct visitor {
    double ts, h;
    bool right;
    const time_scale* self;
    decltype(none)& fail;
    decltype(checked)& ok;

    double operator()(const reals_scale&) const { return ok(right ? ts + h : ts - h); }
    double operator()(const integers_scale&) const { return step(); }
    double operator()(const hstep_scale&) const { return step(); }
    double step() const {
      return ok(right ? self->sigma(ts) : self->rho(ts));
    }
    double operator()(const qscale& s) const {
      if (ts == 0.0) {
        if (!right) return fail();
        double p = std::pow(s.q, std::floor(std::log(h) / std::log(s.q)));
        while (p > h && p > 0.0) p /= s.q;
        if (!(p > 0.0)) return fail();
        return ok(p);
      }
      return step();
    }
    double operator()(const finite_set_scale&) const { return step(); }
    double operator()(const interval_union_scale& s) const {
      std::size_t i =
          static_cast<std::size_t>(find_part(s.parts, ts, time_scale::default_tol(ts)));
      const closed_interval& p = s.parts[i];
      if (right) {
        if (ts < p.hi) return ok(std::min(ts + h, p.hi));
        if (i + 1 < s.parts.size()) return ok(s.parts[i + 1].lo);
        return fail();
      }
      if (ts > p.lo) return ok(std::max(ts - h, p.lo));
      if (i > 0) return ok(s.parts[i - 1].hi);
      return fail();
    }
  };
  return std::visit(visitor{ts, h, right, this, none, checked}, rep_);
}

// ---------------------------------------------------------------------------
// Scale-spec grammar
// ---------------------------------------------------------------------------

namespace {

std::string strip_spaces(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  for (char c : in)
    if (c != ' ' && c != '\t') out += c;
  return out;
}

double parse_number(std::string_view text, std::string_view context) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    raise(errc::invalid_scale, "bad number '" + std::string(text) + "' in " + std::string(context));
  return v;
}

std::vector<double> parse_number_list(std::string_view body, std::string_view context) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t comma = body.find(',', start);
    std::string_view item =
        body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (item.empty()) raise(errc::invalid_scale, "empty number in " + std::string(context));
    out.push_back(parse_number(item, context));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Splits "...u...u..." at top level ('u' never occurs inside {} or []).
std::vector<std::string_view> split_union(std::string_view s) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '[' || c == '{') ++depth;
    if (c == ']' || c == '}') --depth;
    if (c == 'u' && depth == 0) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(s.substr(start));
  return parts;
}

}  // namespace

time_scale time_scale::parse(std::string_view spec_in) {
  std::string spec = strip_spaces(spec_in);
  if (spec.empty()) raise(errc::invalid_scale, "empty scale spec");
  if (spec == "R") return reals();
  if (spec == "Z") return integers();
  if (spec.rfind("hZ:", 0) == 0) {
    std::string_view body = std::string_view(spec).substr(3);
    std::size_t colon = body.find(':');
    if (colon == std::string_view::npos) return h_step(parse_number(body, spec));
    return h_step(parse_number(body.substr(0, colon), spec),
                  parse_number(body.substr(colon + 1), spec));
  }
  if (spec.rfind("qZ:", 0) == 0)
    return q_scale(parse_number(std::string_view(spec).substr(3), spec));

  auto pieces = split_union(spec);
  bool single_brace = pieces.size() == 1 && pieces[0].size() >= 2 && pieces[0].front() == '{';

  std::vector<closed_interval> parts;
  std::vector<double> lone_points;
  for (std::string_view piece : pieces) {
    if (piece.size() >= 2 && piece.front() == '{' && piece.back() == '}') {
      for (double p : parse_number_list(piece.substr(1, piece.size() - 2), spec))
        lone_points.push_back(p);
    } else if (piece.size() >= 2 && piece.front() == '[' && piece.back() == ']') {
      auto nums = parse_number_list(piece.substr(1, piece.size() - 2), spec);
      if (nums.size() != 2) raise(errc::invalid_scale, "interval needs two endpoints: " + spec);
      parts.push_back({nums[0], nums[1]});
    } else {
      raise(errc::invalid_scale, "unrecognized scale spec '" + spec + "'");
    }
  }

  if (single_brace) {
    std::sort(lone_points.begin(), lone_points.end());
    return finite_set(std::move(lone_points));
  }
  for (double p : lone_points) parts.push_back({p, p});
  return interval_union(std::move(parts));
}

std::string time_scale::str() const {
  struct visitor {
    std::string operator()(const reals_scale&) const { return "R"; }
    std::string operator()(const integers_scale&) const { return "Z"; }
    std::string operator()(const hstep_scale& s) const {
      std::string out = "hZ:" + format_double(s.h);
      if (s.offset != 0.0) out += ":" + format_double(s.offset);
      return out;
    }
    std::string operator()(const qscale& s) const { return "qZ:" + format_double(s.q); }
    std::string operator()(const finite_set_scale& s) const {
      std::string out = "{";
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        if (i) out += ",";
        out += format_double(s.points[i]);
      }
      return out + "}";
    }
    std::string operator()(const interval_union_scale& s) const {
      std::string out;
      for (std::size_t i = 0; i < s.parts.size(); ++i) {
        if (i) out += "u";
        const auto& p = s.parts[i];
        if (p.lo == p.hi)
          out += "{" + format_double(p.lo) + "}";
        else
          out += "[" + format_double(p.lo) + "," + format_double(p.hi) + "]";
      }
      return out;
    }
  };
  return std::visit(visitor{}, rep_);
}

}  // namespace tsfrac
