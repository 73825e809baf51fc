#include "lrw/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>

#include "lrw/errors.hpp"

namespace lrw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTie = 1e-12;

struct Counted {
  const Objective1D& f;
  long calls = 0;
  std::exception_ptr last_error;

  double operator()(double x) {
    ++calls;
    try {
      double v = f(x);
      return std::isnan(v) ? kInf : v;
    } catch (const NonAbsorbing&) {
      last_error = std::current_exception();
      return kInf;
    }
  }
};

std::vector<double> grid_points(double lo, double hi, double step) {
  std::vector<double> xs;
  if (hi <= lo) return {lo};
  auto cells = static_cast<long>(std::ceil((hi - lo) / step - 1e-9));
  xs.reserve(static_cast<std::size_t>(cells + 1));
  for (long i = 0; i < cells; ++i) xs.push_back(lo + static_cast<double>(i) * step);
  xs.push_back(hi);
  return xs;
}

std::size_t leftmost_best(const std::vector<double>& v) {
  double best = *std::min_element(v.begin(), v.end());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] <= best + kTie) return i;
  }
  return 0;
}

}  // namespace

OptResult minimize_scalar(const Objective1D& f, double lo, double hi, ScalarOptions opts) {
  if (!(lo <= hi)) throw InvalidArgument("minimize_scalar needs lo <= hi");
  if (!(opts.tol >= 1e-10) || !(opts.grid_step > 0)) throw InvalidArgument("bad minimize_scalar options");

  Counted F{f, 0, {}};
  const auto xs = grid_points(lo, hi, opts.grid_step);
  std::vector<double> vals(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) vals[i] = F(xs[i]);
  const std::size_t i0 = leftmost_best(vals);
  if (std::isinf(vals[i0])) {
    if (F.last_error) std::rethrow_exception(F.last_error);
    throw InvalidArgument("objective is infinite on the whole grid");
  }

  double best_x = xs[i0];
  double best_v = vals[i0];

  // Golden-section search on the cell pair around the best grid point.
  double a = xs[i0 == 0 ? 0 : i0 - 1];
  double b = xs[std::min(i0 + 1, xs.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = F(c);
  double fd = F(d);
  while (b - a > opts.tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = F(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = F(d);
    }
  }
  for (auto [x, v] : {std::pair{c, fc}, std::pair{d, fd}}) {
    if (v < best_v) {
      best_x = x;
      best_v = v;
    }
  }
  double mid = 0.5 * (a + b);
  double fm = F(mid);
  if (fm < best_v) {
    best_x = mid;
    best_v = fm;
  }

  OptResult r;
  r.argmin = {best_x};
  r.value = F(best_x);
  r.bracket = b - a;
  r.evaluations = F.calls;
  return r;
}

OptResult minimize_2d(const Objective2D& f, Box box, PlaneOptions opts) {
  if (opts.lattice < 2) throw InvalidArgument("lattice needs at least 2 points per axis");
  long calls = 0;
  std::exception_ptr last_error;
  auto F = [&](double x, double y) {
    ++calls;
    try {
      double v = f(x, y);
      return std::isnan(v) ? kInf : v;
    } catch (const NonAbsorbing&) {
      last_error = std::current_exception();
      return kInf;
    }
  };

  double bx = box.x_lo, by = box.y_lo, bv = kInf;
  const int L = opts.lattice;
  for (int i = 0; i < L; ++i) {
    double x = box.x_lo + (box.x_hi - box.x_lo) * i / (L - 1);
    for (int j = 0; j < L; ++j) {
      double y = box.y_lo + (box.y_hi - box.y_lo) * j / (L - 1);
      double v = F(x, y);
      if (v < bv - kTie) {
        bx = x;
        by = y;
        bv = v;
      }
    }
  }
  if (std::isinf(bv)) {
    if (last_error) std::rethrow_exception(last_error);
    throw InvalidArgument("objective is infinite on the whole lattice");
  }

  ScalarOptions so{opts.tol, opts.grid_step};
  double bracket = 0.0;
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    double before = bv;
    auto rx = minimize_scalar([&](double x) { return f(x, by); }, box.x_lo, box.x_hi, so);
    calls += rx.evaluations;
    double gain_x = 0.0;
    if (rx.value <= bv) {
      gain_x = bv - rx.value;
      bx = rx.argmin[0];
      bv = rx.value;
    }
    auto ry = minimize_scalar([&](double y) { return f(bx, y); }, box.y_lo, box.y_hi, so);
    calls += ry.evaluations;
    double gain_y = 0.0;
    if (ry.value <= bv) {
      gain_y = bv - ry.value;
      by = ry.argmin[0];
      bv = ry.value;
    }
    bracket = std::max(rx.bracket, ry.bracket);
    if (gain_x < opts.tol && gain_y < opts.tol && before - bv < opts.tol) break;
  }

  OptResult r;
  r.argmin = {bx, by};
  r.value = F(bx, by);
  r.bracket = bracket;
  r.evaluations = calls;
  return r;
}

double find_root(const Objective1D& f, double lo, double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw BracketError("no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

/// First sign-change cell of f on an n-point grid over [lo, hi], refined by bisection.
std::optional<double> scan_root(const Objective1D& f, double lo, double hi, int n, double tol) {
  double prev_x = lo;
  double prev = f(lo);
  if (prev == 0.0) return lo;
  for (int i = 1; i < n; ++i) {
    double x = lo + (hi - lo) * i / (n - 1);
    double v = f(x);
    if (v == 0.0) return x;
    if (std::signbit(v) != std::signbit(prev)) return find_root(f, prev_x, x, tol);
    prev_x = x;
    prev = v;
  }
  return std::nullopt;
}

double partial(const Objective1D& f, double x, double step, double lo, double hi) {
  if (x - step < lo) return (f(x + step) - f(x)) / step;
  if (x + step > hi) return (f(x) - f(x - step)) / step;
  return (f(x + step) - f(x - step)) / (2 * step);
}

}  // namespace

SaddleResult find_saddle(const Objective2D& T, SaddleOptions o) {
  SaddleResult r;
  auto indifference = [&](double s) { return T(o.lo, s) - T(o.hi, s); };
  auto s_root = scan_root(indifference, o.lo, o.hi, o.grid, o.root_tol);
  if (!s_root) throw BracketError("maximiser indifference T(lo,s) = T(hi,s) has no bracketed root");
  r.s_star = *s_root;

  const double s = r.s_star;
  double tmin = kInf, tmax = -kInf;
  for (int i = 0; i < o.grid; ++i) {
    double v = T(o.lo + (o.hi - o.lo) * i / (o.grid - 1), s);
    tmin = std::min(tmin, v);
    tmax = std::max(tmax, v);
  }
  bool flat = tmax - tmin <= 1e-9 * (1.0 + std::abs(tmax));
  std::optional<double> h_crit;
  if (flat) {
    auto dTds = [&](double h) { return partial([&](double x) { return T(h, x); }, s, o.diff_step, o.lo, o.hi); };
    h_crit = scan_root(dTds, o.lo, o.hi, o.grid, o.root_tol);
  }
  if (h_crit) {
    r.h_star = *h_crit;
    r.flat_in_h = true;
  } else {
    auto best = minimize_scalar([&](double h) { return -T(h, s); }, o.lo, o.hi, {1e-10, 1e-3});
    r.h_star = best.argmin[0];
  }

  const double h = r.h_star;
  r.value = T(h, s);
  double gh = partial([&](double x) { return T(x, s); }, h, o.diff_step, o.lo, o.hi);
  double gs = partial([&](double x) { return T(h, x); }, s, o.diff_step, o.lo, o.hi);
  r.gradient_norm = std::max(std::abs(gh), std::abs(gs));

  const double e = o.hessian_step;
  double hh = std::clamp(h, o.lo + e, o.hi - e);
  double ss = std::clamp(s, o.lo + e, o.hi - e);
  double Thh = (T(hh + e, ss) - 2 * T(hh, ss) + T(hh - e, ss)) / (e * e);
  double Tss = (T(hh, ss + e) - 2 * T(hh, ss) + T(hh, ss - e)) / (e * e);
  double Ths = (T(hh + e, ss + e) - T(hh + e, ss - e) - T(hh - e, ss + e) + T(hh - e, ss - e)) / (4 * e * e);
  r.hessian_det = Thh * Tss - Ths * Ths;

  r.max_over_h = -kInf;
  r.min_over_s = kInf;
  for (int i = 0; i < o.grid; ++i) {
    double x = o.lo + (o.hi - o.lo) * i / (o.grid - 1);
    r.max_over_h = std::max(r.max_over_h, T(x, s));
    r.min_over_s = std::min(r.min_over_s, T(h, x));
  }
  r.certified = r.max_over_h <= r.value + o.certificate_slack && r.min_over_s >= r.value - o.certificate_slack;
  return r;
}

}  // namespace lrw
