#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace lrw {

/// f has no sign change on the requested interval.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest laziness the optimisers evaluate; p = 1 freezes the walk.
inline constexpr double kMaxLaziness = 1.0 - 1e-6;

struct OptResult {
  std::vector<double> argmin;
  double value = 0.0;
  double bracket = 0.0;   ///< width of the last refinement interval
  long evaluations = 0;
};

using Objective1D = std::function<double(double)>;
using Objective2D = std::function<double(double, double)>;

struct ScalarOptions {
  double tol = 1e-10;
  double grid_step = 1e-3;
};

/// Global-ish minimum on [lo, hi]: grid scan, then golden-section refinement of the
/// best cell (leftmost on ties within 1e-12). Points where the objective throws
/// NonAbsorbing count as +inf; if every grid point does, the last error is rethrown.
OptResult minimize_scalar(const Objective1D& f, double lo, double hi, ScalarOptions opts = {});

struct Box {
  double x_lo, x_hi, y_lo, y_hi;
};

struct PlaneOptions {
  double tol = 1e-10;
  int lattice = 101;
  int max_sweeps = 200;
  double grid_step = 1e-3;
};

/// Lattice scan, then cyclic coordinate descent with minimize_scalar along each axis.
OptResult minimize_2d(const Objective2D& f, Box box, PlaneOptions opts = {});

/// Bisection to interval width tol; returns the midpoint.
double find_root(const Objective1D& f, double lo, double hi, double tol = 1e-12);

struct SaddleOptions {
  double lo = 0.0;
  double hi = kMaxLaziness;
  int grid = 101;
  double diff_step = 1e-6;
  double hessian_step = 1e-4;
  double root_tol = 1e-12;
  double certificate_slack = 1e-6;
};

struct SaddleResult {
  double h_star = 0.0;   ///< maximiser's parameter
  double s_star = 0.0;   ///< minimiser's parameter
  double value = 0.0;
  double gradient_norm = 0.0;
  double hessian_det = 0.0;
  /// The maximiser was indifferent along s = s_star, so h_star came from dT/ds = 0.
  bool flat_in_h = false;
  double max_over_h = 0.0;  ///< max_h T(h, s_star) on the certificate grid
  double min_over_s = 0.0;  ///< min_s T(h_star, s) on the certificate grid
  bool certified = false;
};

/// Saddle of T(h, s) where h maximises and s minimises. s* is the root of
/// T(lo, s) - T(hi, s) (the maximiser indifferent between its extremes); h* is the
/// maximiser of T(., s*), or, when T(., s*) is flat, the root of dT/ds(., s*).
/// The certificate is checked on a grid x grid lattice and reported, not enforced.
SaddleResult find_saddle(const Objective2D& T, SaddleOptions opts = {});

}  // namespace lrw
