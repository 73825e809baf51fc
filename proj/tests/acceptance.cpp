// Acceptance checks. One PASS/FAIL line per criterion; exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lrw/errors.hpp"
#include "lrw/games.hpp"
#include "lrw/optimize.hpp"
#include "lrw/sim.hpp"
#include "lrw/solver.hpp"

using namespace lrw;
using namespace lrw::games;
using Clock = std::chrono::steady_clock;

namespace {

class Criterion {
 public:
  Criterion(int id, std::string title) : id_(id), title_(std::move(title)), start_(Clock::now()) {}

  void check(bool ok, const std::string& what) {
    if (!ok) {
      ok_ = false;
      failures_.push_back(what);
    }
  }

  void note(const std::string& s) { notes_.push_back(s); }

  double seconds() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  bool report() {
    std::ostringstream line;
    line << (ok_ ? "PASS" : "FAIL") << " criterion " << id_ << ": " << title_;
    line.precision(3);
    line << std::fixed << " [" << seconds() << " s]";
    if (!failures_.empty()) {
      line << " | failed:";
      for (std::size_t i = 0; i < failures_.size(); ++i) line << (i ? "; " : " ") << failures_[i];
    }
    if (!notes_.empty()) {
      line << " | notes:";
      for (std::size_t i = 0; i < notes_.size(); ++i) line << (i ? "; " : " ") << notes_[i];
    }
    std::printf("%s\n", line.str().c_str());
    std::fflush(stdout);
    return ok_;
  }

 private:
  int id_;
  std::string title_;
  Clock::time_point start_;
  bool ok_ = true;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

bool near(double x, double y, double tol) { return std::abs(x - y) <= tol; }

double start_time(const Model& m, const LazinessPolicy& pol, const StartSpec& st) {
  return solve(build_chain(m, pol, st)).start_time;
}

double time_from(const Model& m, const LazinessPolicy& pol, std::vector<Node> pos) {
  auto ch = build_chain(m, pol);
  auto t = absorption_times(ch);
  return t[static_cast<Eigen::Index>(ch.transient_index(m.canonical(std::move(pos))))];
}

OptResult best_common_p(const Model& m, const StartSpec& st) {
  return minimize_scalar([&](double p) { return start_time(m, {Laziness::constant(p)}, st); }, 0.0, kMaxLaziness);
}

// ---------------------------------------------------------------------------

bool criterion1() {
  Criterion c(1, "exact solver closed forms on C_n");
  Model c5(build_cycle(5), {{2, Role::generic}}, Goal::distancing(2));
  for (int n : {5, 6, 7, 8, 9, 12}) {
    Model m(build_cycle(n), {{2, Role::generic}}, Goal::distancing(2));
    double t = time_from(m, {Laziness::constant(0.0)}, {0, 1});
    c.check(near(t, 4.0, 1e-9), fmt("C%g adjacent random walk t=%.12g, want 4", static_cast<double>(n), t));
  }

  auto common = best_common_p(c5, StartSpec::at({0, 1}));
  c.check(near(common.argmin[0], 0.2, 1e-6), fmt("common argmin %.9g, want 0.2", common.argmin[0]));
  c.check(near(common.value, 3.125, 1e-9), fmt("common min %.12g, want 3.125", common.value));

  auto pop = minimize_2d(
      [&](double p, double r) { return start_time(c5, {Laziness::by_population({p, r})}, StartSpec::at({0, 1})); },
      Box{0.0, kMaxLaziness, 0.0, kMaxLaziness});
  c.check(near(pop.argmin[0], 0.372281, 1e-4), fmt("population p=%.7g, want 0.372281", pop.argmin[0]));
  c.check(near(pop.argmin[1], 0.0, 1e-4), fmt("population r=%.7g, want 0", pop.argmin[1]));
  c.check(near(pop.value, 2.59307, 1e-4), fmt("population min %.7g, want 2.59307", pop.value));

  Model c4(build_cycle(4), {{2, Role::generic}}, Goal::distancing(2));
  auto c4pop = minimize_2d(
      [&](double p, double rr) { return start_time(c4, {Laziness::by_population({p, rr})}, StartSpec::at({0, 1})); },
      Box{0.0, kMaxLaziness, 0.0, kMaxLaziness});
  c.check(near(c4pop.argmin[0], 0.5, 1e-4) && near(c4pop.argmin[1], 0.0, 1e-4),
          fmt("C4 population optimum (p, r)=(%.6g, %.6g), want (0.5, 0)", c4pop.argmin[0], c4pop.argmin[1]));
  double t1 = time_from(c4, {Laziness::by_population({0.5, 0.0})}, {0, 0});
  double t2 = time_from(c4, {Laziness::by_population({0.5, 0.0})}, {0, 1});
  c.check(near(t1, 2.0, 1e-9), fmt("C4 t1=%.12g, want 2", t1));
  c.check(near(t2, 3.0, 1e-9), fmt("C4 t2=%.12g, want 3", t2));

  bool diagnosed = false;
  try {
    start_time(c4, {Laziness::constant(0.0)}, StartSpec::at({0, 1}));
  } catch (const NonAbsorbing&) {
    diagnosed = true;
  }
  c.check(diagnosed, "C4 adjacent random walk did not raise NonAbsorbing");

  // Common laziness on C4 from the adjacent start. Oracle: lumped 2x2 system, states
  // "together" and "adjacent", solved by hand.
  auto c4common = best_common_p(c4, StartSpec::at({0, 1}));
  double p = c4common.argmin[0], q = 1 - p;
  double b11 = p * p + q * q / 2, b12 = 2 * p * q, b21 = p * q, b22 = p * p + q * q;
  double det = (1 - b11) * (1 - b22) - b12 * b21;
  double oracle = ((1 - b11) + b21) / det;
  c.check(near(p, 0.38272, 5e-3), fmt("C4 common argmin %.6g, want 0.38272", p));
  c.check(near(c4common.value, oracle, 1e-9), fmt("C4 common min %.9g vs oracle %.9g", c4common.value, oracle));
  c.note(fmt("C4 common optimum p=%.6f t=%.6f; expected time 4.45 differs by %.4f and is not confirmed", p,
             c4common.value, c4common.value - 4.45));
  c.check(c.seconds() < 5.0, "runtime");
  return c.report();
}

bool criterion2() {
  Criterion c(2, "C3 dispersion and gathering optima");
  Model disp(build_cycle(3), {{3, Role::generic}}, Goal::distancing(1));
  for (auto st : {StartSpec::at({0, 0, 0}), StartSpec::at({0, 0, 1})}) {
    auto r = best_common_p(disp, st);
    c.check(near(r.argmin[0], 1.0 / 3.0, 1e-6), fmt("dispersion argmin %.9g, want 1/3", r.argmin[0]));
  }
  Model gat(build_cycle(3), {{3, Role::generic}}, Goal::gathering());
  for (auto st : {StartSpec::at({0, 1}), StartSpec::at({0, 1, 2})}) {
    auto r = best_common_p(gat, st);
    c.check(near(r.argmin[0], 1.0 / 3.0, 1e-6), fmt("gathering argmin %.9g, want 1/3", r.argmin[0]));
  }
  double t2 = time_from(gat, {Laziness::constant(1.0 / 3.0)}, {0, 1});
  double t3 = time_from(gat, {Laziness::constant(1.0 / 3.0)}, {0, 1, 2});
  c.check(near(t2, 3.0, 1e-9), fmt("t2=%.12g, want 3", t2));
  c.check(near(t3, 27.0 / 7.0, 1e-9), fmt("t3=%.12g, want 27/7", t3));
  return c.report();
}

bool criterion3() {
  Criterion c(3, "team search saddle point on C3");
  double s = searcher_quintic_root();
  double T0 = team_search_T(0.0, s), T1 = team_search_T(kMaxLaziness, s);
  c.check(near(T0, T1, 1e-9), fmt("at quintic root s=%.7f: T(0,s)=%.9f, T(1,s)=%.9f", s, T0, T1));
  auto r = team_search_saddle();
  c.check(near(r.h_star, 0.5097, 1e-3) && near(r.s_star, 0.2797, 1e-3),
          fmt("saddle (h,s)=(%.6f, %.6f), want (0.5097, 0.2797)", r.h_star, r.s_star));
  c.check(near(r.value, 0.8390, 1e-3), fmt("V=%.6f, want 0.8390", r.value));
  c.check(r.gradient_norm <= 1e-6, fmt("gradient norm %.3g", r.gradient_norm));
  c.check(r.certified, fmt("certificate max_h %.9f, min_s %.9f", r.max_over_h, r.min_over_s));
  c.note(fmt("computed saddle (%.6f, %.6f) with V=%.6f", r.h_star, r.s_star, r.value));
  return c.report();
}

bool criterion4() {
  Criterion c(4, "competitive search capture probabilities and equilibrium");
  double s = searcher_quintic_root();
  double w0 = one_step_capture_prob(0.0, 0.5097), ws = one_step_capture_prob(s, 0.5097);
  c.check(near(w0, 0.3774, 5e-4), fmt("W(0, 0.5097)=%.6f, want 0.3774", w0));
  c.check(near(ws, 0.3405, 5e-4), fmt("W(s*, 0.5097)=%.6f, want 0.3405", ws));
  auto eq = verify_competitive_equilibrium(s, 1.0 / 3.0, 0.01);
  c.check(eq.max_violation() <= 1e-6,
          fmt("max violation %.6g (hider %.6g at h=%.2f)", eq.max_violation(), eq.hider_violation, eq.worst_hider));
  c.note(fmt("searcher violation %.3g at r=%.2f", eq.searcher_violation, eq.worst_searcher));
  return c.report();
}

bool criterion5() {
  Criterion c(5, "C5 gathering and distancing optimum tables");
  struct Row {
    const char* label;
    StartSpec start;
    double p, t;
  };
  Model gat(build_cycle(5), {{3, Role::generic}}, Goal::gathering());
  std::vector<Row> gathering{
      {"gather (1,1)", StartSpec::at({0, 1, 2}), 0.301, 7.914},
      {"gather (1,2)", StartSpec::at({0, 1, 3}), 0.262, 8.183},
      {"gather (0,1)", StartSpec::at({0, 0, 1}), 0.358, 5.716},
      {"gather (0,2)", StartSpec::at({0, 0, 2}), 0.200, 6.250},
      {"gather random", StartSpec::uniform(), 0.283, 6.794},
  };
  Model dist(build_cycle(5), {{3, Role::generic}}, Goal::distancing(1));
  std::vector<Row> distancing{
      {"distance (0,0)", StartSpec::at({0, 0, 0}), 0.287, 2.918},
      {"distance (0,1)", StartSpec::at({0, 0, 1}), 0.006, 2.381},
      {"distance (0,2)", StartSpec::at({0, 0, 2}), 0.403, 2.111},
  };
  auto run = [&](const Model& m, const std::vector<Row>& rows) {
    for (const auto& row : rows) {
      auto r = best_common_p(m, row.start);
      bool ok = near(r.argmin[0], row.p, 1e-3) && near(r.value, row.t, 1e-3);
      c.check(ok, std::string(row.label) + fmt(" (p, t)=(%.5f, %.5f)", r.argmin[0], r.value));
    }
  };
  run(gat, gathering);
  run(dist, distancing);
  return c.report();
}

bool criterion6() {
  Criterion c(6, "first-to-disperse game");
  double worst_full = 0.0, worst_mod = 0.0;
  for (int i = 1; i <= 19; ++i) {
    double p = 0.05 * i;
    double full = disperse_payoff({3, 1.0, p, DisperseGameSpec::TieMode::full_share});
    worst_full = std::max(worst_full, std::abs(full - (1 - p) * (1 - p) / (1 - p * p)));
    double A = (-4 * p + 14 * p * p - 12 * p * p * p + 5 * p * p * p * p + 1) /
               (4 * p - 6 * p * p + 4 * p * p * p - p * p * p * p + 3);
    double mod = disperse_payoff({3, 0.0, p, DisperseGameSpec::TieMode::modified});
    worst_mod = std::max(worst_mod, std::abs(mod - A));
  }
  c.check(worst_full <= 1e-9, fmt("fixed-deviator formula error %.3g", worst_full));
  c.check(worst_mod <= 1e-9, fmt("modified payoff formula error %.3g", worst_mod));
  double half = disperse_payoff({3, 0.0, 0.5, DisperseGameSpec::TieMode::modified});
  c.check(near(half, 1.0 / 3.0, 1e-9), fmt("A(1/2)=%.12g, want 1/3", half));
  auto rep = verify_no_symmetric_equilibrium(0.01);
  c.check(rep.min_margin > 0.0, fmt("no-symmetric margin %.6g at p=%.2f", rep.min_margin, rep.worst_p));
  c.check(rep.two_player_max_error <= 1e-9, fmt("two-player payoff error %.3g", rep.two_player_max_error));
  c.note(fmt("smallest profitable deviation margin %.6f at p=%.2f", rep.min_margin, rep.worst_p));
  return c.report();
}

bool criterion7() {
  Criterion c(7, "Monte Carlo agrees with exact times");
  struct Case {
    std::string label;
    Graph g;
    std::vector<AgentClass> classes;
    LazinessPolicy pol;
    Goal goal;
    StartSpec start;
  };
  std::vector<Case> cases{
      {"C5 distance D=2 m=2 adjacent p=0", build_cycle(5), {{2, Role::generic}}, {Laziness::constant(0.0)},
       Goal::distancing(2), StartSpec::at({0, 1})},
      {"C5 distance D=2 m=2 (p1,p2)=(0.37,0)", build_cycle(5), {{2, Role::generic}},
       {Laziness::by_population({0.37, 0.0})}, Goal::distancing(2), StartSpec::at({0, 0})},
      {"C5 distance D=1 m=3 random p=0.4", build_cycle(5), {{3, Role::generic}}, {Laziness::constant(0.4)},
       Goal::distancing(1), StartSpec::uniform()},
      {"GR3 distance D=2 m=3 corner p=0.2", build_grid(3), {{3, Role::generic}}, {Laziness::constant(0.2)},
       Goal::distancing(2), StartSpec::at({0, 0, 0})},
      {"L6 distance D=2 m=3 left p=0", build_line(6), {{3, Role::generic}}, {Laziness::constant(0.0)},
       Goal::distancing(2), StartSpec::at({0, 0, 0})},
      {"C3 gather p=1/3 two-plus-one", build_cycle(3), {{3, Role::generic}}, {Laziness::constant(1.0 / 3.0)},
       Goal::gathering(), StartSpec::at({0, 0, 1})},
      {"C5 gather p=0.283 random", build_cycle(5), {{3, Role::generic}}, {Laziness::constant(0.283)},
       Goal::gathering(), StartSpec::uniform()},
      {"GR3 gather m=2 p=0.3 corners", build_grid(3), {{2, Role::generic}}, {Laziness::constant(0.3)},
       Goal::gathering(), StartSpec::at({0, 8})},
      {"C3 capture 2 searchers s=0.28 h=0.5", build_cycle(3), {{2, Role::searcher}, {1, Role::hider}},
       {Laziness::constant(0.28), Laziness::constant(0.5)}, Goal::capture(), StartSpec::uniform()},
      {"C5 capture 2 singleton searchers", build_cycle(5),
       {{1, Role::searcher}, {1, Role::searcher}, {1, Role::hider}},
       {Laziness::constant(0.1), Laziness::constant(0.6), Laziness::constant(0.3)}, Goal::capture(),
       StartSpec::uniform()},
      {"GR3 capture 1 searcher", build_grid(3), {{1, Role::searcher}, {1, Role::hider}},
       {Laziness::constant(0.0), Laziness::constant(0.5)}, Goal::capture(), StartSpec::at({0, 8})},
      {"L3 first alone (1, 0.5, 0.5)", build_line(3), {{1, Role::generic}, {1, Role::generic}, {1, Role::generic}},
       {Laziness::constant(1.0), Laziness::constant(0.5), Laziness::constant(0.5)}, Goal::first_alone(),
       StartSpec::at({0, 0, 0})},
  };
  std::uint64_t seed = 20240601;
  int agree = 0;
  for (const auto& cs : cases) {
    double exact = start_time(Model(cs.g, cs.classes, cs.goal), cs.pol, cs.start);
    SimConfig cfg;
    cfg.graph = cs.g;
    cfg.classes = cs.classes;
    cfg.policy = cs.pol;
    cfg.goal = cs.goal;
    cfg.start = cs.start;
    cfg.trials = 5000;
    cfg.seed = seed++;
    auto r = simulate(cfg);
    bool ok = r.censored == 0 && std::abs(r.mean - exact) <= 3 * r.std_error;
    agree += ok ? 1 : 0;
    c.check(ok, cs.label + fmt(": mc %.5f se %.5f exact %.5f", r.mean, r.std_error, exact));
  }
  c.check(cases.size() >= 10, "fewer than 10 configurations");
  c.note(std::to_string(agree) + "/" + std::to_string(cases.size()) + " configurations within 3 SE");
  c.check(c.seconds() < 30.0, fmt("runtime %.2f s exceeds 30 s", c.seconds()));
  return c.report();
}

bool criterion8() {
  Criterion c(8, "random walk is fastest to distance on grids and lines");
  const std::vector<double> ps{0.0, 0.2, 0.4, 0.6, 0.8};
  struct Case {
    std::string label;
    Graph g;
    std::string start;
  };
  std::vector<Case> cases;
  for (int k = 3; k <= 6; ++k) {
    for (const char* st : {"corner", "center"}) cases.push_back({"GR" + std::to_string(k) + " " + st, build_grid(k), st});
  }
  for (int n : {6, 10}) {
    for (const char* st : {"left", "center"}) cases.push_back({"L" + std::to_string(n) + " " + st, build_line(n), st});
  }
  std::uint64_t seed = 7;
  for (const auto& cs : cases) {
    SimConfig cfg;
    cfg.graph = cs.g;
    cfg.classes = {{3, Role::generic}};
    cfg.policy = {Laziness::constant(0.0)};
    cfg.goal = Goal::distancing(2);
    cfg.start = named_start(cs.g, cs.start, 3);
    cfg.trials = 5000;
    cfg.seed = seed++;
    auto rows = sweep_p(cfg, ps);
    bool minimal = true, monotone = true;
    std::string means;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i].result;
      means += fmt(i ? " %.3f" : "%.3f", r.mean);
      if (r.censored > 0) monotone = false;
      if (i > 0 && !(rows[0].result.mean < r.mean)) minimal = false;
      if (i > 0) {
        const auto& prev = rows[i - 1].result;
        double se = std::sqrt(prev.std_error * prev.std_error + r.std_error * r.std_error);
        if (r.mean < prev.mean - 3 * se) monotone = false;
      }
    }
    c.check(minimal && monotone, cs.label + " means " + means);
  }
  c.note(std::to_string(cases.size()) + " graph/start pairs, 5000 trials per p");
  c.check(c.seconds() < 120.0, fmt("runtime %.2f s exceeds 120 s", c.seconds()));
  return c.report();
}

}  // namespace

int main() {
  const std::vector<std::function<bool()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                    criterion5, criterion6, criterion7, criterion8};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    bool ok = false;
    try {
      ok = criteria[i]();
    } catch (const std::exception& e) {
      std::printf("FAIL criterion %zu: exception: %s\n", i + 1, e.what());
    }
    if (!ok) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
