#include "lrw/games.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lrw/errors.hpp"
#include "lrw/solver.hpp"

namespace lrw::games {

namespace {

void check_unit(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument(std::string(name) + " must lie in [0, 1]");
}

/// 0, step, 2 step, ... below kMaxLaziness, then kMaxLaziness itself.
std::vector<double> laziness_grid(double step) {
  std::vector<double> xs;
  for (long i = 0;; ++i) {
    double x = static_cast<double>(i) * step;
    if (x >= kMaxLaziness - 1e-12) break;
    xs.push_back(x);
  }
  xs.push_back(kMaxLaziness);
  return xs;
}

}  // namespace

TeamSearchTimes team_search_times(double h, double s, const TeamSearchSpec& spec) {
  check_unit(h, "hider laziness");
  check_unit(s, "searcher laziness");
  if (spec.searchers < 1) throw InvalidArgument("team search needs at least one searcher");
  Model model(spec.graph, {{spec.searchers, Role::searcher}, {1, Role::hider}}, Goal::capture());
  auto chain = build_chain(model, {Laziness::constant(s), Laziness::constant(h)}, spec.start);
  auto rep = solve(chain);
  TeamSearchTimes out;
  out.weighted = rep.start_time;
  out.transient_start_mass = chain.start().head(static_cast<Eigen::Index>(chain.transient().size())).sum();
  out.conditional = out.transient_start_mass > 0.0 ? out.weighted / out.transient_start_mass : 0.0;
  return out;
}

double team_search_T(double h, double s, const TeamSearchSpec& spec) {
  auto t = team_search_times(h, s, spec);
  return spec.objective == TeamSearchSpec::Objective::weighted ? t.weighted : t.conditional;
}

SaddleResult team_search_saddle(const TeamSearchSpec& spec, SaddleOptions opts) {
  return find_saddle([&](double h, double s) { return team_search_T(h, s, spec); }, opts);
}

double searcher_quintic(double s) {
  return 14.0 + s * (-15.0 + s * (-117.0 + s * (-33.0 + s * (-5.0 + s * 60.0))));
}

double searcher_quintic_root() { return find_root(searcher_quintic, 0.0, 1.0, 1e-12); }

double one_step_capture_prob(double s, double h) {
  check_unit(s, "searcher laziness");
  check_unit(h, "hider laziness");
  return (0.25 - 0.75 * h) * s + (h + 1.0) / 4.0;
}

CompetitiveOutcome competitive_shares(double r, double s, double h, const Graph& graph) {
  check_unit(r, "searcher 1 laziness");
  check_unit(s, "searcher 2 laziness");
  check_unit(h, "hider laziness");
  Model model(graph, {{1, Role::searcher}, {1, Role::searcher}, {1, Role::hider}}, Goal::capture());
  auto chain = build_chain(model, {Laziness::constant(r), Laziness::constant(s), Laziness::constant(h)});
  auto rep = solve(chain);
  CompetitiveOutcome out;
  out.T = rep.start_time;
  for (std::size_t j = 0; j < chain.absorbing().size(); ++j) {
    const auto& pos = chain.absorbing()[j].positions;
    double w = rep.start_absorption(static_cast<Eigen::Index>(j));
    bool first = pos[0] == pos[2];
    bool second = pos[1] == pos[2];
    if (first && second) {
      out.a5 += w;
    } else if (first) {
      out.a4 += w;
    } else {
      out.a3 += w;
    }
  }
  return out;
}

EquilibriumReport verify_competitive_equilibrium(double s, double h, double grid_step, const Graph& graph) {
  if (!(grid_step > 0.0 && grid_step <= 0.1)) throw InvalidArgument("grid step must lie in (0, 0.1]");
  const auto base = competitive_shares(s, s, h, graph);
  const auto grid = laziness_grid(grid_step);
  EquilibriumReport rep;
  rep.hider_violation = -std::numeric_limits<double>::infinity();
  rep.searcher_violation = -std::numeric_limits<double>::infinity();
  for (double x : grid) {
    double dh = competitive_shares(s, s, x, graph).T - base.T;
    if (dh > rep.hider_violation) {
      rep.hider_violation = dh;
      rep.worst_hider = x;
    }
    double ds = competitive_shares(x, s, h, graph).payoff1() - base.payoff1();
    if (ds > rep.searcher_violation) {
      rep.searcher_violation = ds;
      rep.worst_searcher = x;
    }
  }
  rep.hider_violation = std::max(rep.hider_violation, 0.0);
  rep.searcher_violation = std::max(rep.searcher_violation, 0.0);
  return rep;
}

DisperseOutcome disperse_game(const DisperseGameSpec& spec) {
  if (spec.n != 2 && spec.n != 3) throw InvalidArgument("the disperse game is solved for n = 2 or 3 players only");
  check_unit(spec.q, "deviator laziness");
  check_unit(spec.p, "laziness");
  const auto n = static_cast<std::size_t>(spec.n);
  std::vector<AgentClass> players(n, AgentClass{1, Role::generic});
  LazinessPolicy policy(n, Laziness::constant(spec.p));
  policy[0] = Laziness::constant(spec.q);
  Model model(build_line(spec.n), players, Goal::first_alone());
  auto chain = build_chain(model, policy, StartSpec::at(std::vector<Node>(n, 0)));
  auto rep = solve(chain);

  DisperseOutcome out;
  out.full_share_payoffs.assign(n, 0.0);
  for (std::size_t j = 0; j < chain.absorbing().size(); ++j) {
    const auto& pos = chain.absorbing()[j].positions;
    double w = rep.start_absorption(static_cast<Eigen::Index>(j));
    std::vector<std::size_t> alone;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::count(pos.begin(), pos.end(), pos[i]) == 1) alone.push_back(i);
    }
    const double share = 1.0 / static_cast<double>(alone.size());
    for (std::size_t i : alone) out.full_share_payoffs[i] += w * share;
    if (alone.size() > 1 && alone.front() == 0) out.deviator_tie_probability += w;
    if (alone.size() == 1 && alone.front() == 0) out.deviator_payoff += w;
  }
  if (spec.tie_mode == DisperseGameSpec::TieMode::full_share) out.deviator_payoff = out.full_share_payoffs[0];
  return out;
}

double disperse_payoff(const DisperseGameSpec& spec) { return disperse_game(spec).deviator_payoff; }

NoSymmetricEquilibriumReport verify_no_symmetric_equilibrium(double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.01)) throw InvalidArgument("grid step must lie in (0, 0.01]");
  std::vector<double> ps;
  for (long i = 0;; ++i) {
    double p = static_cast<double>(i) * grid_step;
    if (p > 1.0 - grid_step + 1e-12) break;
    ps.push_back(p);
  }
  std::vector<double> qs{0.0, 1.0};
  for (double p : ps) qs.push_back(p);

  NoSymmetricEquilibriumReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (double p : ps) {
    NoSymmetricEquilibriumReport::Row row{p, 0.0, -std::numeric_limits<double>::infinity(), 0.0};
    for (double q : qs) {
      double v;
      try {
        v = disperse_payoff({3, q, p, DisperseGameSpec::TieMode::full_share});
      } catch (const NonAbsorbing&) {
        continue;
      }
      if (v > row.best_payoff) {
        row.best_payoff = v;
        row.best_q = q;
      }
    }
    row.margin = row.best_payoff - 1.0 / 3.0;
    if (row.margin < rep.min_margin) {
      rep.min_margin = row.margin;
      rep.worst_p = p;
    }
    rep.rows.push_back(row);
  }

  for (double p : ps) {
    if (p <= 0.0) continue;
    auto out = disperse_game({2, p, p, DisperseGameSpec::TieMode::full_share});
    for (double v : out.full_share_payoffs) rep.two_player_max_error = std::max(rep.two_player_max_error, std::abs(v - 0.5));
  }
  return rep;
}

}  // namespace lrw::games
