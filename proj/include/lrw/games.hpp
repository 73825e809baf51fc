#pragma once

#include <vector>

#include "lrw/chain.hpp"
#include "lrw/optimize.hpp"

namespace lrw::games {

// ---------------------------------------------------------------------------
// Team search: a team of searchers with common laziness s against one hider with
// laziness h. The searchers minimise the capture time, the hider maximises it.
// ---------------------------------------------------------------------------

struct TeamSearchSpec {
  enum class Objective {
    weighted,     ///< sum over transient start mass of t_i; capture at placement counts 0
    conditional,  ///< expected capture time given the hider was not caught at placement
  };
  Graph graph = build_cycle(3);
  int searchers = 2;
  StartSpec start = StartSpec::uniform();
  Objective objective = Objective::weighted;
};

struct TeamSearchTimes {
  double weighted = 0.0;
  double conditional = 0.0;
  double transient_start_mass = 0.0;
};

TeamSearchTimes team_search_times(double h, double s, const TeamSearchSpec& spec = {});
double team_search_T(double h, double s, const TeamSearchSpec& spec = {});

/// Saddle point of team_search_T over [0, 1 - 1e-6]^2.
SaddleResult team_search_saddle(const TeamSearchSpec& spec = {}, SaddleOptions opts = {});

/// 14 - 15s - 117s^2 - 33s^3 - 5s^4 + 60s^5, whose root in (0,1) is the candidate
/// searcher laziness for the C3 game.
double searcher_quintic(double s);
double searcher_quintic_root();

// ---------------------------------------------------------------------------
// Competitive search: two individually scored searchers (lazinesses r and s) and a
// hider (h), uniformly placed. Absorbing labels follow the usual five-state picture:
// state 3 = searcher 2 alone finds the hider, 4 = searcher 1 alone, 5 = both.
// ---------------------------------------------------------------------------

/// Probability a searcher not at the hider's node on C3 catches it next period.
double one_step_capture_prob(double s, double h);

struct CompetitiveOutcome {
  double a3 = 0.0;
  double a4 = 0.0;
  double a5 = 0.0;
  double T = 0.0;  ///< expected capture time from the random start
  double payoff1() const { return a4 + 0.5 * a5; }
  double payoff2() const { return a3 + 0.5 * a5; }
};

CompetitiveOutcome competitive_shares(double r, double s, double h, const Graph& graph = build_cycle(3));

struct EquilibriumReport {
  double hider_violation = 0.0;     ///< max_h' T(s,s,h') - T(s,s,h)
  double worst_hider = 0.0;
  double searcher_violation = 0.0;  ///< max_r' payoff1(r',s,h) - payoff1(s,s,h)
  double worst_searcher = 0.0;
  double max_violation() const { return hider_violation > searcher_violation ? hider_violation : searcher_violation; }
};

/// Grid check of the two unilateral-deviation inequalities at (s, s, h).
EquilibriumReport verify_competitive_equilibrium(double s, double h, double grid_step,
                                                 const Graph& graph = build_cycle(3));

// ---------------------------------------------------------------------------
// First-to-disperse game on L_n: n labelled players start at node 0; the first
// players alone at a node split a unit prize. Player 0 is the deviator with
// laziness q; everyone else uses p.
// ---------------------------------------------------------------------------

struct DisperseGameSpec {
  enum class TieMode { full_share, modified };
  int n = 3;
  double q = 0.0;
  double p = 0.0;
  TieMode tie_mode = TieMode::full_share;
};

struct DisperseOutcome {
  double deviator_payoff = 0.0;
  std::vector<double> full_share_payoffs;  ///< every player's full-share prize expectation
  double deviator_tie_probability = 0.0;   ///< the game ends in a tie that includes the deviator
};

DisperseOutcome disperse_game(const DisperseGameSpec& spec);
double disperse_payoff(const DisperseGameSpec& spec);

struct NoSymmetricEquilibriumReport {
  struct Row {
    double p;
    double best_q;
    double best_payoff;
    double margin;  ///< best_payoff - 1/3
  };
  std::vector<Row> rows;
  double min_margin = 0.0;
  double worst_p = 0.0;
  double two_player_max_error = 0.0;  ///< max |payoff - 1/2| over symmetric (p,p) on L2
  bool holds() const { return min_margin > 0.0 && two_player_max_error <= 1e-9; }
};

NoSymmetricEquilibriumReport verify_no_symmetric_equilibrium(double grid_step);

}  // namespace lrw::games
