#pragma once

#include <Eigen/Dense>

#include <vector>

#include "lrw/chain.hpp"

namespace lrw {

struct SolveReport {
  Eigen::VectorXd t;                 ///< expected periods to absorption per transient state
  Eigen::MatrixXd A;                 ///< A(i, j): absorbed at absorbing state j from transient i
  double start_time = 0.0;           ///< expected periods from the chain's start law
  Eigen::VectorXd start_absorption;  ///< absorbing-state law from the chain's start law
  double residual = 0.0;             ///< max-norm residual of (I - B) t = 1
};

/// Transient states from which no absorbing state is reachable, in index order.
std::vector<std::size_t> stuck_states(const AbsorbingChain& chain);

/// Solves (I - B) t = 1. Throws NonAbsorbing when some transient state can never absorb.
Eigen::VectorXd absorption_times(const AbsorbingChain& chain);

/// Solves (I - B) A = R.
Eigen::MatrixXd absorption_probabilities(const AbsorbingChain& chain);

/// Inner product of the transient part of `start` with t; absorbing-start mass adds 0.
double expected_from_start(const AbsorbingChain& chain, const Eigen::VectorXd& start, const Eigen::VectorXd& t);

/// Absorbing-state law for a start vector over all states.
Eigen::VectorXd absorption_from_start(const AbsorbingChain& chain, const Eigen::VectorXd& start,
                                      const Eigen::MatrixXd& A);

/// Times, absorption probabilities and start aggregates from one factorisation.
SolveReport solve(const AbsorbingChain& chain);

}  // namespace lrw
