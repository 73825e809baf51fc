#include "lrw/solver.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "lrw/errors.hpp"

namespace lrw {

namespace {

constexpr double kMinRcond = 1e-14;

std::string describe_state(const StateKey& key) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < key.positions.size(); ++i) os << (i ? "," : "") << key.positions[i];
  os << ']';
  return os.str();
}

Eigen::PartialPivLU<Eigen::MatrixXd> factor(const AbsorbingChain& chain) {
  if (auto stuck = stuck_states(chain); !stuck.empty()) {
    std::ostringstream os;
    os << stuck.size() << " transient state(s) never reach an absorbing state, e.g. "
       << describe_state(chain.transient()[stuck.front()]);
    if (chain.frozen()) os << " (every agent has laziness 1)";
    throw NonAbsorbing(os.str(), std::move(stuck));
  }
  const auto n = chain.B().rows();
  Eigen::MatrixXd I_minus_B = Eigen::MatrixXd::Identity(n, n) - chain.B();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(I_minus_B);
  if (n > 0 && !(lu.rcond() > kMinRcond)) {
    throw NonAbsorbing("I - B is numerically singular (rcond estimate " + std::to_string(lu.rcond()) + ")",
                       {});
  }
  return lu;
}

double residual_of(const AbsorbingChain& chain, const Eigen::VectorXd& t) {
  if (t.size() == 0) return 0.0;
  Eigen::VectorXd r = t - chain.B() * t - Eigen::VectorXd::Ones(t.size());
  return r.lpNorm<Eigen::Infinity>();
}

void check_residual(const AbsorbingChain& chain, const Eigen::VectorXd& t) {
  double res = residual_of(chain, t);
  double bound = 1e-9 * (1.0 + (t.size() ? t.lpNorm<Eigen::Infinity>() : 0.0));
  if (!(res <= bound)) {
    throw NonAbsorbing("absorption-time residual " + std::to_string(res) + " exceeds " + std::to_string(bound), {});
  }
}

}  // namespace

std::vector<std::size_t> stuck_states(const AbsorbingChain& chain) {
  const auto n = static_cast<std::size_t>(chain.B().rows());
  // Backward reachability from the absorbing set over positive-probability edges.
  std::vector<char> reaches(n, 0);
  std::vector<std::size_t> frontier;
  for (std::size_t i = 0; i < n; ++i) {
    if (chain.R().row(static_cast<Eigen::Index>(i)).sum() > 0.0) {
      reaches[i] = 1;
      frontier.push_back(i);
    }
  }
  std::vector<std::vector<std::size_t>> preds(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && chain.B()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0) preds[j].push_back(i);
    }
  }
  while (!frontier.empty()) {
    std::size_t j = frontier.back();
    frontier.pop_back();
    for (std::size_t i : preds[j]) {
      if (!reaches[i]) {
        reaches[i] = 1;
        frontier.push_back(i);
      }
    }
  }
  std::vector<std::size_t> stuck;
  for (std::size_t i = 0; i < n; ++i) {
    if (!reaches[i]) stuck.push_back(i);
  }
  return stuck;
}

Eigen::VectorXd absorption_times(const AbsorbingChain& chain) {
  auto lu = factor(chain);
  Eigen::VectorXd t = lu.solve(Eigen::VectorXd::Ones(chain.B().rows()));
  check_residual(chain, t);
  return t;
}

Eigen::MatrixXd absorption_probabilities(const AbsorbingChain& chain) {
  auto lu = factor(chain);
  return lu.solve(chain.R());
}

double expected_from_start(const AbsorbingChain& chain, const Eigen::VectorXd& start, const Eigen::VectorXd& t) {
  const auto nt = chain.B().rows();
  if (start.size() != nt + chain.R().cols()) throw InvalidArgument("start vector has the wrong length");
  if (std::abs(start.sum() - 1.0) > 1e-12) throw InvalidArgument("start distribution must sum to 1");
  return start.head(nt).dot(t);
}

Eigen::VectorXd absorption_from_start(const AbsorbingChain& chain, const Eigen::VectorXd& start,
                                      const Eigen::MatrixXd& A) {
  const auto nt = chain.B().rows();
  const auto na = chain.R().cols();
  if (start.size() != nt + na) throw InvalidArgument("start vector has the wrong length");
  Eigen::VectorXd out = start.tail(na);
  if (nt > 0) out += A.transpose() * start.head(nt);
  return out;
}

SolveReport solve(const AbsorbingChain& chain) {
  auto lu = factor(chain);
  SolveReport rep;
  rep.t = lu.solve(Eigen::VectorXd::Ones(chain.B().rows()));
  check_residual(chain, rep.t);
  rep.residual = residual_of(chain, rep.t);
  rep.A = lu.solve(chain.R());
  rep.start_time = expected_from_start(chain, chain.start(), rep.t);
  rep.start_absorption = absorption_from_start(chain, chain.start(), rep.A);
  return rep;
}

}  // namespace lrw
