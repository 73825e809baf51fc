#include <doctest.h>

#include <cmath>
#include <set>

#include "lrw/errors.hpp"
#include "lrw/solver.hpp"

using namespace lrw;

namespace {

double time_from(const AbsorbingChain& ch, const Eigen::VectorXd& t, std::vector<Node> pos) {
  return t[static_cast<Eigen::Index>(ch.transient_index(ch.model().canonical(std::move(pos))))];
}

const std::vector<double> kGrid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

}  // namespace

TEST_CASE("two adjacent random walkers on a long cycle separate in 4 periods") {
  for (int n : {5, 6, 9}) {
    Model m(build_cycle(n), {{2, Role::generic}}, Goal::distancing(2));
    auto ch = build_chain(m, {Laziness::constant(0.0)});
    auto t = absorption_times(ch);
    CHECK(std::abs(time_from(ch, t, {0, 1}) - 4.0) < 1e-9);
  }
}

TEST_CASE("two agents on C5 match the population-dependent closed form") {
  Model m(build_cycle(5), {{2, Role::generic}}, Goal::distancing(2));
  for (double p : {0.0, 0.2, 0.37, 0.8}) {
    for (double r : {0.0, 0.3, 0.6}) {
      auto ch = build_chain(m, {Laziness::by_population({p, r})});
      auto t = absorption_times(ch);
      double alpha = 1 + 3 * r + p * (7 + 5 * r);
      double t1 = ((14 * p + 2) / (1 - r) + 16 * r / (1 - p)) / alpha;
      double t2 = ((12 * r + 4) / (1 - p) + 8 * p / (1 - r)) / alpha;
      CHECK(std::abs(time_from(ch, t, {0, 0}) - t1) < 1e-9);
      CHECK(std::abs(time_from(ch, t, {0, 1}) - t2) < 1e-9);
    }
  }
}

TEST_CASE("C3 dispersion closed forms") {
  Model m(build_cycle(3), {{3, Role::generic}}, Goal::distancing(1));
  for (double p : kGrid) {
    auto ch = build_chain(m, {Laziness::constant(p)});
    auto rep = solve(ch);
    CHECK(std::abs(time_from(ch, rep.t, {1, 1, 1}) - 6 / (1 + 2 * p - 3 * p * p)) < 1e-9);
    double t2 = 2 * (7 + 12 * p + 9 * p * p) / (3 + 6 * p + 18 * p * p * p - 27 * p * p * p * p);
    CHECK(std::abs(time_from(ch, rep.t, {0, 2, 2}) - t2) < 1e-9);
    CHECK(rep.residual <= 1e-9 * (1 + rep.t.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("C3 gathering against a 2x2 fundamental-matrix oracle") {
  Model m(build_cycle(3), {{3, Role::generic}}, Goal::gathering());
  for (double p : kGrid) {
    const double q = 1 - p;
    // Lumped states: two occupied nodes, three occupied nodes.
    const double b11 = p * p + p * q + 0.75 * q * q;
    const double b21 = 3 * p * p * q + 1.5 * p * q * q + 0.75 * q * q * q;
    const double b22 = p * p * p + 0.75 * p * q * q + 0.25 * q * q * q;
    const double t2 = 1 / (1 - b11);
    const double t3 = (1 + b21 * t2) / (1 - b22);
    auto ch = build_chain(m, {Laziness::constant(p)});
    auto t = absorption_times(ch);
    CHECK(std::abs(time_from(ch, t, {0, 1}) - t2) < 1e-9);
    CHECK(std::abs(time_from(ch, t, {0, 1, 2}) - t3) < 1e-9);
  }
  auto ch = build_chain(m, {Laziness::constant(1.0 / 3.0)});
  auto t = absorption_times(ch);
  CHECK(std::abs(time_from(ch, t, {1, 2}) - 3.0) < 1e-9);
  CHECK(std::abs(time_from(ch, t, {0, 1, 2}) - 27.0 / 7.0) < 1e-9);
}

TEST_CASE("C5 gathering closed forms") {
  Model m(build_cycle(5), {{3, Role::generic}}, Goal::gathering());
  for (double p : kGrid) {
    auto ch = build_chain(m, {Laziness::constant(p)});
    auto t = absorption_times(ch);
    double den = 1 + 9 * p - 5 * p * p - 5 * p * p * p;
    CHECK(std::abs(time_from(ch, t, {0, 1}) - (12 + 20 * p) / den) < 1e-9);
    CHECK(std::abs(time_from(ch, t, {0, 2}) - (8 + 40 * p) / den) < 1e-9);
  }
}

TEST_CASE("C5 dispersion closed forms") {
  Model m(build_cycle(5), {{3, Role::generic}}, Goal::distancing(1));
  for (double p : kGrid) {
    auto ch = build_chain(m, {Laziness::constant(p)});
    auto t = absorption_times(ch);
    double den = 3 * (1 - p) * (7 + 67 * p + 126 * p * p + 158 * std::pow(p, 3) + 75 * std::pow(p, 4) + 15 * std::pow(p, 5));
    double t1 = 2 * (55 + 134 * p + 316 * p * p + 330 * std::pow(p, 3) + 45 * std::pow(p, 4)) / den;
    double t2 = 2 * (25 + 214 * p + 232 * p * p + 170 * std::pow(p, 3) + 15 * std::pow(p, 4)) / den;
    double t3 = 2 * (41 + 142 * p + 152 * p * p + 50 * std::pow(p, 3) + 15 * std::pow(p, 4)) / den;
    CHECK(std::abs(time_from(ch, t, {2, 2, 2}) - t1) < 1e-9);
    CHECK(std::abs(time_from(ch, t, {0, 0, 1}) - t2) < 1e-9);
    CHECK(std::abs(time_from(ch, t, {0, 0, 2}) - t3) < 1e-9);
  }
}

TEST_CASE("start aggregates") {
  Model m(build_cycle(5), {{3, Role::generic}}, Goal::distancing(1));
  auto ch = build_chain(m, {Laziness::constant(0.3)});
  auto rep = solve(ch);
  // Three uniform agents on five nodes are already apart with probability 5*4*3/125.
  double absorbed = ch.start().tail(static_cast<Eigen::Index>(ch.absorbing().size())).sum();
  CHECK(absorbed == doctest::Approx(12.0 / 25).epsilon(1e-12));
  CHECK(std::abs(rep.start_time - ch.start().head(rep.t.size()).dot(rep.t)) < 1e-12);

  Eigen::VectorXd point = Eigen::VectorXd::Zero(ch.start().size());
  auto i = ch.transient_index(StateKey{{0, 0, 2}});
  point[static_cast<Eigen::Index>(i)] = 1.0;
  CHECK(expected_from_start(ch, point, rep.t) == rep.t[static_cast<Eigen::Index>(i)]);
  CHECK_THROWS_AS(expected_from_start(ch, point.head(3), rep.t), InvalidArgument);
  CHECK_THROWS_AS(expected_from_start(ch, 0.5 * point, rep.t), InvalidArgument);
}

TEST_CASE("absorption probabilities") {
  Model single(build_cycle(5), {{3, Role::generic}}, Goal::gathering());
  auto gch = build_chain(single, {Laziness::constant(0.2)});
  auto A = absorption_probabilities(gch);
  for (Eigen::Index i = 0; i < A.rows(); ++i) CHECK(std::abs(A.row(i).sum() - 1.0) < 1e-9);
  CHECK(A.minCoeff() >= -1e-12);

  Model search(build_cycle(4), {{1, Role::searcher}, {1, Role::searcher}, {1, Role::hider}}, Goal::capture());
  auto sch = build_chain(search, {Laziness::constant(0.2), Laziness::constant(0.7), Laziness::constant(0.4)});
  auto rep = solve(sch);
  for (Eigen::Index i = 0; i < rep.A.rows(); ++i) CHECK(std::abs(rep.A.row(i).sum() - 1.0) < 1e-9);
  CHECK(std::abs(rep.start_absorption.sum() - 1.0) < 1e-9);
}

TEST_CASE("non-absorbing chains are diagnosed") {
  Model m(build_cycle(4), {{2, Role::generic}}, Goal::distancing(2));
  auto ch = build_chain(m, {Laziness::constant(0.0)}, StartSpec::at({0, 1}));
  try {
    absorption_times(ch);
    FAIL("expected NonAbsorbing");
  } catch (const NonAbsorbing& e) {
    std::set<StateKey> stuck;
    for (auto i : e.stuck_states()) stuck.insert(ch.transient()[i]);
    CHECK(stuck.count(StateKey{{0, 1}}) == 1);
    CHECK(stuck.count(StateKey{{0, 0}}) == 0);
    for (const auto& k : stuck) {
      int d = std::abs(k.positions[0] - k.positions[1]);
      CHECK(std::min(d, 4 - d) == 1);
    }
  }
  CHECK(stuck_states(build_chain(m, {Laziness::constant(0.3)})).empty());

  auto frozen = build_chain(Model(build_cycle(5), {{3, Role::generic}}, Goal::gathering()), {Laziness::constant(1.0)});
  CHECK(frozen.frozen());
  CHECK_THROWS_WITH_AS(solve(frozen), doctest::Contains("laziness 1"), NonAbsorbing);
}

TEST_CASE("C4 population-dependent optimum values") {
  Model m(build_cycle(4), {{2, Role::generic}}, Goal::distancing(2));
  auto ch = build_chain(m, {Laziness::by_population({0.5, 0.0})});
  auto t = absorption_times(ch);
  CHECK(std::abs(time_from(ch, t, {0, 0}) - 2.0) < 1e-9);
  CHECK(std::abs(time_from(ch, t, {0, 1}) - 3.0) < 1e-9);
}
