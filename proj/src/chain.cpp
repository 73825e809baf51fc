#include "lrw/chain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "lrw/errors.hpp"

namespace lrw {

// ---------------------------------------------------------------------------
// Laziness / Goal
// ---------------------------------------------------------------------------

Laziness::Laziness(std::vector<double> v) : values_(std::move(v)) {
  if (values_.empty()) throw InvalidArgument("laziness needs at least one value");
  for (double p : values_) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("laziness must lie in [0,1]");
  }
}

Laziness Laziness::constant(double p) { return Laziness(std::vector<double>{p}); }

Laziness Laziness::by_population(std::vector<double> pk) { return Laziness(std::move(pk)); }

double Laziness::at(int population) const {
  if (population < 1) throw InvalidArgument("population must be >= 1");
  auto k = std::min(static_cast<std::size_t>(population), values_.size());
  return values_[k - 1];
}

bool Laziness::always_stays() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double p) { return p == 1.0; });
}

Goal Goal::distancing(int D) {
  if (D < 1) throw InvalidArgument("distance goal needs D >= 1");
  return {Kind::distancing, D};
}

std::string Goal::describe() const {
  switch (kind) {
    case Kind::distancing: return "distance:" + std::to_string(min_distance);
    case Kind::gathering: return "gather";
    case Kind::capture: return "capture";
    case Kind::first_alone: return "first-alone";
  }
  return "?";
}

std::size_t StateKeyHash::operator()(const StateKey& k) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (Node v : k.positions) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

Model::Model(Graph graph, std::vector<AgentClass> classes, Goal goal)
    : graph_(std::move(graph)), dist_(graph_), classes_(std::move(classes)), goal_(goal) {
  if (classes_.empty()) throw InvalidArgument("at least one agent class is required");
  int hiders = 0;
  int searchers = 0;
  int generic = 0;
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    const auto& cls = classes_[c];
    if (cls.count < 1) throw InvalidArgument("agent class count must be >= 1");
    offsets_.push_back(total_);
    if (cls.role == Role::hider) {
      ++hiders;
      hider_offset_ = total_;
    } else if (cls.role == Role::searcher) {
      ++searchers;
    } else {
      ++generic;
    }
    total_ += cls.count;
  }
  if (hiders > 1) throw InvalidArgument("at most one hider class is allowed");

  switch (goal_.kind) {
    case Goal::Kind::distancing:
      if (goal_.min_distance < 1) throw InvalidArgument("distance goal needs D >= 1");
      if (!distancing_feasible(graph_, dist_, goal_.min_distance, total_)) {
        throw Infeasible("no configuration of " + std::to_string(total_) + " agents has pairwise distance >= " +
                         std::to_string(goal_.min_distance) + " on this graph");
      }
      break;
    case Goal::Kind::gathering:
      if (classes_.size() != 1) throw InvalidArgument("gathering takes a single agent class");
      break;
    case Goal::Kind::capture:
      if (hiders != 1 || classes_[static_cast<std::size_t>(
                             std::find_if(classes_.begin(), classes_.end(),
                                          [](const AgentClass& c) { return c.role == Role::hider; }) -
                             classes_.begin())]
                                 .count != 1) {
        throw InvalidArgument("capture needs exactly one hider");
      }
      if (searchers < 1 || generic > 0) throw InvalidArgument("capture needs searcher classes plus the hider only");
      break;
    case Goal::Kind::first_alone:
      break;
  }
}

StateKey Model::canonical(std::vector<Node> positions) const {
  const int n = graph_.size();
  for (Node v : positions) {
    if (v < 0 || v >= n) throw InvalidArgument("position " + std::to_string(v) + " is not a node");
  }
  if (goal_.kind == Goal::Kind::gathering) {
    if (positions.empty() || static_cast<int>(positions.size()) > total_) {
      throw InvalidArgument("gathering state needs between 1 and " + std::to_string(total_) + " positions");
    }
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
    return StateKey{std::move(positions)};
  }
  if (static_cast<int>(positions.size()) != total_) {
    throw InvalidArgument("expected " + std::to_string(total_) + " positions, got " +
                          std::to_string(positions.size()));
  }
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    auto first = positions.begin() + offsets_[c];
    std::sort(first, first + classes_[c].count);
  }
  return StateKey{std::move(positions)};
}

std::vector<int> Model::populations(const StateKey& key) const {
  std::vector<int> pop(key.positions.size(), 1);
  if (goal_.kind == Goal::Kind::gathering) return pop;
  for (std::size_t i = 0; i < key.positions.size(); ++i) {
    pop[i] = static_cast<int>(std::count(key.positions.begin(), key.positions.end(), key.positions[i]));
  }
  return pop;
}

bool Model::is_absorbing(const StateKey& key) const {
  const auto& pos = key.positions;
  switch (goal_.kind) {
    case Goal::Kind::distancing:
      return min_pairwise_distance(dist_, pos) >= goal_.min_distance;
    case Goal::Kind::gathering:
      return pos.size() == 1;
    case Goal::Kind::capture: {
      Node h = pos[static_cast<std::size_t>(hider_offset_)];
      for (std::size_t i = 0; i < pos.size(); ++i) {
        if (static_cast<int>(i) != hider_offset_ && pos[i] == h) return true;
      }
      return false;
    }
    case Goal::Kind::first_alone:
      for (Node v : pos) {
        if (std::count(pos.begin(), pos.end(), v) == 1) return true;
      }
      return false;
  }
  return false;
}

void Model::check_policy(const LazinessPolicy& policy) const {
  if (policy.size() != classes_.size()) {
    throw InvalidArgument("policy has " + std::to_string(policy.size()) + " entries for " +
                          std::to_string(classes_.size()) + " agent classes");
  }
  if (goal_.kind == Goal::Kind::gathering && policy.front().population_dependent()) {
    throw InvalidArgument("population-dependent laziness is not defined for coalescing (gathering) agents");
  }
}

// ---------------------------------------------------------------------------
// State enumeration
// ---------------------------------------------------------------------------

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// All non-decreasing sequences of length `len` over 0..n-1, lexicographic.
void multisets(int n, int len, std::vector<std::vector<Node>>& out) {
  std::vector<Node> cur;
  std::function<void(Node)> rec = [&](Node from) {
    if (static_cast<int>(cur.size()) == len) {
      out.push_back(cur);
      return;
    }
    for (Node v = from; v < n; ++v) {
      cur.push_back(v);
      rec(v);
      cur.pop_back();
    }
  };
  rec(0);
}

void subsets(int n, int len, std::vector<std::vector<Node>>& out) {
  std::vector<Node> cur;
  std::function<void(Node)> rec = [&](Node from) {
    if (static_cast<int>(cur.size()) == len) {
      out.push_back(cur);
      return;
    }
    for (Node v = from; v < n; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

}  // namespace

StateSpace enumerate_states(const Model& model, std::size_t cap) {
  const int n = model.graph().size();
  const int m = model.total_agents();
  std::vector<StateKey> all;

  if (model.goal().kind == Goal::Kind::gathering) {
    double count = 0;
    for (int k = 1; k <= std::min(m, n); ++k) count += binomial(n, k);
    if (count > static_cast<double>(cap)) {
      throw StateCapExceeded("state space has " + std::to_string(static_cast<long long>(count)) +
                             " states, cap is " + std::to_string(cap));
    }
    for (int k = 1; k <= std::min(m, n); ++k) {
      std::vector<std::vector<Node>> sets;
      subsets(n, k, sets);
      for (auto& s : sets) all.push_back(StateKey{std::move(s)});
    }
  } else {
    double count = 1;
    for (const auto& cls : model.classes()) count *= binomial(n + cls.count - 1, cls.count);
    if (count > static_cast<double>(cap)) {
      throw StateCapExceeded("state space has " + std::to_string(static_cast<long long>(count)) +
                             " states, cap is " + std::to_string(cap));
    }
    std::vector<std::vector<std::vector<Node>>> per_class;
    for (const auto& cls : model.classes()) {
      per_class.emplace_back();
      multisets(n, cls.count, per_class.back());
    }
    std::vector<Node> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t c) {
      if (c == per_class.size()) {
        all.push_back(StateKey{cur});
        return;
      }
      for (const auto& part : per_class[c]) {
        cur.insert(cur.end(), part.begin(), part.end());
        rec(c + 1);
        cur.resize(cur.size() - part.size());
      }
    };
    rec(0);
  }

  StateSpace space;
  for (auto& key : all) {
    (model.is_absorbing(key) ? space.absorbing : space.transient).push_back(std::move(key));
  }
  std::sort(space.transient.begin(), space.transient.end());
  std::sort(space.absorbing.begin(), space.absorbing.end());
  if (space.absorbing.empty()) throw Infeasible("goal has no absorbing states on this graph");
  return space;
}

// ---------------------------------------------------------------------------
// One-step law
// ---------------------------------------------------------------------------

std::vector<std::pair<StateKey, double>> step_distribution(const Model& model, const StateKey& state,
                                                           const LazinessPolicy& policy) {
  model.check_policy(policy);
  const Graph& g = model.graph();
  const bool gathering = model.goal().kind == Goal::Kind::gathering;

  // Per-mover class index; under gathering every occupied node is one mover of class 0.
  std::vector<std::size_t> mover_class(state.positions.size(), 0);
  if (!gathering) {
    const auto& offs = model.class_offsets();
    for (std::size_t c = 0; c < offs.size(); ++c) {
      for (int i = 0; i < model.classes()[c].count; ++i) mover_class[static_cast<std::size_t>(offs[c] + i)] = c;
    }
  }
  const auto pop = model.populations(state);

  std::vector<std::vector<std::pair<Node, double>>> outcomes(state.positions.size());
  for (std::size_t i = 0; i < state.positions.size(); ++i) {
    Node at = state.positions[i];
    double p = policy[mover_class[i]].at(pop[i]);
    auto& o = outcomes[i];
    if (p > 0.0) o.emplace_back(at, p);
    if (p < 1.0) {
      double share = (1.0 - p) / g.degree(at);
      for (Node v : g.neighbors(at)) o.emplace_back(v, share);
    }
  }

  std::map<StateKey, double> acc;
  std::vector<Node> next(state.positions.size());
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double prob) {
    if (i == outcomes.size()) {
      acc[model.canonical(next)] += prob;
      return;
    }
    for (auto [v, q] : outcomes[i]) {
      next[i] = v;
      rec(i + 1, prob * q);
    }
  };
  rec(0, 1.0);
  return {acc.begin(), acc.end()};
}

// ---------------------------------------------------------------------------
// Start laws
// ---------------------------------------------------------------------------

StartSpec StartSpec::at(std::vector<Node> positions) {
  StartSpec s;
  s.kind = Kind::positions;
  s.positions = std::move(positions);
  return s;
}

StartSpec StartSpec::weighted(std::vector<std::pair<StateKey, double>> dist) {
  StartSpec s;
  s.kind = Kind::distribution;
  s.distribution = std::move(dist);
  return s;
}

StartSpec named_start(const Graph& graph, std::string_view name, int total_agents) {
  auto all_at = [&](Node v) { return StartSpec::at(std::vector<Node>(static_cast<std::size_t>(total_agents), v)); };
  if (name == "random") return StartSpec::uniform();
  if (name == "gathered") return all_at(0);
  if (name == "adjacent") {
    if (total_agents != 2) throw InvalidArgument("start 'adjacent' is defined for two agents");
    return StartSpec::at({0, graph.neighbors(0).front()});
  }
  if (name == "corner") {
    if (graph.family() != Graph::Family::grid && graph.family() != Graph::Family::line) {
      throw InvalidArgument("start 'corner' needs a grid or line graph");
    }
    return all_at(0);
  }
  if (name == "left") {
    if (graph.family() != Graph::Family::line) throw InvalidArgument("start 'left' needs a line graph");
    return all_at(0);
  }
  if (name == "center") {
    if (graph.family() == Graph::Family::grid) {
      int c = graph.grid_side() / 2;
      return all_at(graph.grid_node(c + 1, c + 1));
    }
    if (graph.family() == Graph::Family::line) return all_at(graph.size() / 2);
    throw InvalidArgument("start 'center' needs a grid or line graph");
  }
  throw InvalidArgument("unknown start '" + std::string(name) + "'");
}

std::vector<std::pair<StateKey, double>> uniform_placement(const Model& model) {
  const int n = model.graph().size();
  // Per class: sorted tuples with multinomial weight count! / prod(mult!) / n^count.
  std::vector<std::vector<std::pair<std::vector<Node>, double>>> per_class;
  for (const auto& cls : model.classes()) {
    std::vector<std::vector<Node>> tuples;
    multisets(n, cls.count, tuples);
    double total_ways = std::pow(static_cast<double>(n), cls.count);
    double fact = std::tgamma(cls.count + 1.0);
    auto& out = per_class.emplace_back();
    for (auto& t : tuples) {
      double denom = 1.0;
      for (std::size_t i = 0; i < t.size();) {
        std::size_t j = i;
        while (j < t.size() && t[j] == t[i]) ++j;
        denom *= std::tgamma(static_cast<double>(j - i) + 1.0);
        i = j;
      }
      out.emplace_back(std::move(t), fact / denom / total_ways);
    }
  }
  std::map<StateKey, double> acc;
  std::vector<Node> cur;
  std::function<void(std::size_t, double)> rec = [&](std::size_t c, double prob) {
    if (c == per_class.size()) {
      acc[model.canonical(cur)] += prob;
      return;
    }
    for (const auto& [part, w] : per_class[c]) {
      cur.insert(cur.end(), part.begin(), part.end());
      rec(c + 1, prob * w);
      cur.resize(cur.size() - part.size());
    }
  };
  rec(0, 1.0);
  return {acc.begin(), acc.end()};
}

// ---------------------------------------------------------------------------
// AbsorbingChain
// ---------------------------------------------------------------------------

AbsorbingChain::AbsorbingChain(Model model, StateSpace space, LazinessPolicy policy)
    : model_(std::move(model)), space_(std::move(space)), policy_(std::move(policy)) {}

std::optional<AbsorbingChain::Location> AbsorbingChain::find(const StateKey& key) const {
  auto lookup = [&](const std::vector<StateKey>& v) -> std::optional<std::size_t> {
    auto it = std::lower_bound(v.begin(), v.end(), key);
    if (it != v.end() && *it == key) return static_cast<std::size_t>(it - v.begin());
    return std::nullopt;
  };
  if (auto i = lookup(space_.transient)) return Location{false, *i};
  if (auto i = lookup(space_.absorbing)) return Location{true, *i};
  return std::nullopt;
}

std::size_t AbsorbingChain::transient_index(const StateKey& key) const {
  auto loc = find(key);
  if (!loc || loc->absorbing) throw InvalidArgument("not a transient state");
  return loc->index;
}

std::size_t AbsorbingChain::absorbing_index(const StateKey& key) const {
  auto loc = find(key);
  if (!loc || !loc->absorbing) throw InvalidArgument("not an absorbing state");
  return loc->index;
}

Eigen::VectorXd AbsorbingChain::resolve(const StartSpec& spec) const {
  const auto nt = static_cast<Eigen::Index>(space_.transient.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(nt + static_cast<Eigen::Index>(space_.absorbing.size()));
  auto add = [&](const StateKey& key, double w) {
    auto loc = find(key);
    if (!loc) throw InvalidArgument("start state is not in the state space");
    v[static_cast<Eigen::Index>(loc->index) + (loc->absorbing ? nt : 0)] += w;
  };
  switch (spec.kind) {
    case StartSpec::Kind::positions:
      add(model_.canonical(spec.positions), 1.0);
      break;
    case StartSpec::Kind::uniform:
      for (const auto& [key, w] : uniform_placement(model_)) add(key, w);
      break;
    case StartSpec::Kind::distribution: {
      double total = 0;
      for (const auto& [key, w] : spec.distribution) {
        if (w < 0) throw InvalidArgument("start weights must be non-negative");
        add(model_.canonical(key.positions), w);
        total += w;
      }
      if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("start distribution must sum to 1");
      break;
    }
  }
  return v;
}

AbsorbingChain build_chain(const Model& model, const LazinessPolicy& policy, const StartSpec& start, std::size_t cap) {
  model.check_policy(policy);
  StateSpace space = enumerate_states(model, cap);
  if (space.transient.size() > kDenseTransientLimit) {
    throw StateCapExceeded(std::to_string(space.transient.size()) +
                           " transient states exceed the dense solver limit of " +
                           std::to_string(kDenseTransientLimit));
  }
  AbsorbingChain chain(model, std::move(space), policy);
  const auto nt = static_cast<Eigen::Index>(chain.transient().size());
  const auto na = static_cast<Eigen::Index>(chain.absorbing().size());
  chain.B_ = Eigen::MatrixXd::Zero(nt, nt);
  chain.R_ = Eigen::MatrixXd::Zero(nt, na);
  for (Eigen::Index i = 0; i < nt; ++i) {
    for (const auto& [key, prob] : step_distribution(model, chain.transient()[static_cast<std::size_t>(i)], policy)) {
      auto loc = chain.find(key);
      if (loc->absorbing) {
        chain.R_(i, static_cast<Eigen::Index>(loc->index)) += prob;
      } else {
        chain.B_(i, static_cast<Eigen::Index>(loc->index)) += prob;
      }
    }
  }
  chain.frozen_ = std::all_of(policy.begin(), policy.end(), [](const Laziness& l) { return l.always_stays(); });
  chain.start_ = chain.resolve(start);
  return chain;
}

}  // namespace lrw
