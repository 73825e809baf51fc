#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lrw/graph.hpp"

namespace lrw {

enum class Role { generic, searcher, hider };

struct AgentClass {
  int count = 1;
  Role role = Role::generic;
};

/// Stay probability for one agent class, either a single p or a population-indexed
/// vector (p_1, p_2, ...) where p_k applies when the agent's node holds k agents in
/// total. Populations beyond the vector's length use its last entry.
class Laziness {
 public:
  Laziness() = default;
  static Laziness constant(double p);
  static Laziness by_population(std::vector<double> pk);

  double at(int population) const;
  bool population_dependent() const noexcept { return values_.size() > 1; }
  bool always_stays() const noexcept;
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  explicit Laziness(std::vector<double> v);
  std::vector<double> values_{0.0};
};

/// One Laziness per agent class, in class order.
using LazinessPolicy = std::vector<Laziness>;

struct Goal {
  enum class Kind {
    distancing,   ///< min pairwise distance >= min_distance
    gathering,    ///< sticky: co-located agents coalesce; absorbed at one occupied node
    capture,      ///< some searcher shares the hider's node
    first_alone,  ///< some agent is alone at its node
  };
  Kind kind = Kind::distancing;
  int min_distance = 1;

  static Goal distancing(int D);
  static Goal gathering() { return {Kind::gathering, 0}; }
  static Goal capture() { return {Kind::capture, 0}; }
  static Goal first_alone() { return {Kind::first_alone, 0}; }
  std::string describe() const;
};

/// Canonical state. For gathering: the sorted set of occupied nodes. Otherwise the
/// agents' nodes listed class by class, sorted within each class.
struct StateKey {
  std::vector<Node> positions;
  auto operator<=>(const StateKey&) const = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const noexcept;
};

inline constexpr std::size_t kDefaultStateCap = 2'000'000;
/// Largest transient block materialised as a dense matrix.
inline constexpr std::size_t kDenseTransientLimit = 6000;

/// Graph + agent classes + goal, validated together.
class Model {
 public:
  Model(Graph graph, std::vector<AgentClass> classes, Goal goal);

  const Graph& graph() const noexcept { return graph_; }
  const DistanceMatrix& distances() const noexcept { return dist_; }
  const std::vector<AgentClass>& classes() const noexcept { return classes_; }
  const Goal& goal() const noexcept { return goal_; }
  int total_agents() const noexcept { return total_; }
  /// Start offset of each class inside StateKey::positions (non-gathering goals).
  const std::vector<int>& class_offsets() const noexcept { return offsets_; }
  int hider_offset() const noexcept { return hider_offset_; }

  /// Canonicalise raw per-agent positions (class order). Under gathering any
  /// non-empty list of at most total_agents() nodes is accepted and deduplicated.
  StateKey canonical(std::vector<Node> positions) const;
  bool is_absorbing(const StateKey& key) const;
  /// Per-mover node populations: the number of agents sharing each mover's node.
  std::vector<int> populations(const StateKey& key) const;

  void check_policy(const LazinessPolicy& policy) const;

 private:
  Graph graph_;
  DistanceMatrix dist_;
  std::vector<AgentClass> classes_;
  Goal goal_;
  int total_ = 0;
  std::vector<int> offsets_;
  int hider_offset_ = -1;
};

struct StateSpace {
  std::vector<StateKey> transient;
  std::vector<StateKey> absorbing;
};

StateSpace enumerate_states(const Model& model, std::size_t cap = kDefaultStateCap);

/// One-period transition law from `state`, summed over joint mover outcomes and
/// sorted by successor key.
std::vector<std::pair<StateKey, double>> step_distribution(const Model& model, const StateKey& state,
                                                           const LazinessPolicy& policy);

struct StartSpec {
  enum class Kind { positions, uniform, distribution };
  Kind kind = Kind::uniform;
  std::vector<Node> positions;
  std::vector<std::pair<StateKey, double>> distribution;

  static StartSpec at(std::vector<Node> positions);
  static StartSpec uniform() { return {}; }
  static StartSpec weighted(std::vector<std::pair<StateKey, double>> dist);
};

/// Resolve a named placement: gathered | adjacent | corner | center | left | random.
StartSpec named_start(const Graph& graph, std::string_view name, int total_agents);

/// Probability of each canonical key when every agent is placed independently and
/// uniformly over the nodes.
std::vector<std::pair<StateKey, double>> uniform_placement(const Model& model);

class AbsorbingChain {
 public:
  struct Location {
    bool absorbing;
    std::size_t index;
  };

  const Model& model() const noexcept { return model_; }
  const std::vector<StateKey>& transient() const noexcept { return space_.transient; }
  const std::vector<StateKey>& absorbing() const noexcept { return space_.absorbing; }
  /// Transient-to-transient and transient-to-absorbing one-step probabilities.
  const Eigen::MatrixXd& B() const noexcept { return B_; }
  const Eigen::MatrixXd& R() const noexcept { return R_; }
  /// Start law over transient states followed by absorbing states.
  const Eigen::VectorXd& start() const noexcept { return start_; }
  const LazinessPolicy& policy() const noexcept { return policy_; }
  /// Every agent has laziness 1: nothing ever moves.
  bool frozen() const noexcept { return frozen_; }

  std::optional<Location> find(const StateKey& key) const;
  std::size_t transient_index(const StateKey& key) const;
  std::size_t absorbing_index(const StateKey& key) const;
  /// Start vector for a different start spec over this chain's states.
  Eigen::VectorXd resolve(const StartSpec& spec) const;

 private:
  friend AbsorbingChain build_chain(const Model&, const LazinessPolicy&, const StartSpec&, std::size_t);
  AbsorbingChain(Model model, StateSpace space, LazinessPolicy policy);

  Model model_;
  StateSpace space_;
  LazinessPolicy policy_;
  Eigen::MatrixXd B_;
  Eigen::MatrixXd R_;
  Eigen::VectorXd start_;
  bool frozen_ = false;
};

AbsorbingChain build_chain(const Model& model, const LazinessPolicy& policy, const StartSpec& start = StartSpec::uniform(),
                           std::size_t cap = kDefaultStateCap);

}  // namespace lrw
