#include "lrw/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>

#include "lrw/errors.hpp"
#include "lrw/games.hpp"
#include "lrw/optimize.hpp"
#include "lrw/sim.hpp"
#include "lrw/solver.hpp"

namespace lrw::cli {

using nlohmann::json;

namespace {

int parse_int(std::string_view s, const char* what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(std::string(s), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw InvalidArgument(std::string("bad ") + what + ": '" + std::string(s) + "'");
  return v;
}

double parse_double(std::string_view s, const char* what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(std::string(s), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw InvalidArgument(std::string("bad ") + what + ": '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t from = 0;
  while (true) {
    auto at = s.find(sep, from);
    parts.push_back(s.substr(from, at == std::string_view::npos ? std::string_view::npos : at - from));
    if (at == std::string_view::npos) break;
    from = at + 1;
  }
  return parts;
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json state_json(const StateKey& k) { return k.positions; }

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
  return rows;
}

// ---------------------------------------------------------------------------
// Model flags shared by solve, optimize, simulate and sweep.
// ---------------------------------------------------------------------------

struct ModelFlags {
  std::string graph;
  int agents = 0;
  int searchers = 0;
  std::string goal;
  std::optional<double> p;
  std::string pk;
  double hider_p = 0.0;
  std::string start = "random";
  std::size_t cap = kDefaultStateCap;

  void add(CLI::App* app, bool with_policy) {
    app->add_option("--graph", graph, "cycle:N | line:N | grid:K | complete:N | file:PATH")->required();
    app->add_option("--agents", agents, "number of identical agents")->check(CLI::PositiveNumber);
    app->add_option("--searchers", searchers, "searcher count; adds one hider and selects the capture goal")
        ->check(CLI::PositiveNumber);
    app->add_option("--goal", goal, "distance:D | gather | capture | first-alone");
    if (with_policy) {
      auto* po = app->add_option("--p", p, "common laziness")->check(CLI::Range(0.0, 1.0));
      auto* pko = app->add_option("--pk", pk, "population-dependent laziness p1,p2,...");
      po->excludes(pko);
    }
    app->add_option("--hider-p", hider_p, "hider laziness (capture goal)")->check(CLI::Range(0.0, 1.0));
    app->add_option("--start", start, "gathered | adjacent | corner | center | left | random | state:a,b,...");
    app->add_option("--cap", cap, "state-count cap for exact solving");
  }

  Goal resolved_goal() const {
    if (searchers > 0) {
      if (!goal.empty() && goal != "capture") throw InvalidArgument("--searchers implies --goal capture");
      return Goal::capture();
    }
    if (goal.empty()) throw InvalidArgument("--goal is required");
    return parse_goal_spec(goal);
  }

  Model model() const {
    Graph g = parse_graph_spec(graph);
    Goal gl = resolved_goal();
    if (gl.kind == Goal::Kind::capture) {
      if (searchers < 1) throw InvalidArgument("the capture goal needs --searchers");
      if (agents) throw InvalidArgument("--agents does not combine with --searchers");
      return Model(std::move(g), {{searchers, Role::searcher}, {1, Role::hider}}, gl);
    }
    if (agents < 1) throw InvalidArgument("--agents is required");
    return Model(std::move(g), {{agents, Role::generic}}, gl);
  }

  /// Policy with the non-hider classes at `lz`.
  LazinessPolicy policy_with(const Model& m, const Laziness& lz) const {
    LazinessPolicy pol;
    for (const auto& c : m.classes()) pol.push_back(c.role == Role::hider ? Laziness::constant(hider_p) : lz);
    return pol;
  }

  LazinessPolicy policy(const Model& m) const {
    if (!pk.empty()) return policy_with(m, Laziness::by_population(parse_laziness_list(pk)));
    if (!p) throw InvalidArgument("one of --p or --pk is required");
    return policy_with(m, Laziness::constant(*p));
  }

  StartSpec start_spec(const Model& m) const {
    if (start.rfind("state:", 0) == 0) {
      std::vector<Node> pos;
      for (auto part : split(std::string_view(start).substr(6), ',')) pos.push_back(parse_int(part, "state position"));
      return StartSpec::at(std::move(pos));
    }
    return named_start(m.graph(), start, m.total_agents());
  }
};

json policy_json(const LazinessPolicy& pol) {
  json a = json::array();
  for (const auto& l : pol) a.push_back(l.values());
  return a;
}

json model_json(const Model& m) {
  json classes = json::array();
  for (const auto& c : m.classes()) {
    const char* role = c.role == Role::hider ? "hider" : c.role == Role::searcher ? "searcher" : "generic";
    classes.push_back({{"count", c.count}, {"role", role}});
  }
  return {{"graph", {{"family", m.graph().family_name()}, {"nodes", m.graph().size()}, {"edges", m.graph().edge_count()}}},
          {"classes", classes},
          {"goal", m.goal().describe()}};
}

// ---------------------------------------------------------------------------
// Manifest and replay
// ---------------------------------------------------------------------------

std::string join_command(const std::vector<std::string>& args) {
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ' ';
    bool quote = args[i].empty() || args[i].find_first_of(" \t'\"") != std::string::npos;
    s += quote ? "'" + args[i] + "'" : args[i];
  }
  return s;
}

/// Explicitly given options of the selected (sub)command chain.
json given_options(const CLI::App* app) {
  json opts = json::object();
  for (const CLI::Option* o : app->get_options()) {
    if (o->count() == 0 || o->get_lnames().empty()) continue;
    const std::string& name = o->get_lnames().front();
    if (name == "help" || name == "config") continue;
    if (o->get_expected_min() == 0) {
      opts[name] = true;
    } else {
      opts[name] = o->results().back();
    }
  }
  return opts;
}

std::vector<std::string> replay_args(const json& manifest) {
  const json& cfg = manifest.contains("config") ? manifest.at("config") : manifest;
  std::vector<std::string> args{"lrw"};
  for (const auto& c : cfg.at("command")) args.push_back(c.get<std::string>());
  for (const auto& [name, v] : cfg.at("options").items()) {
    if (v.is_boolean()) {
      if (v.get<bool>()) args.push_back("--" + name);
    } else {
      args.push_back("--" + name);
      args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
  }
  return args;
}

struct Context {
  std::vector<std::string> args;
  std::vector<std::string> command;
  json options;
  std::optional<std::uint64_t> seed;

  json manifest(json resolved) const {
    json m = {{"command_line", join_command(args)},
              {"config", {{"command", command}, {"options", options}, {"resolved", std::move(resolved)}}},
              {"version", kVersion},
              {"timestamp", utc_timestamp()}};
    m["seed"] = seed ? json(*seed) : json(nullptr);
    return m;
  }
};

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

void cmd_solve(const ModelFlags& f, const Context& ctx, std::ostream& out) {
  Model m = f.model();
  auto pol = f.policy(m);
  auto chain = build_chain(m, pol, f.start_spec(m), f.cap);
  auto rep = solve(chain);
  json ts = json::array(), as = json::array();
  for (const auto& k : chain.transient()) ts.push_back(state_json(k));
  for (const auto& k : chain.absorbing()) as.push_back(state_json(k));
  json resolved = model_json(m);
  resolved["policy"] = policy_json(pol);
  emit(out, {{"manifest", ctx.manifest(resolved)},
             {"transient_states", ts},
             {"absorbing_states", as},
             {"t", vector_json(rep.t)},
             {"A", matrix_json(rep.A)},
             {"start", vector_json(chain.start())},
             {"start_time", rep.start_time},
             {"start_absorption", vector_json(rep.start_absorption)},
             {"residual", rep.residual}});
}

void cmd_optimize(const ModelFlags& f, bool population, double lo, double hi, const Context& ctx, std::ostream& out) {
  Model m = f.model();
  StartSpec st = f.start_spec(m);
  auto time_at = [&](const Laziness& lz) {
    return solve(build_chain(m, f.policy_with(m, lz), st, f.cap)).start_time;
  };
  json res;
  OptResult r;
  if (population) {
    r = minimize_2d([&](double p1, double p2) { return time_at(Laziness::by_population({p1, p2})); },
                    Box{lo, hi, lo, hi});
    res["p"] = r.argmin[0];
    res["r"] = r.argmin[1];
  } else {
    r = minimize_scalar([&](double p) { return time_at(Laziness::constant(p)); }, lo, hi);
    res["p"] = r.argmin[0];
  }
  json resolved = model_json(m);
  resolved["box"] = {lo, hi};
  res["manifest"] = ctx.manifest(resolved);
  res["argmin"] = r.argmin;
  res["value"] = r.value;
  res["bracket"] = r.bracket;
  res["evaluations"] = r.evaluations;
  emit(out, res);
}

json saddle_json(const SaddleResult& r) {
  return {{"h_star", r.h_star},
          {"s_star", r.s_star},
          {"value", r.value},
          {"gradient_norm", r.gradient_norm},
          {"hessian_det", r.hessian_det},
          {"flat_in_h", r.flat_in_h},
          {"certificate",
           {{"max_over_h", r.max_over_h}, {"min_over_s", r.min_over_s}, {"holds", r.certified}}}};
}

games::TeamSearchSpec team_spec(const std::string& graph, int searchers, const std::string& objective) {
  games::TeamSearchSpec spec;
  spec.graph = parse_graph_spec(graph);
  spec.searchers = searchers;
  if (objective == "weighted") {
    spec.objective = games::TeamSearchSpec::Objective::weighted;
  } else if (objective == "conditional") {
    spec.objective = games::TeamSearchSpec::Objective::conditional;
  } else {
    throw InvalidArgument("--objective must be weighted or conditional");
  }
  return spec;
}

SimConfig sim_config(const ModelFlags& f, const Model& m, long trials, long max_steps, std::uint64_t seed,
                     unsigned threads) {
  SimConfig c;
  c.graph = m.graph();
  c.classes = m.classes();
  c.goal = m.goal();
  c.start = f.start_spec(m);
  c.trials = trials;
  c.max_steps = max_steps;
  c.seed = seed;
  c.threads = threads;
  return c;
}

void write_table(const std::vector<SweepRow>& rows, const std::string& path, const json& manifest, std::ostream& out,
                 std::ostream& err) {
  for (const auto& r : rows) {
    if (!r.result.warning.empty()) err << "warning: p=" << r.p << ": " << r.result.warning << '\n';
  }
  if (path.empty()) {
    write_csv(out, rows);
    err << manifest.dump() << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw InvalidArgument("cannot write " + path);
  write_csv(f, rows);
  std::ofstream mf(path + ".manifest.json");
  mf << manifest.dump(2) << '\n';
}

json sim_json(const SimResult& r) {
  json hist = json::object();
  for (auto [t, c] : r.histogram) hist[std::to_string(t)] = c;
  json j = {{"mean", r.mean},        {"stderr", r.std_error}, {"trials", r.trials},
            {"censored", r.censored}, {"histogram", hist},     {"warning", r.warning}};
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------
// Spec parsers
// ---------------------------------------------------------------------------

Graph parse_graph_spec(std::string_view spec) {
  auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw InvalidArgument("graph spec needs the form family:arg, got '" + std::string(spec) + "'");
  auto family = spec.substr(0, colon);
  auto arg = spec.substr(colon + 1);
  if (family == "file") {
    std::ifstream in{std::string(arg)};
    if (!in) throw InvalidArgument("cannot read graph file '" + std::string(arg) + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_edge_list(ss.str());
  }
  int n = parse_int(arg, "graph size");
  if (family == "cycle") return build_cycle(n);
  if (family == "line") return build_line(n);
  if (family == "grid") return build_grid(n);
  if (family == "complete") return build_complete(n);
  throw InvalidArgument("unknown graph family '" + std::string(family) + "'");
}

Goal parse_goal_spec(std::string_view spec) {
  if (spec == "gather") return Goal::gathering();
  if (spec == "capture") return Goal::capture();
  if (spec == "first-alone") return Goal::first_alone();
  if (spec.rfind("distance:", 0) == 0) return Goal::distancing(parse_int(spec.substr(9), "distance"));
  throw InvalidArgument("unknown goal '" + std::string(spec) + "'");
}

std::vector<double> parse_laziness_list(std::string_view text) {
  std::vector<double> v;
  for (auto part : split(text, ',')) {
    double x = parse_double(part, "laziness");
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("laziness values must lie in [0, 1]");
    v.push_back(x);
  }
  return v;
}

std::vector<double> parse_range(std::string_view text) {
  auto parts = split(text, ':');
  if (parts.size() == 1) return {parse_double(parts[0], "range")};
  if (parts.size() != 3) throw InvalidArgument("range needs lo:hi:step");
  double lo = parse_double(parts[0], "range start");
  double hi = parse_double(parts[1], "range end");
  double step = parse_double(parts[2], "range step");
  if (!(step > 0.0) || hi < lo) throw InvalidArgument("range needs lo <= hi and step > 0");
  std::vector<double> v;
  auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= count; ++i) v.push_back(lo + static_cast<double>(i) * step);
  return v;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lazy random walk absorption analysis"};
  app.set_help_flag("--help", "print this help and exit");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(0, 1);
  std::string config_path;
  app.add_option("--config", config_path, "replay the command recorded in a JSON manifest");

  // solve
  ModelFlags solve_f;
  auto* solve_cmd = app.add_subcommand("solve", "expected absorption times and probabilities");
  solve_f.add(solve_cmd, true);

  // optimize
  ModelFlags opt_f;
  bool population = false;
  double opt_lo = 0.0, opt_hi = kMaxLaziness;
  auto* opt_cmd = app.add_subcommand("optimize", "laziness minimising the expected time from the start");
  opt_f.add(opt_cmd, false);
  opt_cmd->add_flag("--population", population, "optimise (p1, p2): laziness alone vs. sharing a node");
  opt_cmd->add_option("--lo", opt_lo, "lower laziness bound")->check(CLI::Range(0.0, 1.0));
  opt_cmd->add_option("--hi", opt_hi, "upper laziness bound")->check(CLI::Range(0.0, 1.0));

  // saddle
  std::string saddle_graph = "cycle:3", saddle_objective = "weighted";
  int saddle_searchers = 2;
  auto* saddle_cmd = app.add_subcommand("saddle", "saddle point of the team search game");
  saddle_cmd->add_option("--graph", saddle_graph, "graph spec");
  saddle_cmd->add_option("--searchers", saddle_searchers, "searcher count")->check(CLI::PositiveNumber);
  saddle_cmd->add_option("--objective", saddle_objective, "weighted | conditional");

  // game
  auto* game_cmd = app.add_subcommand("game", "game analyses");
  game_cmd->require_subcommand(1);
  double g_h = 0.0, g_s = 0.0, g_r = 0.0, g_q = 0.0, g_p = 0.0, g_grid = 0.01;
  std::string g_graph = "cycle:3", g_objective = "weighted", g_mode = "full";
  int g_searchers = 2, g_n = 3;
  bool g_rows = false;
  auto* team_cmd = game_cmd->add_subcommand("team", "team search capture time T(h, s)");
  team_cmd->add_option("--h", g_h, "hider laziness")->required()->check(CLI::Range(0.0, 1.0));
  team_cmd->add_option("--s", g_s, "searcher laziness")->required()->check(CLI::Range(0.0, 1.0));
  team_cmd->add_option("--graph", g_graph, "graph spec");
  team_cmd->add_option("--searchers", g_searchers, "searcher count")->check(CLI::PositiveNumber);
  team_cmd->add_option("--objective", g_objective, "weighted | conditional");
  auto* comp_cmd = game_cmd->add_subcommand("competitive", "shares of two competing searchers");
  comp_cmd->add_option("--r", g_r, "searcher 1 laziness")->required()->check(CLI::Range(0.0, 1.0));
  comp_cmd->add_option("--s", g_s, "searcher 2 laziness")->required()->check(CLI::Range(0.0, 1.0));
  comp_cmd->add_option("--h", g_h, "hider laziness")->required()->check(CLI::Range(0.0, 1.0));
  comp_cmd->add_option("--graph", g_graph, "graph spec");
  auto* eq_cmd = game_cmd->add_subcommand("equilibrium", "grid check of the competitive equilibrium at (s, s, h)");
  std::optional<double> eq_s;
  double eq_h = 1.0 / 3.0;
  eq_cmd->add_option("--s", eq_s, "searcher laziness (default: root of the searcher quintic)")
      ->check(CLI::Range(0.0, 1.0));
  eq_cmd->add_option("--h", eq_h, "hider laziness")->check(CLI::Range(0.0, 1.0));
  eq_cmd->add_option("--grid", g_grid, "grid step")->check(CLI::Range(1e-6, 0.1));
  eq_cmd->add_option("--graph", g_graph, "graph spec");
  auto* disp_cmd = game_cmd->add_subcommand("disperse", "first-to-disperse payoff of a deviator");
  disp_cmd->add_option("--n", g_n, "players (2 or 3)")->check(CLI::IsMember({2, 3}));
  disp_cmd->add_option("--q", g_q, "deviator laziness")->required()->check(CLI::Range(0.0, 1.0));
  disp_cmd->add_option("--p", g_p, "laziness of the others")->required()->check(CLI::Range(0.0, 1.0));
  disp_cmd->add_option("--mode", g_mode, "full | modified")->check(CLI::IsMember({"full", "modified"}));
  auto* nse_cmd = game_cmd->add_subcommand("no-symmetric", "certify that no symmetric equilibrium exists for n = 3");
  nse_cmd->add_option("--grid", g_grid, "grid step")->check(CLI::Range(1e-4, 0.01));
  nse_cmd->add_flag("--rows", g_rows, "include the per-p rows");
  auto* w_cmd = game_cmd->add_subcommand("capture-prob", "one-period capture probability on C3");
  w_cmd->add_option("--s", g_s, "searcher laziness")->required()->check(CLI::Range(0.0, 1.0));
  w_cmd->add_option("--h", g_h, "hider laziness")->required()->check(CLI::Range(0.0, 1.0));

  // simulate / sweep
  ModelFlags sim_f, sweep_f;
  long trials = 5000, max_steps = 1'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool sim_json_out = false;
  std::string out_path, sweep_range;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of the expected time");
  sim_f.add(sim_cmd, true);
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sweep over a common laziness");
  sweep_f.add(sweep_cmd, false);
  sweep_cmd->add_option("--p", sweep_range, "lo:hi:step or a single value")->required();
  for (auto* c : {sim_cmd, sweep_cmd}) {
    c->add_option("--trials", trials, "trial count")->check(CLI::PositiveNumber);
    c->add_option("--max-steps", max_steps, "periods per trial before censoring")->check(CLI::PositiveNumber);
    c->add_option("--seed", seed, "master seed")->required();
    c->add_option("--threads", threads, "worker threads (0 = all cores)");
    c->add_option("--out", out_path, "write CSV here and the manifest next to it");
  }
  sim_cmd->add_flag("--json", sim_json_out, "JSON with histogram instead of CSV");

  std::vector<const char*> cargv;
  for (const auto& a : args) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!config_path.empty()) {
      if (!app.get_subcommands().empty()) throw InvalidArgument("--config replaces the command; give nothing else");
      std::ifstream in(config_path);
      if (!in) throw InvalidArgument("cannot read " + config_path);
      json manifest;
      try {
        manifest = json::parse(in);
        if (manifest.contains("manifest")) manifest = manifest.at("manifest");
        return run(replay_args(manifest), out, err);
      } catch (const json::exception& e) {
        throw InvalidArgument(std::string("bad manifest: ") + e.what());
      }
    }
    if (app.get_subcommands().empty()) {
      out << app.help();
      return kUsage;
    }

    Context ctx;
    ctx.args = args;
    const CLI::App* leaf = app.get_subcommands().front();
    ctx.command.push_back(leaf->get_name());
    if (!leaf->get_subcommands().empty()) {
      leaf = leaf->get_subcommands().front();
      ctx.command.push_back(leaf->get_name());
    }
    ctx.options = given_options(leaf);

    if (*solve_cmd) {
      cmd_solve(solve_f, ctx, out);
    } else if (*opt_cmd) {
      if (!(opt_lo < opt_hi)) throw InvalidArgument("--lo must be below --hi");
      cmd_optimize(opt_f, population, opt_lo, opt_hi, ctx, out);
    } else if (*saddle_cmd) {
      auto spec = team_spec(saddle_graph, saddle_searchers, saddle_objective);
      auto r = games::team_search_saddle(spec);
      json j = saddle_json(r);
      j["manifest"] = ctx.manifest({{"graph", saddle_graph}, {"searchers", saddle_searchers}, {"objective", saddle_objective}});
      emit(out, j);
    } else if (*team_cmd) {
      auto spec = team_spec(g_graph, g_searchers, g_objective);
      auto t = games::team_search_times(g_h, g_s, spec);
      emit(out, {{"manifest", ctx.manifest(json::object())},
                 {"T", games::team_search_T(g_h, g_s, spec)},
                 {"weighted", t.weighted},
                 {"conditional", t.conditional},
                 {"transient_start_mass", t.transient_start_mass}});
    } else if (*comp_cmd) {
      auto o = games::competitive_shares(g_r, g_s, g_h, parse_graph_spec(g_graph));
      emit(out, {{"manifest", ctx.manifest(json::object())},
                 {"a3", o.a3},
                 {"a4", o.a4},
                 {"a5", o.a5},
                 {"T", o.T},
                 {"payoff1", o.payoff1()},
                 {"payoff2", o.payoff2()}});
    } else if (*eq_cmd) {
      double s = eq_s ? *eq_s : games::searcher_quintic_root();
      auto rep = games::verify_competitive_equilibrium(s, eq_h, g_grid, parse_graph_spec(g_graph));
      emit(out, {{"manifest", ctx.manifest({{"s", s}, {"h", eq_h}, {"grid", g_grid}})},
                 {"hider_violation", rep.hider_violation},
                 {"worst_hider", rep.worst_hider},
                 {"searcher_violation", rep.searcher_violation},
                 {"worst_searcher", rep.worst_searcher},
                 {"max_violation", rep.max_violation()},
                 {"holds", rep.max_violation() <= 1e-6}});
    } else if (*disp_cmd) {
      games::DisperseGameSpec spec{g_n, g_q, g_p,
                                   g_mode == "modified" ? games::DisperseGameSpec::TieMode::modified
                                                        : games::DisperseGameSpec::TieMode::full_share};
      auto o = games::disperse_game(spec);
      emit(out, {{"manifest", ctx.manifest(json::object())},
                 {"deviator_payoff", o.deviator_payoff},
                 {"full_share_payoffs", o.full_share_payoffs},
                 {"deviator_tie_probability", o.deviator_tie_probability}});
    } else if (*nse_cmd) {
      auto rep = games::verify_no_symmetric_equilibrium(g_grid);
      json j = {{"manifest", ctx.manifest({{"grid", g_grid}})},
                {"min_margin", rep.min_margin},
                {"worst_p", rep.worst_p},
                {"two_player_max_error", rep.two_player_max_error},
                {"holds", rep.holds()}};
      if (g_rows) {
        json rows = json::array();
        for (const auto& r : rep.rows) {
          rows.push_back({{"p", r.p}, {"best_q", r.best_q}, {"best_payoff", r.best_payoff}, {"margin", r.margin}});
        }
        j["rows"] = rows;
      }
      emit(out, j);
    } else if (*w_cmd) {
      emit(out, {{"manifest", ctx.manifest(json::object())}, {"W", games::one_step_capture_prob(g_s, g_h)}});
    } else if (*sim_cmd) {
      ctx.seed = seed;
      Model m = sim_f.model();
      SimConfig c = sim_config(sim_f, m, trials, max_steps, seed, threads);
      c.policy = sim_f.policy(m);
      auto r = simulate(c);
      json resolved = model_json(m);
      resolved["policy"] = policy_json(c.policy);
      json manifest = ctx.manifest(resolved);
      if (sim_json_out) {
        if (!r.warning.empty()) err << "warning: " << r.warning << '\n';
        json j = sim_json(r);
        j["manifest"] = manifest;
        emit(out, j);
      } else {
        double p = c.policy.front().values().front();
        write_table({{p, r}}, out_path, manifest, out, err);
      }
    } else if (*sweep_cmd) {
      ctx.seed = seed;
      Model m = sweep_f.model();
      SimConfig c = sim_config(sweep_f, m, trials, max_steps, seed, threads);
      auto rows = sweep_p(c, parse_range(sweep_range));
      json resolved = model_json(m);
      resolved["p_values"] = parse_range(sweep_range);
      write_table(rows, out_path, ctx.manifest(resolved), out, err);
    }
  } catch (const NonAbsorbing& e) {
    err << "non-absorbing: " << e.what() << '\n';
    return kDiagnostic;
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << '\n';
    return kDiagnostic;
  } catch (const StateCapExceeded& e) {
    err << "state cap: " << e.what() << '\n';
    return kDiagnostic;
  } catch (const BracketError& e) {
    err << "no bracket: " << e.what() << '\n';
    return kDiagnostic;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

}  // namespace lrw::cli
