#include "lrw/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <thread>

#include "lrw/errors.hpp"

namespace lrw {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGoldenGamma;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double u01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

std::size_t pick(std::mt19937_64& gen, std::size_t n) {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(gen()) * n) >> 64);
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

/// Shared read-only pieces of one simulation.
struct Runner {
  const SimConfig& cfg;
  Model model;
  std::vector<int> class_of;  // per agent
  std::vector<double> start_cdf;

  explicit Runner(const SimConfig& c) : cfg(c), model(c.graph, c.classes, c.goal) {
    model.check_policy(c.policy);
    for (std::size_t k = 0; k < c.classes.size(); ++k) {
      for (int i = 0; i < c.classes[k].count; ++i) class_of.push_back(static_cast<int>(k));
    }
    switch (c.start.kind) {
      case StartSpec::Kind::positions:
        model.canonical(c.start.positions);
        break;
      case StartSpec::Kind::distribution: {
        double acc = 0.0;
        for (const auto& [key, w] : c.start.distribution) {
          if (w < 0.0) throw InvalidArgument("start weights must be non-negative");
          model.canonical(key.positions);
          acc += w;
          start_cdf.push_back(acc);
        }
        if (std::abs(acc - 1.0) > 1e-12) throw InvalidArgument("start distribution must sum to 1");
        break;
      }
      case StartSpec::Kind::uniform:
        break;
    }
  }

  std::vector<Node> draw_start(std::mt19937_64& gen) const {
    const auto n = static_cast<std::size_t>(model.graph().size());
    std::vector<Node> pos;
    switch (cfg.start.kind) {
      case StartSpec::Kind::positions:
        pos = cfg.start.positions;
        break;
      case StartSpec::Kind::uniform:
        for (std::size_t i = 0; i < class_of.size(); ++i) pos.push_back(static_cast<Node>(pick(gen, n)));
        break;
      case StartSpec::Kind::distribution: {
        double u = u01(gen) * start_cdf.back();
        auto it = std::upper_bound(start_cdf.begin(), start_cdf.end(), u);
        auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - start_cdf.begin()), start_cdf.size() - 1);
        pos = cfg.start.distribution[idx].first.positions;
        break;
      }
    }
    if (model.goal().kind == Goal::Kind::gathering) pos = model.canonical(std::move(pos)).positions;
    return pos;
  }

  /// Periods until absorption, or -1 when max_steps is reached first.
  long run(std::uint64_t seed) const {
    std::mt19937_64 gen(seed);
    auto pos = draw_start(gen);
    const bool gathering = model.goal().kind == Goal::Kind::gathering;
    const Graph& g = model.graph();
    std::vector<int> pop(pos.size(), 1);
    StateKey key;
    for (long step = 0;; ++step) {
      key.positions = pos;
      if (model.is_absorbing(key)) return step;
      if (step == cfg.max_steps) return -1;
      if (!gathering) {
        for (std::size_t i = 0; i < pos.size(); ++i) {
          pop[i] = static_cast<int>(std::count(pos.begin(), pos.end(), pos[i]));
        }
      }
      std::vector<Node> next = pos;
      for (std::size_t i = 0; i < pos.size(); ++i) {
        const Laziness& lz = cfg.policy[gathering ? 0 : static_cast<std::size_t>(class_of[i])];
        if (u01(gen) < lz.at(gathering ? 1 : pop[i])) continue;
        const auto& nb = g.neighbors(pos[i]);
        next[i] = nb[pick(gen, nb.size())];
      }
      if (gathering) {
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
      }
      pos = std::move(next);
    }
  }
};

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) { return splitmix64(seed ^ splitmix64(index)); }

SimResult simulate(const SimConfig& config) {
  if (config.trials < 1) throw InvalidArgument("trials must be at least 1");
  if (config.max_steps < 1) throw InvalidArgument("max_steps must be at least 1");
  const Runner runner(config);

  const auto trials = static_cast<std::size_t>(config.trials);
  std::vector<long> times(trials, 0);
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  auto worker = [&] {
    try {
      for (std::size_t i; (i = next.fetch_add(1)) < trials;) times[i] = runner.run(trial_seed(config.seed, i));
    } catch (...) {
      failure = std::current_exception();
      next = trials;
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  SimResult res;
  res.trials = config.trials;
  std::vector<double> done;
  done.reserve(trials);
  for (long t : times) {
    if (t < 0) {
      ++res.censored;
    } else {
      done.push_back(static_cast<double>(t));
      ++res.histogram[t];
    }
  }
  const auto n = done.size();
  if (n == 0) {
    res.mean = std::numeric_limits<double>::quiet_NaN();
    res.std_error = std::numeric_limits<double>::quiet_NaN();
  } else {
    res.mean = pairwise_sum(done.data(), n) / static_cast<double>(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (done[i] - res.mean) * (done[i] - res.mean);
    double var = n > 1 ? pairwise_sum(sq.data(), n) / static_cast<double>(n - 1) : 0.0;
    res.std_error = std::sqrt(var / static_cast<double>(n));
  }
  if (res.censored > 0) {
    res.warning = std::to_string(res.censored) + " of " + std::to_string(res.trials) + " trials hit max_steps = " +
                  std::to_string(config.max_steps) + " without reaching the goal; mean is over the rest";
  }
  return res;
}

std::vector<SweepRow> sweep_p(const SimConfig& config, const std::vector<double>& p_values) {
  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < p_values.size(); ++k) {
    double p = p_values[k];
    if (!(p >= 0.0 && p < 1.0)) throw InvalidArgument("sweep laziness values must lie in [0, 1)");
    SimConfig c = config;
    c.policy.assign(config.classes.size(), Laziness::constant(p));
    c.seed = config.seed + static_cast<std::uint64_t>(k) * kGoldenGamma;
    rows.push_back({p, simulate(c)});
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "p,mean,stderr,trials,censored\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%ld,%ld\n", r.p, r.result.mean, r.result.std_error,
                  r.result.trials, r.result.censored);
    os << buf;
  }
}

}  // namespace lrw
