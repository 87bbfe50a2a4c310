// Stationary solvers: the normalized fixed-point iteration (Gauss-Seidel
// sweep over pi(n) = eps_A / eps_B with per-sweep normalization) and a
// direct global-balance linear solve used as an oracle.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "transitions.hpp"

namespace laacoex {

struct SolverSettings {
  double alpha = 1e-6;             // relative convergence tolerance
  std::uint64_t max_iterations = 1'000'000;  // cap on full sweeps
  // Uniform start by default; a custom start must be positive on the space.
  std::optional<std::vector<double>> init;

  void validate(std::size_t n_states) const {
    if (!(alpha > 0)) throw ConfigError("alpha must be > 0");
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    if (init && init->size() != n_states)
      throw ConfigError("custom init has wrong length");
  }
};

struct StationaryDistribution {
  StateSpace space;
  std::vector<double> pi;  // indexed like space.states; sums to 1

  double at(const SystemState& n) const {
    const std::size_t i = space.index(n);
    return i == StateSpace::npos ? 0.0 : pi[i];
  }
};

struct DroppingProbabilities {
  double p_bl = 0.0;  // LAA dropping probability,  pi-mass of {z = Q}
  double p_bw = 0.0;  // Wi-Fi dropping probability, pi-mass of {x = D}
};

inline DroppingProbabilities dropping_probabilities(
    const StationaryDistribution& dist, const SchemeConfig& config) {
  DroppingProbabilities p;
  for (std::size_t i = 0; i < dist.space.size(); ++i) {
    const SystemState& n = dist.space.states[i];
    if (n.z == config.Q) p.p_bl += dist.pi[i];
    if (n.x == config.D) p.p_bw += dist.pi[i];
  }
  return p;
}

struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

struct Graph {
  // forward[i] = list of (target index, rate) with rate > 0
  std::vector<std::vector<std::pair<std::size_t, double>>> forward;
  std::vector<std::vector<std::pair<std::size_t, double>>> reverse;
  std::vector<double> out_rate;  // total outflow per state (== eps_B)

  static Graph build(const StateSpace& sp, const RateParams& r) {
    Graph g;
    const std::size_t n = sp.size();
    g.forward.resize(n);
    g.reverse.resize(n);
    g.out_rate.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (const Transition& t : transition_list(sp.states[i], sp.config, r)) {
        const std::size_t j = sp.index(t.target);
        if (j == StateSpace::npos)
          throw std::logic_error("transition target outside state space: " +
                                 sp.states[i].to_string() + " -> " +
                                 t.target.to_string());
        g.forward[i].push_back({j, t.rate});
        g.reverse[j].push_back({i, t.rate});
        g.out_rate[i] += t.rate;
      }
    }
    return g;
  }
};

// Iterative Tarjan SCC; returns component id per node (ids are arbitrary).
inline std::vector<int> scc_ids(
    const std::vector<std::vector<std::pair<std::size_t, double>>>& adj) {
  const std::size_t n = adj.size();
  std::vector<int> ids(n, -1), low(n, 0), num(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  int counter = 0, comp = 0;
  struct Frame {
    std::size_t v;
    std::size_t edge = 0;
  };
  for (std::size_t s = 0; s < n; ++s) {
    if (num[s] != -1) continue;
    std::vector<Frame> call{{s}};
    while (!call.empty()) {
      Frame& f = call.back();
      const std::size_t v = f.v;
      if (f.edge == 0) {
        num[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      bool descended = false;
      while (f.edge < adj[v].size()) {
        const std::size_t u = adj[v][f.edge++].first;
        if (num[u] == -1) {
          call.push_back({u});
          descended = true;
          break;
        }
        if (on_stack[u]) low[v] = std::min(low[v], num[u]);
      }
      if (descended) continue;
      if (low[v] == num[v]) {
        while (true) {
          const std::size_t u = stack.back();
          stack.pop_back();
          on_stack[u] = 0;
          ids[u] = comp;
          if (u == v) break;
        }
        ++comp;
      }
      call.pop_back();
      if (!call.empty()) {
        Frame& parent = call.back();
        low[parent.v] = std::min(low[parent.v], low[v]);
      }
    }
  }
  return ids;
}

// Dense linear solve A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> A,
                                       std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
    if (std::fabs(A[piv][col]) < 1e-300)
      throw SingularSystem("singular balance system");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = A[r][col] / A[col][col];
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) A[r][k] -= f * A[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (std::size_t k = r + 1; k < n; ++k) acc -= A[r][k] * x[k];
    x[r] = acc / A[r][r];
  }
  return x;
}

}  // namespace detail

// Result of the direct solve: the stationary distribution plus the states
// found to carry no stationary mass (unreachable or transient under the
// given rates).
struct DirectResult {
  StationaryDistribution dist;
  std::vector<SystemState> pruned;
};

// Direct oracle: solves the global-balance system pi * G = 0 with the
// normalization sum(pi) = 1, restricted to the unique closed recurrent
// class. States with neither inflow nor outflow under the given rates are
// pruned up front (unreachable); remaining transient states come out with
// zero mass and are reported as pruned as well. Throws SingularSystem when
// more than one closed class exists, and DegenerateState when a state has
// zero outflow but live inflow.
inline DirectResult solve_direct(const SchemeConfig& config,
                                 const RateParams& rates) {
  config.validate_analytic();
  rates.validate();
  const StateSpace sp = enumerate_states(config);
  const detail::Graph g = detail::Graph::build(sp, rates);
  const std::size_t n = sp.size();

  // Classify zero-outflow states.
  std::vector<char> live(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!g.forward[i].empty()) continue;
    if (!g.reverse[i].empty()) throw DegenerateState(sp.states[i]);
    live[i] = 0;  // isolated: unreachable, zero mass
  }

  // Map live states to a compact index.
  std::vector<std::size_t> live_idx;
  std::vector<std::size_t> compact(n, StateSpace::npos);
  for (std::size_t i = 0; i < n; ++i)
    if (live[i]) {
      compact[i] = live_idx.size();
      live_idx.push_back(i);
    }
  const std::size_t m = live_idx.size();
  if (m == 0) throw SingularSystem("no live states");

  // Closed-class check on the live subgraph.
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(m);
  for (std::size_t i = 0; i < n; ++i)
    if (live[i])
      for (auto [j, rate] : g.forward[i])
        adj[compact[i]].push_back({compact[j], rate});
  const std::vector<int> comp = detail::scc_ids(adj);
  int n_comp = 0;
  for (int c : comp) n_comp = std::max(n_comp, c + 1);
  std::vector<char> closed(static_cast<std::size_t>(n_comp), 1);
  for (std::size_t v = 0; v < m; ++v)
    for (auto [u, rate] : adj[v])
      if (comp[u] != comp[v]) closed[static_cast<std::size_t>(comp[v])] = 0;
  int n_closed = 0;
  for (char c : closed) n_closed += c;
  if (n_closed != 1)
    throw SingularSystem("chain is reducible: " + std::to_string(n_closed) +
                         " closed classes");

  // Build G^T on the live states, replace the last row by the
  // normalization constraint, and solve.
  std::vector<std::vector<double>> A(m, std::vector<double>(m, 0.0));
  for (std::size_t v = 0; v < m; ++v) {
    A[v][v] -= g.out_rate[live_idx[v]];
    for (auto [u, rate] : adj[v]) A[u][v] += rate;  // inflow row u, column v
  }
  std::vector<double> b(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) A[m - 1][k] = 1.0;
  b[m - 1] = 1.0;
  std::vector<double> x = detail::solve_dense(std::move(A), std::move(b));

  DirectResult res;
  res.dist.space = sp;
  res.dist.pi.assign(n, 0.0);
  double total = 0.0;
  for (std::size_t v = 0; v < m; ++v) {
    const double val = x[v] > 0.0 ? x[v] : 0.0;  // clamp tiny negatives
    res.dist.pi[live_idx[v]] = val;
    total += val;
  }
  for (double& p : res.dist.pi) p /= total;
  for (std::size_t i = 0; i < n; ++i)
    if (!live[i] || res.dist.pi[i] < 1e-14) res.pruned.push_back(sp.states[i]);
  return res;
}

// The published fixed-point iteration:
//   Step 1  start from a (uniform by default) positive distribution
//   Step 2  remember pi_old
//   Step 3  sweep pi(n) <- eps_A / eps_B in state order (in place)
//   Step 4  normalize by G = sum pi
//   Step 5  repeat while |pi - pi_old| > alpha * pi for any state
//   Step 6  extract the dropping probabilities from the converged pi
// States with zero outflow and no live inflow get pi = 0 (unreachable);
// zero outflow with live inflow raises DegenerateState.
struct IterativeResult {
  StationaryDistribution dist;
  std::uint64_t iterations = 0;  // full sweeps executed
};

inline IterativeResult solve_iterative(const SchemeConfig& config,
                                       const RateParams& rates,
                                       const SolverSettings& settings = {}) {
  config.validate_analytic();
  rates.validate();
  const StateSpace sp = enumerate_states(config);
  const detail::Graph g = detail::Graph::build(sp, rates);
  const std::size_t n = sp.size();
  settings.validate(n);

  for (std::size_t i = 0; i < n; ++i)
    if (g.forward[i].empty() && !g.reverse[i].empty())
      throw DegenerateState(sp.states[i]);

  std::vector<double> pi =
      settings.init ? *settings.init
                    : std::vector<double>(n, 1.0 / static_cast<double>(n));
  std::vector<double> pi_old(n);

  for (std::uint64_t sweep = 1; sweep <= settings.max_iterations; ++sweep) {
    pi_old = pi;
    // Gauss-Seidel sweep: eps_A reads the freshest neighbor values.
    for (std::size_t i = 0; i < n; ++i) {
      if (g.forward[i].empty()) {
        pi[i] = 0.0;  // unreachable (no outflow, no inflow)
        continue;
      }
      double eps_a = 0.0;
      for (auto [j, rate] : g.reverse[i]) eps_a += rate * pi[j];
      pi[i] = eps_a / g.out_rate[i];
    }
    double G = 0.0;
    for (double p : pi) G += p;
    if (!(G > 0.0)) throw NonConvergence("iteration lost all mass");
    for (double& p : pi) p /= G;

    bool converged = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (pi[i] == 0.0 && pi_old[i] == 0.0) continue;
      if (std::fabs(pi[i] - pi_old[i]) > settings.alpha * pi[i]) {
        converged = false;
        break;
      }
    }
    if (converged) {
      // Flush subnormal crumbs left by states whose mass decays to zero.
      for (double& p : pi)
        if (p != 0.0 && p < std::numeric_limits<double>::min()) p = 0.0;
      IterativeResult res;
      res.dist.space = sp;
      res.dist.pi = std::move(pi);
      res.iterations = sweep;
      return res;
    }
  }
  throw NonConvergence("no convergence within " +
                       std::to_string(settings.max_iterations) + " sweeps");
}

}  // namespace laacoex
