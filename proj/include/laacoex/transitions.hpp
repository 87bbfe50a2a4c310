// Outgoing transition lists and the balance-equation terms eps_A / eps_B.
#pragma once

#include <stdexcept>
#include <vector>

#include "deltas.hpp"
#include "model.hpp"
#include "state_space.hpp"

namespace laacoex {

struct Transition {
  SystemState target;
  double rate = 0.0;  // always > 0
};

// One entry per enabled outgoing indicator, with the move and rate taken
// from the transition descriptions (multiplicities x*mu_lu / y*mu_w kept
// literal). Entries whose rate would be zero are omitted.
inline std::vector<Transition> transition_list(const SystemState& n,
                                               const SchemeConfig& c,
                                               const RateParams& r) {
  const DeltaVector d = delta_vector(n, c);
  std::vector<Transition> out;
  out.reserve(6);
  auto add = [&](SystemState target, double rate) {
    if (rate > 0.0) out.push_back({target, rate});
  };
  if (d[1]) add({n.w, n.x + 1, n.y, n.z}, r.lambda_l);
  if (d[3]) add({n.w, n.x, n.y + 1, n.z}, r.lambda_w);
  if (d[5]) add({n.w, n.x, n.y, n.z + 1}, r.lambda_l);
  if (d[7]) add({n.w, n.x + 1, n.y - 1, n.z - 1}, n.y * r.mu_w);
  if (d[8]) add({n.w, n.x + 1, n.y, n.z - 1}, r.mu_on_prime());
  if (d[10]) add({n.w, n.x - 1, n.y, n.z}, n.x * r.mu_lu);
  if (d[12]) add({n.w, n.x, n.y - 1, n.z}, n.y * r.mu_w);
  if (d[14]) add({n.w, n.x, n.y, n.z - 1}, n.x * r.mu_lu);
  if (d[17]) add({n.w + 1, n.x, n.y, n.z}, r.mu_s);
  if (d[18]) add({n.w + 1, n.x, n.y, n.z}, r.mu_off);
  if (d[23]) add({n.w - 1, n.x, n.y, n.z}, r.mu_s);
  if (d[24]) add({n.w - 1, n.x, n.y, n.z}, r.mu_on);
  return out;
}

struct BalanceTerms {
  double eps_A = 0.0;  // probability inflow:  sum over neighbors of pi * rate
  double eps_B = 0.0;  // total outflow rate of the state itself
  // True when the state has no enabled inflow indicator either; such a
  // state is unreachable and carries zero stationary mass.
  bool structurally_isolated = false;
};

// A distribution indexed like a StateSpace; queries outside the space are 0.
struct PiView {
  const StateSpace& space;
  const std::vector<double>& pi;
  double operator()(const SystemState& n) const {
    const std::size_t i = space.index(n);
    return i == StateSpace::npos ? 0.0 : pi[i];
  }
};

// Evaluates the balance terms at a state: eps_B from the outgoing
// indicators, eps_A from the explicit neighbor states named by the balance
// equation (inflow indicators d2,d4,d6,d9,d11,d13,d15,d16,d19..d22), taking
// pi = 0 for neighbors outside the space.
inline BalanceTerms balance_terms(const SystemState& n, const PiView& pi,
                                  const SchemeConfig& c, const RateParams& r) {
  const DeltaVector d = delta_vector(n, c);
  BalanceTerms b;

  b.eps_B = d[1] * r.lambda_l + d[3] * r.lambda_w + d[5] * r.lambda_l +
            d[7] * n.y * r.mu_w + d[8] * r.mu_on_prime() +
            d[10] * n.x * r.mu_lu + d[12] * n.y * r.mu_w +
            d[14] * n.x * r.mu_lu + d[17] * r.mu_s + d[18] * r.mu_off +
            d[23] * r.mu_s + d[24] * r.mu_on;

  b.eps_A = d[2] * (n.x + 1) * r.mu_lu * pi({n.w, n.x + 1, n.y, n.z}) +
            d[4] * (n.y + 1) * r.mu_w * pi({n.w, n.x, n.y + 1, n.z}) +
            d[6] * n.x * r.mu_lu * pi({n.w, n.x, n.y, n.z + 1}) +
            d[9] * r.lambda_l * pi({n.w, n.x - 1, n.y, n.z}) +
            d[11] * r.lambda_w * pi({n.w, n.x, n.y - 1, n.z}) +
            d[13] * r.lambda_l * pi({n.w, n.x, n.y, n.z - 1}) +
            d[15] * (n.y + 1) * r.mu_w * pi({n.w, n.x - 1, n.y + 1, n.z + 1}) +
            d[16] * r.mu_on_prime() * pi({n.w, n.x - 1, n.y, n.z + 1}) +
            (d[19] * r.mu_s + d[20] * r.mu_on) * pi({n.w + 1, n.x, n.y, n.z}) +
            (d[21] * r.mu_s + d[22] * r.mu_off) * pi({n.w - 1, n.x, n.y, n.z});

  bool any_inflow = false;
  for (int i : {2, 4, 6, 9, 11, 13, 15, 16, 19, 20, 21, 22})
    any_inflow = any_inflow || d[i];
  b.structurally_isolated = (b.eps_B == 0.0) && !any_inflow;
  return b;
}

// Raised when a state has zero total outflow but a live inflow: with all
// rates positive that indicates a predicate-table bug, not a valid model.
struct DegenerateState : std::runtime_error {
  SystemState state;
  explicit DegenerateState(const SystemState& n)
      : std::runtime_error("degenerate state with eps_B = 0 but live inflow: " +
                           n.to_string()),
        state(n) {}
};

}  // namespace laacoex
