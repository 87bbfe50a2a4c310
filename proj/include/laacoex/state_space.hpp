// Scheme-specific state enumeration with a stable lexicographic order.
#pragma once

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "model.hpp"

namespace laacoex {

struct StateSpace {
  SchemeConfig config;
  std::vector<SystemState> states;  // lexicographic in (w, x, y, z)

  std::size_t size() const { return states.size(); }

  // Position of a state, or npos when the state is outside the space.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index(const SystemState& n) const {
    if (!config.state_legal(n)) return npos;
    // Dense ranking over (w, x, y, z) with x + y <= D removed.
    auto it = index_.find(key(n));
    return it == index_.end() ? npos : it->second;
  }

  static StateSpace enumerate(const SchemeConfig& config);

 private:
  static long key(const SystemState& n) {
    return ((static_cast<long>(n.w) * 64 + n.x) * 64 + n.y) * 4096 + n.z;
  }
  std::unordered_map<long, std::size_t> index_;
};

// Enumerates all and only the legal states for the scheme: phases per
// scheme, x + y <= D, 0 <= z <= Q. Deterministic lexicographic order.
inline StateSpace StateSpace::enumerate(const SchemeConfig& config) {
  config.validate_analytic();
  StateSpace sp;
  sp.config = config;
  const int w_lo = scheme_has_phases(config.scheme) ? 0 : 2;
  for (int w = w_lo; w <= 2; ++w)
    for (int x = 0; x <= config.D; ++x)
      for (int y = 0; x + y <= config.D; ++y)
        for (int z = 0; z <= config.Q; ++z)
          sp.states.push_back({w, x, y, z});
  for (std::size_t i = 0; i < sp.states.size(); ++i)
    sp.index_.emplace(key(sp.states[i]), i);
  return sp;
}

inline StateSpace enumerate_states(const SchemeConfig& config) {
  return StateSpace::enumerate(config);
}

}  // namespace laacoex
