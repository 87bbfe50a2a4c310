// The 24 indicator predicates (delta_1 .. delta_24) that gate every
// transition of the coexistence Markov process.
//
// Odd-role indicators describe flows OUT of a state:
//   d1  LAA arrival seizes a free channel          (w,x,y,z) -> (w,x+1,y,z)   rate l_l
//   d3  Wi-Fi arrival seizes a free channel        (w,x,y,z) -> (w,x,y+1,z)   rate l_w
//   d5  LAA arrival is buffered                    (w,x,y,z) -> (w,x,y,z+1)   rate l_l
//   d7  Wi-Fi departure hands channel to queue     (w,x,y,z) -> (w,x+1,y-1,z-1) rate y*mu_w
//   d8  queued LAA starts service after On switch  (w,x,y,z) -> (w,x+1,y,z-1) rate mu_on'
//   d10 LAA departure releases the channel         (w,x,y,z) -> (w,x-1,y,z)   rate x*mu_lu
//   d12 Wi-Fi departure releases the channel       (w,x,y,z) -> (w,x,y-1,z)   rate y*mu_w
//   d14 LAA departure serves the next queued LAA   (w,x,y,z) -> (w,x,y,z-1)   rate x*mu_lu
//   d17 Sensing -> On                              (w,x,y,z) -> (w+1,x,y,z)   rate mu_s
//   d18 Off -> Sensing                             (w,x,y,z) -> (w+1,x,y,z)   rate mu_off
//   d23 Sensing -> Off                             (w,x,y,z) -> (w-1,x,y,z)   rate mu_s
//   d24 On -> Sensing                              (w,x,y,z) -> (w-1,x,y,z)   rate mu_on
//
// Even-role indicators describe the mirrored flows INTO a state and are
// defined as the corresponding outflow predicate evaluated at the explicit
// neighbor state named by the balance equation (zero when that neighbor is
// outside the state space):
//   d2 = d10 @ (w,x+1,y,z)    d4  = d12 @ (w,x,y+1,z)   d6  = d14 @ (w,x,y,z+1)
//   d9 = d1  @ (w,x-1,y,z)    d11 = d3  @ (w,x,y-1,z)   d13 = d5  @ (w,x,y,z-1)
//   d15= d7  @ (w,x-1,y+1,z+1) d16 = d8 @ (w,x-1,y,z+1)
//   d19= d23 @ (w+1,x,y,z)    d20 = d24 @ (w+1,x,y,z)
//   d21= d17 @ (w-1,x,y,z)    d22 = d18 @ (w-1,x,y,z)
//
// Scheme differences live entirely in the predicate tables below. Model
// conventions adopted for a well-formed chain:
//   * a plain Wi-Fi release (d12) applies only when the queued-LAA handover
//     (d7) does not; for UTA/UTAB the two would otherwise overlap while On
//     with a non-empty queue.
//   * UFAB gates channel service on queue occupancy z >= Q_theta; UTAB gates
//     the phase transitions d17/d18 on the strict z > Q_theta and d23 on
//     z < Q_theta, each taken verbatim from its defining condition.
#pragma once

#include <array>
#include <cstdint>

#include "model.hpp"

namespace laacoex {

struct DeltaVector {
  // d[1] .. d[24] are the indicators; d[0] is unused and always 0.
  std::array<std::uint8_t, 25> d{};
  std::uint8_t operator[](int i) const { return d[static_cast<size_t>(i)]; }
};

namespace detail {

// Outflow predicates. Each is total on legal states of its scheme and pure
// in (state, config).
struct OutflowDeltas {
  static bool d7(const SystemState& n, const SchemeConfig& c) {
    const bool base = n.y > 0 && n.z > 0 && n.x + n.y == c.D;
    switch (c.scheme) {
      case Scheme::UFA: return base;
      case Scheme::UFAB: return base && n.z >= c.q_theta;
      case Scheme::UTA:
      case Scheme::UTAB: return n.w == 2 && base;
    }
    return false;
  }

  static bool d1(const SystemState& n, const SchemeConfig& c) {
    switch (c.scheme) {
      case Scheme::UFA: return n.x < c.D - n.y && n.z == 0;
      case Scheme::UFAB: return n.x < c.D - n.y && n.z >= c.q_theta;
      case Scheme::UTA:
      case Scheme::UTAB: return n.w == 2 && n.x < c.D - n.y && n.z == 0;
    }
    return false;
  }

  static bool d3(const SystemState& n, const SchemeConfig& c) {
    switch (c.scheme) {
      case Scheme::UFA: return n.y < c.D - n.x && n.z == 0;
      case Scheme::UFAB: return n.y < c.D - n.x && n.z < c.q_theta;
      case Scheme::UTA:
      case Scheme::UTAB: return n.y < c.D - n.x;
    }
    return false;
  }

  static bool d5(const SystemState& n, const SchemeConfig& c) {
    switch (c.scheme) {
      case Scheme::UFA: return n.z < c.Q && n.x + n.y == c.D;
      case Scheme::UFAB:
        return n.z < c.Q && (n.x + n.y == c.D || n.z < c.q_theta);
      case Scheme::UTA:
      case Scheme::UTAB:
        return n.w == 2 ? (n.z < c.Q && n.x + n.y == c.D) : n.z < c.Q;
    }
    return false;
  }

  static bool d8(const SystemState& n, const SchemeConfig& c) {
    if (!scheme_has_phases(c.scheme)) return false;
    return n.w == 2 && n.y == 0 && n.z > 0 && n.x < c.D - n.y;
  }

  static bool d10(const SystemState& n, const SchemeConfig& c) {
    const bool busy = n.x > 0 && n.x <= c.D - n.y;
    switch (c.scheme) {
      case Scheme::UFA: return busy && n.z == 0;
      case Scheme::UFAB: return busy && n.z < c.q_theta;
      case Scheme::UTA:
      case Scheme::UTAB: return busy && (n.w != 2 || n.z == 0);
    }
    return false;
  }

  static bool d12(const SystemState& n, const SchemeConfig& c) {
    const bool busy = n.y > 0 && n.y <= c.D - n.x;
    switch (c.scheme) {
      case Scheme::UFA: return busy && n.z == 0;
      case Scheme::UFAB: return busy && n.z < c.q_theta;
      case Scheme::UTA:
      case Scheme::UTAB: return busy && !d7(n, c);
    }
    return false;
  }

  static bool d14(const SystemState& n, const SchemeConfig& c) {
    switch (c.scheme) {
      case Scheme::UFA: return n.z > 0 && n.x + n.y == c.D && n.x > 0;
      case Scheme::UFAB:
        return n.z > 0 && n.x + n.y == c.D && n.x > 0 && n.z >= c.q_theta;
      case Scheme::UTA:
      case Scheme::UTAB: return n.w == 2 && n.z > 0 && n.x > 0;
    }
    return false;
  }

  static bool d17(const SystemState& n, const SchemeConfig& c) {
    if (!scheme_has_phases(c.scheme)) return false;
    const int floor = c.scheme == Scheme::UTAB ? c.q_theta : 0;
    return n.w == 1 && n.x == 0 && n.y == 0 && n.z > floor;
  }

  static bool d18(const SystemState& n, const SchemeConfig& c) {
    if (!scheme_has_phases(c.scheme)) return false;
    const int floor = c.scheme == Scheme::UTAB ? c.q_theta : 0;
    return n.w == 0 && n.z > floor;
  }

  static bool d23(const SystemState& n, const SchemeConfig& c) {
    if (!scheme_has_phases(c.scheme)) return false;
    if (n.w != 1) return false;
    const bool queue_low =
        c.scheme == Scheme::UTAB ? n.z < c.q_theta : n.z == 0;
    return (n.x == 0 && n.y == 1) || queue_low;
  }

  static bool d24(const SystemState& n, const SchemeConfig& c) {
    return scheme_has_phases(c.scheme) && n.w == 2;
  }
};

inline bool legal(const SystemState& n, const SchemeConfig& c) {
  return c.state_legal(n);
}

}  // namespace detail

// Evaluates all 24 indicators at a state. Pure function of (state, config);
// never depends on rates or on the stationary distribution.
inline DeltaVector delta_vector(const SystemState& n, const SchemeConfig& c) {
  using O = detail::OutflowDeltas;
  DeltaVector v;
  auto at = [&](int i, bool val) { v.d[static_cast<size_t>(i)] = val ? 1 : 0; };
  auto mirror = [&](SystemState m, bool (*pred)(const SystemState&,
                                                const SchemeConfig&)) {
    return detail::legal(m, c) && pred(m, c);
  };

  at(1, O::d1(n, c));
  at(3, O::d3(n, c));
  at(5, O::d5(n, c));
  at(7, O::d7(n, c));
  at(8, O::d8(n, c));
  at(10, O::d10(n, c));
  at(12, O::d12(n, c));
  at(14, O::d14(n, c));
  at(17, O::d17(n, c));
  at(18, O::d18(n, c));
  at(23, O::d23(n, c));
  at(24, O::d24(n, c));

  at(2, mirror({n.w, n.x + 1, n.y, n.z}, O::d10));
  at(4, mirror({n.w, n.x, n.y + 1, n.z}, O::d12));
  at(6, mirror({n.w, n.x, n.y, n.z + 1}, O::d14));
  at(9, mirror({n.w, n.x - 1, n.y, n.z}, O::d1));
  at(11, mirror({n.w, n.x, n.y - 1, n.z}, O::d3));
  at(13, mirror({n.w, n.x, n.y, n.z - 1}, O::d5));
  at(15, mirror({n.w, n.x - 1, n.y + 1, n.z + 1}, O::d7));
  at(16, mirror({n.w, n.x - 1, n.y, n.z + 1}, O::d8));
  at(19, mirror({n.w + 1, n.x, n.y, n.z}, O::d23));
  at(20, mirror({n.w + 1, n.x, n.y, n.z}, O::d24));
  at(21, mirror({n.w - 1, n.x, n.y, n.z}, O::d17));
  at(22, mirror({n.w - 1, n.x, n.y, n.z}, O::d18));
  return v;
}

}  // namespace laacoex
