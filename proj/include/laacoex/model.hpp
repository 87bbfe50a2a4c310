// Core domain types for the LAA/Wi-Fi unlicensed-band coexistence model.
//
// The system state is n = (w, x, y, z):
//   w : channel phase of the LAA small cell, 0 = Off, 1 = Sensing, 2 = On
//   x : LAA packets in service on the unlicensed channel(s), 0..D
//   y : Wi-Fi packets in service, 0..D, with x + y <= D
//   z : LAA packets waiting in the FIFO queue, 0..Q
//
// Four allocation schemes share this state:
//   UFA  - LAA holds the channel until its queue empties (phase frozen at On)
//   UTA  - LAA alternates Sensing/On/Off phases under exponential timers
//   UFAB - UFA with queue service gated by a buffer threshold Q_theta
//   UTAB - UTA with phase transitions gated by a buffer threshold Q_theta
#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace laacoex {

enum class Scheme { UFA, UTA, UFAB, UTAB };

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::UFA: return "ufa";
    case Scheme::UTA: return "uta";
    case Scheme::UFAB: return "ufab";
    case Scheme::UTAB: return "utab";
  }
  return "?";
}

inline bool scheme_has_phases(Scheme s) {
  return s == Scheme::UTA || s == Scheme::UTAB;
}

inline bool scheme_has_threshold(Scheme s) {
  return s == Scheme::UFAB || s == Scheme::UTAB;
}

// Parses "ufa"/"uta"/"ufab"/"utab" (case-sensitive, lowercase).
inline Scheme parse_scheme(const std::string& name) {
  if (name == "ufa") return Scheme::UFA;
  if (name == "uta") return Scheme::UTA;
  if (name == "ufab") return Scheme::UFAB;
  if (name == "utab") return Scheme::UTAB;
  throw std::invalid_argument("unknown scheme: '" + name +
                              "' (expected ufa, uta, ufab or utab)");
}

// Channel phase. For UFA/UFAB the phase is always On.
enum class Phase : int { Off = 0, Sensing = 1, On = 2 };

struct SystemState {
  int w = 2;  // phase (0 Off, 1 Sensing, 2 On)
  int x = 0;  // LAA in service
  int y = 0;  // Wi-Fi in service
  int z = 0;  // LAA queued

  friend auto operator<=>(const SystemState&, const SystemState&) = default;

  // Free channels / free queue slots, given D and Q.
  int free_channels(int D) const { return D - x - y; }
  int free_queue_slots(int Q) const { return Q - z; }

  std::string to_string() const {
    return "(" + std::to_string(w) + "," + std::to_string(x) + "," +
           std::to_string(y) + "," + std::to_string(z) + ")";
  }
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SchemeConfig {
  Scheme scheme = Scheme::UFA;
  int D = 1;        // unlicensed channels
  int Q = 2;        // queue capacity
  int q_theta = 1;  // buffer threshold, meaningful for UFAB/UTAB only
  // Sweep presets may set the threshold as high as Q (with a warning); the
  // strict contract for direct solve/simulate invocations is 1..Q-1.
  bool relax_threshold = false;

  void validate() const {
    if (D < 1) throw ConfigError("D must be >= 1");
    if (Q < 1) throw ConfigError("Q must be >= 1");
    if (scheme_has_threshold(scheme)) {
      const int hi = relax_threshold ? Q : Q - 1;
      if (hi < 1)
        throw ConfigError("q_theta range {1.." + std::to_string(hi) +
                          "} is empty for Q=" + std::to_string(Q));
      if (q_theta < 1 || q_theta > hi)
        throw ConfigError("q_theta=" + std::to_string(q_theta) +
                          " out of range 1.." + std::to_string(hi));
    }
  }

  // The analytic state spaces bound x, y to {0, 1}.
  void validate_analytic() const {
    validate();
    if (D != 1) throw ConfigError("analytic solving requires D = 1");
  }

  bool state_legal(const SystemState& n) const {
    if (n.x < 0 || n.y < 0 || n.x + n.y > D) return false;
    if (n.z < 0 || n.z > Q) return false;
    if (scheme_has_phases(scheme)) return n.w >= 0 && n.w <= 2;
    return n.w == 2;
  }
};

struct RateParams {
  double lambda_l = 0.0;  // LAA arrival rate
  double lambda_w = 0.0;  // Wi-Fi arrival rate
  double mu_lu = 1.0;     // LAA service rate on the unlicensed channel
  double mu_w = 1.0;      // Wi-Fi service rate
  double mu_s = 1.0;      // sensing-phase completion rate
  double mu_on = 1.0;     // On-phase expiry rate
  double mu_off = 1.0;    // Off-phase expiry rate

  // Service-start delay rate for a queued LAA packet picked up while On.
  // Derived, never stored independently.
  double mu_on_prime() const { return 10.0 * mu_on; }

  void validate() const {
    // Zero arrival rates are permitted as degenerate inputs; the direct
    // solver then restricts to the recurrent class.
    if (lambda_l < 0 || lambda_w < 0)
      throw ConfigError("arrival rates must be >= 0");
    if (mu_lu <= 0 || mu_w <= 0 || mu_s <= 0 || mu_on <= 0 || mu_off <= 0)
      throw ConfigError("service/phase rates must be > 0");
  }
};

}  // namespace laacoex
