// Seeded discrete-event simulator of the coexistence queueing model:
// Poisson arrivals, service on D unlicensed channels, FIFO buffer of size Q,
// scheme-specific On/Off/Sensing phase machine and buffer threshold.
//
// The event rules mirror the chain's indicator predicates exactly, so under
// the default exponential distributions the simulated process is the same
// stochastic process the analytic solver computes.
#pragma once

#include <cassert>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <vector>

#include "deltas.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace laacoex {

struct DistributionSpec {
  enum class Kind { Exponential, Deterministic, Custom };
  Kind kind = Kind::Exponential;
  double rate = 1.0;       // Exponential / Custom
  double value = 0.0;      // Deterministic
  std::string preset;      // Custom preset name; "ftp" is supported

  void validate() const {
    switch (kind) {
      case Kind::Exponential:
        if (!(rate > 0)) throw ConfigError("exponential rate must be > 0");
        break;
      case Kind::Deterministic:
        if (value < 0) throw ConfigError("deterministic value must be >= 0");
        break;
      case Kind::Custom:
        // Simplified FTP traffic preset: session arrivals with an
        // exponentially distributed file size mapped to service time, which
        // coincides with the plain exponential default.
        if (preset != "ftp")
          throw ConfigError("unknown custom distribution preset: " + preset);
        if (!(rate > 0)) throw ConfigError("custom preset rate must be > 0");
        break;
    }
  }
};

inline double sample(const DistributionSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case DistributionSpec::Kind::Exponential:
      return rng.exponential(spec.rate);
    case DistributionSpec::Kind::Deterministic:
      return spec.value;
    case DistributionSpec::Kind::Custom:
      return rng.exponential(spec.rate);
  }
  return 0.0;
}

// Optional per-quantity overrides; anything unset defaults to the
// exponential distribution with the matching RateParams rate.
struct DistributionOverrides {
  std::optional<DistributionSpec> laa_interarrival;
  std::optional<DistributionSpec> wifi_interarrival;
  std::optional<DistributionSpec> laa_service;
  std::optional<DistributionSpec> wifi_service;
  std::optional<DistributionSpec> sensing;
  std::optional<DistributionSpec> on_duration;
  std::optional<DistributionSpec> off_duration;
};

struct SimConfig {
  SchemeConfig scheme;
  RateParams rates;
  DistributionOverrides overrides;
  std::uint64_t sessions = 1'000'000;  // one session = one packet arrival
  std::uint64_t seed = 1;
  int batches = 10;  // batch-means confidence intervals

  void validate() const {
    scheme.validate();
    rates.validate();
    if (sessions < 1) throw ConfigError("sessions must be >= 1");
    if (batches < 2) throw ConfigError("batches must be >= 2");
    for (const auto* o :
         {&overrides.laa_interarrival, &overrides.wifi_interarrival,
          &overrides.laa_service, &overrides.wifi_service, &overrides.sensing,
          &overrides.on_duration, &overrides.off_duration})
      if (o->has_value()) o->value().validate();
  }
};

enum class EventKind {
  LaaArrival,
  WifiArrival,
  LaaDeparture,
  WifiDeparture,
  PhaseTimerExpiry,
  SensingComplete,
  LaaServiceStart,  // service-start delay of a queued LAA packet while On
};

inline const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::LaaArrival: return "laa_arrival";
    case EventKind::WifiArrival: return "wifi_arrival";
    case EventKind::LaaDeparture: return "laa_departure";
    case EventKind::WifiDeparture: return "wifi_departure";
    case EventKind::PhaseTimerExpiry: return "phase_expiry";
    case EventKind::SensingComplete: return "sensing_complete";
    case EventKind::LaaServiceStart: return "laa_service_start";
  }
  return "?";
}

struct EventRecord {
  double time = 0.0;
  EventKind kind = EventKind::LaaArrival;
  SystemState detail;  // state snapshot after processing
};

struct SimStats {
  std::uint64_t laa_arrivals = 0;
  std::uint64_t laa_drops = 0;
  std::uint64_t wifi_arrivals = 0;
  std::uint64_t wifi_drops_laa_occupied = 0;  // arrivals finding x = D
  std::uint64_t wifi_drops_total = 0;         // any cleared Wi-Fi arrival
  double p_bl_hat = 0.0;
  double p_bw_hat = 0.0;
  double ci95_bl = 0.0;  // batch-means 95% half-width
  double ci95_bw = 0.0;
  double sim_time = 0.0;
  std::uint64_t events = 0;
  // Time-weighted fraction of time per visited state; sums to 1.
  std::map<SystemState, double> occupancy;
};

struct Finished : std::runtime_error {
  Finished() : std::runtime_error("simulation already reached its target") {}
};

class Simulator {
 public:
  explicit Simulator(const SimConfig& config) : cfg_(config), rng_(config.seed) {
    cfg_.validate();
    n_.w = scheme_has_phases(cfg_.scheme.scheme) ? 0 : 2;
    if (cfg_.rates.lambda_l > 0)
      schedule(draw_laa_interarrival(), 4, EventKind::LaaArrival, 0);
    if (cfg_.rates.lambda_w > 0)
      schedule(draw_wifi_interarrival(), 4, EventKind::WifiArrival, 0);
    if (n_.w == 0) schedule_phase_timer();
    reconcile_pickup();
  }

  bool finished() const {
    // With no arrival stream the session target is unreachable even though
    // phase timers would keep firing; treat such runs as trivially done.
    if (cfg_.rates.lambda_l == 0 && cfg_.rates.lambda_w == 0) return true;
    return sessions_done_ >= cfg_.sessions || queue_.empty();
  }

  // Processes exactly one (valid) event and returns its record.
  EventRecord step() {
    if (finished()) throw Finished();
    while (true) {
      Ev ev = queue_.top();
      queue_.pop();
      if (!valid(ev)) continue;
      occupancy_[n_] += ev.t - now_;
      now_ = ev.t;
      apply(ev);
      ++events_;
      EventRecord rec{now_, ev.kind, n_};
      if (trace_) {
        char line[96];
        std::snprintf(line, sizeof line, "%.9f %s %d %d %d %d\n", rec.time,
                      event_kind_name(rec.kind), n_.w, n_.x, n_.y, n_.z);
        (*trace_) << line;
      }
      return rec;
    }
  }

  SimStats stats() const {
    SimStats s;
    s.laa_arrivals = laa_arrivals_;
    s.laa_drops = laa_drops_;
    s.wifi_arrivals = wifi_arrivals_;
    s.wifi_drops_laa_occupied = wifi_drops_occ_;
    s.wifi_drops_total = wifi_drops_total_;
    s.p_bl_hat = laa_arrivals_ ? static_cast<double>(laa_drops_) / laa_arrivals_
                               : 0.0;
    s.p_bw_hat = wifi_arrivals_
                     ? static_cast<double>(wifi_drops_occ_) / wifi_arrivals_
                     : 0.0;
    s.ci95_bl = batch_ci(batch_laa_arr_, batch_laa_drop_);
    s.ci95_bw = batch_ci(batch_wifi_arr_, batch_wifi_drop_);
    s.sim_time = now_;
    s.events = events_;
    if (now_ > 0)
      for (const auto& [state, t] : occupancy_) s.occupancy[state] = t / now_;
    return s;
  }

  // Optional event-trace export; one line per event:
  //   time kind w x y z
  void set_trace(std::ostream* os) { trace_ = os; }

  const SystemState& state() const { return n_; }

 private:
  struct Ev {
    double t;
    int priority;  // departures 0, phase 1, sensing 2, service start 3, arrivals 4
    std::uint64_t seq;
    EventKind kind;
    std::uint64_t epoch;
    bool operator>(const Ev& o) const {
      if (t != o.t) return t > o.t;
      if (priority != o.priority) return priority > o.priority;
      return seq > o.seq;
    }
  };

  void schedule(double dt, int priority, EventKind kind, std::uint64_t epoch) {
    queue_.push(Ev{now_ + dt, priority, seq_++, kind, epoch});
  }

  bool valid(const Ev& ev) const {
    switch (ev.kind) {
      case EventKind::LaaServiceStart: return ev.epoch == pickup_epoch_;
      case EventKind::PhaseTimerExpiry:
      case EventKind::SensingComplete: return ev.epoch == phase_epoch_;
      default: return true;
    }
  }

  double draw(const std::optional<DistributionSpec>& o, double rate) {
    if (o) return sample(*o, rng_);
    return rng_.exponential(rate);
  }
  double draw_laa_interarrival() {
    return draw(cfg_.overrides.laa_interarrival, cfg_.rates.lambda_l);
  }
  double draw_wifi_interarrival() {
    return draw(cfg_.overrides.wifi_interarrival, cfg_.rates.lambda_w);
  }
  double draw_laa_service() {
    return draw(cfg_.overrides.laa_service, cfg_.rates.mu_lu);
  }
  double draw_wifi_service() {
    return draw(cfg_.overrides.wifi_service, cfg_.rates.mu_w);
  }
  double draw_sensing() { return draw(cfg_.overrides.sensing, cfg_.rates.mu_s); }
  double draw_on() { return draw(cfg_.overrides.on_duration, cfg_.rates.mu_on); }
  double draw_off() {
    return draw(cfg_.overrides.off_duration, cfg_.rates.mu_off);
  }

  void schedule_phase_timer() {
    if (!scheme_has_phases(cfg_.scheme.scheme)) return;
    switch (n_.w) {
      case 2: schedule(draw_on(), 1, EventKind::PhaseTimerExpiry, phase_epoch_); break;
      case 0: schedule(draw_off(), 1, EventKind::PhaseTimerExpiry, phase_epoch_); break;
      case 1: schedule(draw_sensing(), 2, EventKind::SensingComplete, phase_epoch_); break;
    }
  }

  void enter_phase(int w) {
    n_.w = w;
    ++phase_epoch_;
    schedule_phase_timer();
  }

  // Arms or cancels the queued-packet service-start timer so that it is
  // pending exactly in the d8 states (On, no Wi-Fi in service, queue
  // non-empty, a channel free).
  void reconcile_pickup() {
    using O = detail::OutflowDeltas;
    const bool want = O::d8(n_, cfg_.scheme);
    if (want && !pickup_armed_) {
      pickup_armed_ = true;
      schedule(rng_.exponential(cfg_.rates.mu_on_prime()), 3,
               EventKind::LaaServiceStart, pickup_epoch_);
    } else if (!want && pickup_armed_) {
      pickup_armed_ = false;
      ++pickup_epoch_;  // invalidate the pending timer
    }
  }

  void count_session() { ++sessions_done_; }
  std::size_t batch_index() const {
    const std::uint64_t b = sessions_done_ * static_cast<std::uint64_t>(
                                                 cfg_.batches) /
                            cfg_.sessions;
    return static_cast<std::size_t>(
        std::min<std::uint64_t>(b, static_cast<std::uint64_t>(cfg_.batches) - 1));
  }

  void apply(const Ev& ev) {
    using O = detail::OutflowDeltas;
    const SchemeConfig& c = cfg_.scheme;
    switch (ev.kind) {
      case EventKind::LaaArrival: {
        ensure_batches();
        const std::size_t b = batch_index();
        count_session();
        ++laa_arrivals_;
        ++batch_laa_arr_[b];
        if (O::d1(n_, c)) {
          ++n_.x;
          schedule(draw_laa_service(), 0, EventKind::LaaDeparture, 0);
        } else if (O::d5(n_, c)) {
          ++n_.z;
        } else {
          ++laa_drops_;
          ++batch_laa_drop_[b];
        }
        if (sessions_done_ < cfg_.sessions)
          schedule(draw_laa_interarrival(), 4, EventKind::LaaArrival, 0);
        break;
      }
      case EventKind::WifiArrival: {
        ensure_batches();
        const std::size_t b = batch_index();
        count_session();
        ++wifi_arrivals_;
        ++batch_wifi_arr_[b];
        if (O::d3(n_, c)) {
          ++n_.y;
          schedule(draw_wifi_service(), 0, EventKind::WifiDeparture, 0);
        } else {
          ++wifi_drops_total_;
          if (n_.x == c.D) {
            ++wifi_drops_occ_;
            ++batch_wifi_drop_[b];
          }
        }
        if (sessions_done_ < cfg_.sessions)
          schedule(draw_wifi_interarrival(), 4, EventKind::WifiArrival, 0);
        break;
      }
      case EventKind::LaaDeparture: {
        if (O::d14(n_, c)) {
          // Serve the next queued packet on the just-freed channel.
          --n_.z;
          schedule(draw_laa_service(), 0, EventKind::LaaDeparture, 0);
        } else {
          assert(O::d10(n_, c));
          --n_.x;
        }
        break;
      }
      case EventKind::WifiDeparture: {
        if (O::d7(n_, c)) {
          // Hand the channel over to the head of the LAA queue.
          --n_.y;
          ++n_.x;
          --n_.z;
          schedule(draw_laa_service(), 0, EventKind::LaaDeparture, 0);
        } else {
          assert(O::d12(n_, c));
          --n_.y;
        }
        break;
      }
      case EventKind::PhaseTimerExpiry: {
        if (n_.w == 2) {
          enter_phase(1);  // On expired -> Sensing (unconditional)
        } else {           // Off expiry
          if (O::d18(n_, c)) enter_phase(1);
          else schedule(draw_off(), 1, EventKind::PhaseTimerExpiry, phase_epoch_);
        }
        break;
      }
      case EventKind::SensingComplete: {
        if (O::d17(n_, c)) enter_phase(2);
        else if (O::d23(n_, c)) enter_phase(0);
        else  // channel-state inconclusive for this scheme: keep sensing
          schedule(draw_sensing(), 2, EventKind::SensingComplete, phase_epoch_);
        break;
      }
      case EventKind::LaaServiceStart: {
        pickup_armed_ = false;
        ++pickup_epoch_;
        ++n_.x;
        --n_.z;
        schedule(draw_laa_service(), 0, EventKind::LaaDeparture, 0);
        break;
      }
    }
    reconcile_pickup();
  }

  void ensure_batches() {
    if (batch_laa_arr_.empty()) {
      const auto b = static_cast<std::size_t>(cfg_.batches);
      batch_laa_arr_.assign(b, 0);
      batch_laa_drop_.assign(b, 0);
      batch_wifi_arr_.assign(b, 0);
      batch_wifi_drop_.assign(b, 0);
    }
  }

  double batch_ci(const std::vector<std::uint64_t>& arr,
                  const std::vector<std::uint64_t>& drop) const {
    // 95% half-width from batch means with a Student-t quantile.
    std::vector<double> means;
    for (std::size_t i = 0; i < arr.size(); ++i)
      if (arr[i] > 0) means.push_back(static_cast<double>(drop[i]) / arr[i]);
    if (means.size() < 2) return 0.0;
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= static_cast<double>(means.size());
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    var /= static_cast<double>(means.size() - 1);
    return t975(means.size() - 1) *
           std::sqrt(var / static_cast<double>(means.size()));
  }

  static double t975(std::size_t df) {
    static constexpr double table[] = {
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
        2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
        2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
    if (df == 0) return 0.0;
    if (df <= 30) return table[df - 1];
    return 1.96;
  }

  SimConfig cfg_;
  Rng rng_;
  SystemState n_{};
  double now_ = 0.0;
  std::uint64_t seq_ = 0;
  std::uint64_t events_ = 0;
  std::uint64_t sessions_done_ = 0;
  std::uint64_t phase_epoch_ = 0;
  std::uint64_t pickup_epoch_ = 0;
  bool pickup_armed_ = false;
  std::priority_queue<Ev, std::vector<Ev>, std::greater<Ev>> queue_;
  std::ostream* trace_ = nullptr;

  std::uint64_t laa_arrivals_ = 0, laa_drops_ = 0;
  std::uint64_t wifi_arrivals_ = 0, wifi_drops_occ_ = 0, wifi_drops_total_ = 0;
  std::vector<std::uint64_t> batch_laa_arr_, batch_laa_drop_;
  std::vector<std::uint64_t> batch_wifi_arr_, batch_wifi_drop_;
  std::map<SystemState, double> occupancy_;
};

// Runs a full simulation to its session target.
inline SimStats run(const SimConfig& config, std::ostream* trace = nullptr) {
  Simulator sim(config);
  sim.set_trace(trace);
  while (!sim.finished()) sim.step();
  return sim.stats();
}

}  // namespace laacoex
