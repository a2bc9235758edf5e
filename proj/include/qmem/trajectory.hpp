#pragma once

// Trajectory driver: advances a SyndromeState until a stopping rule fires,
// invoking a decode callback on the configured cadence. Checkpoint decodes
// observe the state as of the checkpoint time; redundant decodes on an
// unchanged state are skipped since the verdict cannot change.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "qmem/kmc.hpp"

namespace qmem {

enum class StopReason : uint8_t {
    DecoderFailure,
    TMax,
    SeparationReached,
    Annihilated,
    MaxEvents,
};

inline const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::DecoderFailure: return "decoder-failure";
        case StopReason::TMax: return "t-max";
        case StopReason::SeparationReached: return "separation-reached";
        case StopReason::Annihilated: return "annihilated";
        case StopReason::MaxEvents: return "max-events";
    }
    return "?";
}

struct StopRule {
    double t_max = std::numeric_limits<double>::infinity();
    double separation = 0.0;  // lattice units; > 0 enables the separation stop
    bool on_annihilation = false;
    uint64_t max_events = std::numeric_limits<uint64_t>::max();
};

struct DecodeCadence {
    enum class Mode : uint8_t { None, EveryEvent, FixedInterval, Geometric } mode = Mode::None;
    double interval = 0.0;  // FixedInterval
    double t0 = 1.0;        // Geometric start
    double factor = 1.05;   // Geometric ratio

    static DecodeCadence none() { return {Mode::None, 0, 0, 0}; }
    static DecodeCadence every_event() { return {Mode::EveryEvent, 0, 0, 0}; }
    static DecodeCadence fixed(double dt) { return {Mode::FixedInterval, dt, 0, 0}; }
    static DecodeCadence geometric(double t0, double factor) { return {Mode::Geometric, 0, t0, factor}; }
};

struct DecodeVerdict {
    bool failed = false;
    uint32_t residual_class = 0;
};

using DecodeFn = std::function<DecodeVerdict(const SyndromeState&)>;

struct Snapshot {
    double t;
    uint32_t n_anyons;
    double energy;
    double max_pair_separation;
};

struct KmcTrajectory {
    uint64_t seed = 0;
    StopReason reason = StopReason::TMax;
    bool censored = false;
    double t_end = 0.0;
    uint64_t n_events = 0;
    uint64_t n_decodes = 0;

    uint32_t failure_class = 0;
    uint32_t n_anyons_end = 0;
    double mean_sep_end = 0.0;
    double max_sep_end = 0.0;
    // Creation time of the widest live pair at failure (failure attribution).
    double failure_pair_created = -1.0;

    std::vector<StepResult> events;  // filled when event logging is on
    std::vector<Snapshot> snapshots;

    uint64_t event_hash() const {
        uint64_t h = 0xcbf29ce484222325ull;
        for (const auto& e : events) {
            h = fnv1a_value(e.dt, h);
            h = fnv1a_value(e.qubit, h);
            h = fnv1a_value(e.kind, h);
        }
        return h;
    }
};

class CheckpointSchedule {
public:
    explicit CheckpointSchedule(const DecodeCadence& c) : c_(c) {
        if (c_.mode == DecodeCadence::Mode::FixedInterval) next_ = c_.interval;
        if (c_.mode == DecodeCadence::Mode::Geometric) next_ = c_.t0;
    }
    bool scheduled() const {
        return c_.mode == DecodeCadence::Mode::FixedInterval || c_.mode == DecodeCadence::Mode::Geometric;
    }
    double next() const { return next_; }
    void advance() {
        if (c_.mode == DecodeCadence::Mode::FixedInterval) {
            next_ += c_.interval;
        } else {
            next_ *= c_.factor;
        }
    }
    // First checkpoint at or after time t (skips silent stretches cheaply).
    void fast_forward(double t) {
        if (c_.mode == DecodeCadence::Mode::FixedInterval) {
            if (next_ < t) next_ = c_.interval * std::ceil(t / c_.interval);
            while (next_ < t) next_ += c_.interval;
        } else if (c_.mode == DecodeCadence::Mode::Geometric) {
            while (next_ < t) next_ *= c_.factor;
        }
    }

private:
    DecodeCadence c_;
    double next_ = std::numeric_limits<double>::infinity();
};

inline KmcTrajectory run_trajectory(SyndromeState& state, const StopRule& stop, const DecodeCadence& cadence,
                                    const DecodeFn& decode, Rng& rng, double snapshot_interval = 0.0) {
    KmcTrajectory tr;
    CheckpointSchedule cp(cadence);
    bool dirty = true;  // initial state has not been decoded yet
    DecodeVerdict last{};
    double sep_threshold2 = stop.separation > 0 ? stop.separation * stop.separation : 0.0;
    double next_snapshot = snapshot_interval > 0 ? snapshot_interval : std::numeric_limits<double>::infinity();

    auto dist = [&state](int32_t a, int32_t b) { return state.anyon_distance(a, b); };

    auto record_end_stats = [&](double t_end) {
        tr.t_end = t_end;
        tr.n_events = state.num_events();
        tr.n_anyons_end = uint32_t(state.num_violated());
        if (state.pair_tracking()) {
            state.pairs().separation_stats(dist, tr.mean_sep_end, tr.max_sep_end);
            if (const auto* pr = state.pairs().widest_pair(dist)) tr.failure_pair_created = pr->t_created;
        }
        if (state.params().log_events) tr.events = state.event_log();
    };

    auto take_snapshot = [&](double t) {
        double mean = 0, mx = 0;
        if (state.pair_tracking()) state.pairs().separation_stats(dist, mean, mx);
        tr.snapshots.push_back({t, uint32_t(state.num_violated()), state.energy(), mx});
    };

    auto decode_now = [&]() -> const DecodeVerdict& {
        if (dirty) {
            last = decode(state);
            ++tr.n_decodes;
            dirty = false;
        }
        return last;
    };

    for (;;) {
        if (state.num_events() >= stop.max_events) {
            tr.reason = StopReason::MaxEvents;
            tr.censored = true;
            record_end_stats(state.time());
            return tr;
        }

        double R = state.total_rate();
        double t_next;
        if (R > 0.0) {
            t_next = state.time() + rng.exponential(R);
        } else {
            if (!std::isfinite(stop.t_max)) throw std::runtime_error("kmc engine fault: total rate vanished");
            t_next = std::numeric_limits<double>::infinity();
        }

        // Checkpoints falling before the next event see the current state;
        // the verdict is constant across all of them, so one decode covers
        // the whole silent window.
        if (cp.scheduled() && cp.next() < t_next && cp.next() <= stop.t_max) {
            double c = cp.next();
            const auto& v = decode_now();
            if (v.failed) {
                tr.reason = StopReason::DecoderFailure;
                tr.failure_class = v.residual_class;
                record_end_stats(c);
                return tr;
            }
            cp.fast_forward(std::min(t_next, stop.t_max));
        }

        while (next_snapshot < t_next && next_snapshot <= stop.t_max) {
            take_snapshot(next_snapshot);
            next_snapshot += snapshot_interval;
        }

        if (t_next > stop.t_max) {
            tr.reason = StopReason::TMax;
            tr.censored = true;
            record_end_stats(stop.t_max);
            return tr;
        }

        state.apply_sampled_event(t_next, rng);
        dirty = true;

        if (cadence.mode == DecodeCadence::Mode::EveryEvent) {
            const auto& v = decode_now();
            if (v.failed) {
                tr.reason = StopReason::DecoderFailure;
                tr.failure_class = v.residual_class;
                record_end_stats(state.time());
                return tr;
            }
        }

        if (sep_threshold2 > 0.0 && state.pair_tracking()) {
            double mean = 0, mx = 0;
            state.pairs().separation_stats(dist, mean, mx);
            if (mx * mx >= sep_threshold2 - 1e-12) {
                tr.reason = StopReason::SeparationReached;
                record_end_stats(state.time());
                return tr;
            }
        }

        if (stop.on_annihilation && state.num_violated() == 0) {
            tr.reason = StopReason::Annihilated;
            record_end_stats(state.time());
            return tr;
        }
    }
}

}  // namespace qmem
