#pragma once

// Experiment drivers: coherence-time estimation, the isolated-pair survival
// protocol, the small- and large-limit toric suites, the cubic-code
// partial-self-correction suite, and an equilibrium-density probe.

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmem/catalog.hpp"
#include "qmem/decoder.hpp"
#include "qmem/fit.hpp"
#include "qmem/parallel.hpp"
#include "qmem/stats.hpp"
#include "qmem/trajectory.hpp"

namespace qmem {

struct ExperimentRecord {
    std::string experiment_id;
    std::string code;
    int L = 0;
    double beta = 0.0;
    uint64_t seed = 0;
    uint64_t sample = 0;
    double tau = 0.0;
    bool censored = false;
    uint32_t failure_class = 0;
    uint64_t n_events = 0;
    uint32_t n_anyons_at_failure = 0;
    double mean_sep = 0.0;
    double max_sep = 0.0;
};

inline EventSet parse_event_set(const std::string& s) {
    if (s == "XYZ" || s == "xyz") return EventSet::all();
    if (s == "XZ" || s == "xz") return EventSet::xz();
    if (s == "X" || s == "x") return EventSet::only_x();
    if (s == "Z" || s == "z") return EventSet::only_z();
    throw std::invalid_argument("unknown event set: " + s);
}

struct SuiteConfig {
    std::string code_id = "toric2d";
    int L = 16;
    double beta = 4.0;
    EnergyModel model = EnergyModel::stabilizer();
    EventSet events = EventSet::all();
    DecodeCadence cadence = DecodeCadence::every_event();
    double t_max = std::numeric_limits<double>::infinity();
    uint64_t max_events = 1ull << 40;
    uint64_t samples = 1000;
    uint64_t seed = 1;
    uint64_t seed_salt = 0;
    int threads = 1;
    double snapshot_interval = 0.0;
    bool log_events = false;
};

struct SuiteRun {
    std::vector<KmcTrajectory> trajectories;
    std::vector<ExperimentRecord> records;
};

inline DecodeFn make_cluster_decode_fn(ClusterDecoder& dec) {
    return [&dec](const SyndromeState& st) {
        auto c = dec.decode_sparse(st.violated_list());
        uint32_t bits = c.class_bits ^ st.frame_class();
        return DecodeVerdict{bits != 0, bits};
    };
}

// Thermal evolution from the ground state with decoding per the cadence.
inline SuiteRun run_coherence_suite(const StabilizerCode& code, const SuiteConfig& cfg,
                                    const std::string& experiment_id) {
    EventTables tables = build_event_tables(code, cfg.events);
    SuiteRun out;
    out.trajectories.resize(cfg.samples);

    parallel_samples(cfg.samples, cfg.threads, [&](uint64_t i) {
        Rng rng(mix_seed(cfg.seed, i, cfg.seed_salt));
        KmcParams prm;
        prm.beta = cfg.beta;
        prm.model = cfg.model;
        prm.events = cfg.events;
        prm.log_events = cfg.log_events;
        SyndromeState st(code, tables, prm);
        ClusterDecoder dec(code);
        StopRule stop;
        stop.t_max = cfg.t_max;
        stop.max_events = cfg.max_events;
        auto tr = run_trajectory(st, stop, cfg.cadence, make_cluster_decode_fn(dec), rng, cfg.snapshot_interval);
        tr.seed = mix_seed(cfg.seed, i, cfg.seed_salt);
        out.trajectories[i] = std::move(tr);
    });

    out.records.reserve(cfg.samples);
    for (uint64_t i = 0; i < cfg.samples; ++i) {
        const auto& tr = out.trajectories[i];
        ExperimentRecord r;
        r.experiment_id = experiment_id;
        r.code = code.name;
        r.L = code.dim > 0 ? code.period[0] / 2 : 0;
        r.beta = cfg.beta;
        r.seed = tr.seed;
        r.sample = i;
        r.tau = tr.t_end;
        r.censored = tr.censored;
        r.failure_class = tr.failure_class;
        r.n_events = tr.n_events;
        r.n_anyons_at_failure = tr.n_anyons_end;
        r.mean_sep = tr.mean_sep_end;
        r.max_sep = tr.max_sep_end;
        out.records.push_back(std::move(r));
    }
    return out;
}

struct CoherenceEstimate {
    MeanStderr tau;               // method 1: mean first decoder-failure time
    double censored_fraction = 0.0;
    bool usable = true;           // censoring within the 5% budget
    double tau_method2 = std::numeric_limits<double>::quiet_NaN();
    double method2_threshold = 0.99;
};

inline CoherenceEstimate estimate_coherence(const std::vector<KmcTrajectory>& trs, double threshold = 0.99) {
    CoherenceEstimate est;
    est.method2_threshold = threshold;
    std::vector<double> fails;
    size_t censored = 0;
    for (const auto& tr : trs) {
        if (tr.reason == StopReason::DecoderFailure)
            fails.push_back(tr.t_end);
        else
            ++censored;
    }
    if (fails.empty()) throw std::runtime_error("coherence_time: all samples censored, no estimate");
    est.censored_fraction = double(censored) / double(trs.size());
    est.usable = est.censored_fraction <= 0.05;
    est.tau = mean_stderr(fails);

    // Method 2: success fraction on a geometric checkpoint grid.
    std::sort(fails.begin(), fails.end());
    double t0 = fails.front() * 0.999;
    if (t0 <= 0) t0 = 1e-12;
    const double factor = 1.05;
    double n = double(trs.size());
    for (double t = t0; t <= fails.back() * factor; t *= factor) {
        size_t failed = size_t(std::upper_bound(fails.begin(), fails.end(), t) - fails.begin());
        if ((n - double(failed)) / n < threshold) {
            est.tau_method2 = t;
            break;
        }
    }
    return est;
}

// Isolated-pair protocol: one adjacent plaquette pair, creation disabled,
// X-only moves; the sample ends at separation L/2 or at self-annihilation.
struct PairSurvivalConfig {
    int L = 32;
    double beta = 3.0;
    uint64_t samples = 10000;
    uint64_t seed = 1;
    uint64_t seed_salt = 0;
    int threads = 1;
    uint64_t max_events = 1ull << 33;
};

struct PairSurvivalResult {
    double pi = 0.0;
    double pi_stderr = 0.0;
    MeanStderr time_to_separation;  // conditional on success
    std::vector<ExperimentRecord> records;
};

inline PairSurvivalResult pair_survival(const PairSurvivalConfig& cfg) {
    StabilizerCode code = build_toric_2d(cfg.L);
    EventTables tables = build_event_tables(code, EventSet::only_x());
    PauliOperator seed_frame(code.n);
    seed_frame.set_factor(0, Pauli::X);  // edge (0,0,0): adjacent plaquette pair

    std::vector<uint8_t> success(cfg.samples, 0);
    std::vector<double> t_end(cfg.samples, 0.0), n_events(cfg.samples, 0.0);
    parallel_samples(cfg.samples, cfg.threads, [&](uint64_t i) {
        Rng rng(mix_seed(cfg.seed, i, cfg.seed_salt));
        KmcParams prm;
        prm.beta = cfg.beta;
        prm.events = EventSet::only_x();
        prm.forbid_creation = true;
        SyndromeState st(code, tables, prm, &seed_frame);
        StopRule stop;
        stop.separation = double(cfg.L) / 2.0;
        stop.on_annihilation = true;
        stop.max_events = cfg.max_events;
        auto tr = run_trajectory(st, stop, DecodeCadence::none(), DecodeFn{}, rng);
        success[i] = tr.reason == StopReason::SeparationReached;
        t_end[i] = tr.t_end;
        n_events[i] = double(tr.n_events);
        if (tr.reason == StopReason::MaxEvents) throw std::runtime_error("pair_survival: event budget exhausted");
    });

    PairSurvivalResult out;
    size_t ns = 0;
    std::vector<double> succ_times;
    for (uint64_t i = 0; i < cfg.samples; ++i) {
        if (success[i]) {
            ++ns;
            succ_times.push_back(t_end[i]);
        }
        ExperimentRecord r;
        r.experiment_id = "pair-survival";
        r.code = code.name;
        r.L = cfg.L;
        r.beta = cfg.beta;
        r.seed = mix_seed(cfg.seed, i, cfg.seed_salt);
        r.sample = i;
        r.tau = t_end[i];
        r.censored = false;
        r.failure_class = success[i] ? 1 : 0;  // 1 = reached separation
        r.n_events = uint64_t(n_events[i]);
        out.records.push_back(std::move(r));
    }
    out.pi = double(ns) / double(cfg.samples);
    out.pi_stderr = binomial_stderr(out.pi, cfg.samples);
    out.time_to_separation = mean_stderr(succ_times);
    return out;
}

// Small-limit decomposition: tau_c is the creation time of the
// failure-causing pair (widest live pair at the failing decode), tau_m the
// remaining diffusion time. Every-event decoding.
struct SmallLimitPointResult {
    int L = 0;
    double beta = 0.0;
    MeanStderr tau, tau_c, tau_m;
    double censored_fraction = 0.0;
    double expected_pairs = 0.0;  // (L^2/2) e^{-beta}: regime indicator
    bool regime_ok = true;
    uint64_t attribution_misses = 0;
};

inline SmallLimitPointResult small_limit_point(int L, double beta, uint64_t samples, uint64_t seed, int threads,
                                               std::vector<ExperimentRecord>* records = nullptr,
                                               EventSet events = EventSet::all()) {
    StabilizerCode code = build_toric_2d(L);
    SuiteConfig cfg;
    cfg.L = L;
    cfg.beta = beta;
    cfg.events = events;
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.seed_salt = 0x51a11ull;
    cfg.threads = threads;
    cfg.cadence = DecodeCadence::every_event();
    auto run = run_coherence_suite(code, cfg, "small-limit");

    SmallLimitPointResult out;
    out.L = L;
    out.beta = beta;
    out.expected_pairs = double(L) * double(L) / 2.0 * std::exp(-beta);
    out.regime_ok = out.expected_pairs <= 1.0;
    std::vector<double> taus, tcs, tms;
    size_t censored = 0;
    for (const auto& tr : run.trajectories) {
        if (tr.reason != StopReason::DecoderFailure) {
            ++censored;
            continue;
        }
        taus.push_back(tr.t_end);
        if (tr.failure_pair_created >= 0.0) {
            tcs.push_back(tr.failure_pair_created);
            tms.push_back(tr.t_end - tr.failure_pair_created);
        } else {
            ++out.attribution_misses;
        }
    }
    out.censored_fraction = double(censored) / double(samples);
    out.tau = mean_stderr(taus);
    out.tau_c = mean_stderr(tcs);
    out.tau_m = mean_stderr(tms);
    if (records)
        for (auto& r : run.records) records->push_back(r);
    return out;
}

// Large-limit point: geometric decode checkpoints (relative resolution set by
// the cadence factor), pair statistics recorded at failure.
struct LargeLimitPointResult {
    int L = 0;
    double beta = 0.0;
    MeanStderr tau;
    double censored_fraction = 0.0;
    double density_at_failure = 0.0;  // violated checks per check site
    MeanStderr mean_sep, max_sep;
    double mean_anyons = 0.0;
};

inline LargeLimitPointResult large_limit_point(int L, double beta, uint64_t samples, uint64_t seed, int threads,
                                               const DecodeCadence& cadence, std::vector<ExperimentRecord>* records = nullptr,
                                               EventSet events = EventSet::all()) {
    StabilizerCode code = build_toric_2d(L);
    SuiteConfig cfg;
    cfg.L = L;
    cfg.beta = beta;
    cfg.events = events;
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.seed_salt = 0x1a26eull;
    cfg.threads = threads;
    cfg.cadence = cadence;
    auto run = run_coherence_suite(code, cfg, "large-limit");

    LargeLimitPointResult out;
    out.L = L;
    out.beta = beta;
    std::vector<double> taus, mseps, xseps;
    double density = 0.0, anyons = 0.0;
    size_t censored = 0, fails = 0;
    for (const auto& tr : run.trajectories) {
        if (tr.reason != StopReason::DecoderFailure) {
            ++censored;
            continue;
        }
        ++fails;
        taus.push_back(tr.t_end);
        density += double(tr.n_anyons_end) / double(code.num_checks());
        anyons += double(tr.n_anyons_end);
        mseps.push_back(tr.mean_sep_end);
        xseps.push_back(tr.max_sep_end);
    }
    out.censored_fraction = double(censored) / double(samples);
    out.tau = mean_stderr(taus);
    if (fails > 0) {
        out.density_at_failure = density / double(fails);
        out.mean_anyons = anyons / double(fails);
    }
    out.mean_sep = mean_stderr(mseps);
    out.max_sep = mean_stderr(xseps);
    if (records)
        for (auto& r : run.records) records->push_back(r);
    return out;
}

// tau = C e^{b beta} (1 + r beta + s beta^2): scan the exponent b on a grid,
// solve the inner quadratic by least squares, keep the log-space best.
struct LargeLimitFit {
    double exponent = 0.0;
    double C = 0.0, r = 0.0, s = 0.0;
    double log_loss = 0.0;
};

inline LargeLimitFit fit_large_limit(const std::vector<double>& betas, const std::vector<double>& taus) {
    if (betas.size() < 4) throw std::invalid_argument("fit_large_limit: need at least 4 points");
    LargeLimitFit best;
    best.log_loss = std::numeric_limits<double>::infinity();
    for (double b = 0.5; b <= 1.5 + 1e-12; b += 5e-4) {
        std::vector<std::vector<double>> X;
        std::vector<double> y;
        for (size_t i = 0; i < betas.size(); ++i) {
            X.push_back({1.0, betas[i], betas[i] * betas[i]});
            y.push_back(taus[i] * std::exp(-b * betas[i]));
        }
        std::vector<double> p;
        try {
            p = linear_least_squares(X, y);
        } catch (const std::exception&) {
            continue;
        }
        double loss = 0.0;
        bool bad = false;
        for (size_t i = 0; i < betas.size(); ++i) {
            double model = p[0] + p[1] * betas[i] + p[2] * betas[i] * betas[i];
            if (model <= 0) {
                bad = true;
                break;
            }
            double d = std::log(taus[i]) - (b * betas[i] + std::log(model));
            loss += d * d;
        }
        if (bad) continue;
        if (loss < best.log_loss) {
            best.log_loss = loss;
            best.exponent = b;
            best.C = p[0];
            best.r = p[1] / p[0];
            best.s = p[2] / p[0];
        }
    }
    if (!std::isfinite(best.log_loss)) throw std::runtime_error("fit_large_limit: no admissible fit");
    return best;
}

// Cubic-code suite point; decode cadence follows the fixed-interval protocol
// with dt = interval_scale * e^{4 beta}.
struct CubicPointResult {
    int L = 0;
    double beta = 0.0;
    MeanStderr tau;
    double censored_fraction = 0.0;
    double mean_events = 0.0;
};

inline CubicPointResult cubic_point(int L, double beta, uint64_t samples, uint64_t seed, int threads,
                                    double interval_scale = 1e-10, uint64_t max_events = 1ull << 33,
                                    std::vector<ExperimentRecord>* records = nullptr) {
    StabilizerCode code = build_cubic_code(L);
    SuiteConfig cfg;
    cfg.code_id = "cubic";
    cfg.L = L;
    cfg.beta = beta;
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.seed_salt = 0xcbull;
    cfg.threads = threads;
    cfg.max_events = max_events;
    cfg.cadence = DecodeCadence::fixed(interval_scale * std::exp(4.0 * beta));
    auto run = run_coherence_suite(code, cfg, "cubic");

    CubicPointResult out;
    out.L = L;
    out.beta = beta;
    std::vector<double> taus;
    size_t censored = 0;
    double ev = 0;
    for (const auto& tr : run.trajectories) {
        ev += double(tr.n_events);
        if (tr.reason != StopReason::DecoderFailure) {
            ++censored;
            continue;
        }
        taus.push_back(tr.t_end);
    }
    out.censored_fraction = double(censored) / double(samples);
    out.tau = mean_stderr(taus);
    out.mean_events = ev / double(samples);
    if (records)
        for (auto& r : run.records) records->push_back(r);
    return out;
}

// Time-averaged equilibrium anyon statistics after a burn-in window.
struct EquilibriumStats {
    double mean_violated = 0.0;  // time-averaged violated-check count
    double mean_pairs = 0.0;     // per sector average, half the violated count
};

inline EquilibriumStats equilibrium_anyons(const StabilizerCode& code, double beta, double t_burn,
                                           double t_measure, uint64_t seed) {
    EventTables tables = build_event_tables(code, EventSet::all());
    KmcParams prm;
    prm.beta = beta;
    prm.track_pairs = false;
    SyndromeState st(code, tables, prm);
    Rng rng(seed);
    // burn-in
    while (st.time() < t_burn) st.step(rng);
    double t0 = st.time();
    double acc = 0.0;
    double prev = st.time();
    size_t cur = st.num_violated();
    while (st.time() < t0 + t_measure) {
        auto ev = st.step(rng);
        (void)ev;
        acc += double(cur) * (st.time() - prev);
        prev = st.time();
        cur = st.num_violated();
    }
    EquilibriumStats out;
    out.mean_violated = acc / (prev - t0);
    out.mean_pairs = out.mean_violated / 4.0;  // two sectors, two anyons per pair
    return out;
}

}  // namespace qmem
