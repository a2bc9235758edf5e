// qmem: thermal quantum-memory simulation lab.
//
// Subcommands mirror the experiment drivers; every run takes an optional
// key-value config file plus per-key flag overrides, writes a results CSV
// and a manifest, and can be replayed bit-exactly from that manifest.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmem/analytics.hpp"
#include "qmem/catalog.hpp"
#include "qmem/experiments.hpp"
#include "qmem/io.hpp"
#include "qmem/spin_model.hpp"
#include "qmem/threshold.hpp"
#include "qmem/verify.hpp"

using namespace qmem;

namespace {

struct KeySpec {
    std::string name;
    std::string dflt;
    std::string help;
    bool is_flag = false;
};

struct PlotSeries {
    std::string figure, series;
    double x, y;
};

std::string resolve_out(const std::string& out) {
    if (out.empty() || out.front() == '/') return out;
    const char* dir = std::getenv("QMEM_OUT_DIR");
    if (!dir || !*dir) return out;
    return std::string(dir) + "/" + out;
}

void write_plot_csv(const std::string& base, const std::vector<PlotSeries>& pts) {
    std::map<std::string, Table> figs;
    for (const auto& p : pts) {
        auto& t = figs[p.figure];
        if (t.header.empty()) t.header = {"figure", "series", "x", "y"};
        t.add_row({p.figure, p.series, fmt_g17(p.x), fmt_g17(p.y)});
    }
    for (auto& [fig, table] : figs) write_table_csv(resolve_out(base + "." + fig + ".csv"), table);
}

DecodeCadence cadence_from(const KeyValueConfig& cfg) {
    std::string mode = cfg.get_string("cadence", "every-event");
    if (mode == "every-event") return DecodeCadence::every_event();
    if (mode == "none") return DecodeCadence::none();
    if (mode == "fixed-interval") return DecodeCadence::fixed(cfg.get_double("interval", 1.0));
    if (mode == "geometric")
        return DecodeCadence::geometric(cfg.get_double("t0", 0.25), cfg.get_double("factor", 1.05));
    throw ConfigError("unknown cadence: " + mode);
}

EnergyModel model_from(const KeyValueConfig& cfg) {
    std::string kind = cfg.get_string("model", "stabilizer");
    double delta = cfg.get_double("delta", 1.0);
    double V = cfg.get_double("V", 0.0);
    double alpha = cfg.get_double("alpha", 0.0);
    PairPotential pot =
        cfg.get_string("potential", "power") == "log" ? PairPotential::Log : PairPotential::PowerLaw;
    if (kind == "stabilizer") return EnergyModel::stabilizer(delta);
    if (kind == "anyon-anyon") return EnergyModel::anyon_anyon(delta, V, alpha, pot);
    if (kind == "anyon-vacuum") return EnergyModel::anyon_vacuum(delta, V, alpha);
    throw ConfigError("unknown energy model: " + kind);
}

int run_coherence(const KeyValueConfig& cfg) {
    std::string code_id = cfg.get_string("code", "toric2d");
    auto betas = cfg.get_doubles("betas", {cfg.get_double("beta", 4.0)});
    int L = cfg.get_int("L", 16);
    StabilizerCode code = build_code(code_id, L);

    std::vector<ExperimentRecord> records;
    std::vector<PlotSeries> plots;
    for (double beta : betas) {
        SuiteConfig sc;
        sc.code_id = code_id;
        sc.L = L;
        sc.beta = beta;
        sc.model = model_from(cfg);
        sc.events = parse_event_set(cfg.get_string("events", "XYZ"));
        sc.cadence = cadence_from(cfg);
        sc.t_max = cfg.get_double("t-max", std::numeric_limits<double>::infinity());
        sc.max_events = cfg.get_u64("max-events", 1ull << 40);
        sc.samples = cfg.get_u64("samples", 1000);
        sc.seed = cfg.get_u64("seed", 1);
        sc.threads = cfg.get_int("threads", 1);
        auto run = run_coherence_suite(code, sc, "coherence");
        auto est = estimate_coherence(run.trajectories, cfg.get_double("method2-threshold", 0.99));
        std::printf("beta=%g tau=%.6g +- %.3g censored=%.3g method2=%.6g usable=%d\n", beta, est.tau.mean,
                    est.tau.stderr_, est.censored_fraction, est.tau_method2, int(est.usable));
        for (auto& r : run.records) records.push_back(std::move(r));
        plots.push_back({"tau_vs_beta", "L" + std::to_string(L), beta, est.tau.mean});
    }
    std::string out = resolve_out(cfg.get_string("out", "coherence.csv"));
    write_records_csv(out, records);
    if (cfg.get_bool("plot-data", false)) write_plot_csv(out, plots);
    return 0;
}

int run_pair_survival(const KeyValueConfig& cfg) {
    auto sizes = cfg.get_ints("sizes", {cfg.get_int("L", 32)});
    auto betas = cfg.get_doubles("betas", {cfg.get_double("beta", 3.0)});
    std::vector<ExperimentRecord> records;
    std::vector<PlotSeries> plots;
    Table summary;
    summary.header = {"L", "beta", "samples", "pi", "stderr", "mean_time_success"};
    for (double beta : betas)
        for (int L : sizes) {
            PairSurvivalConfig pc;
            pc.L = L;
            pc.beta = beta;
            pc.samples = cfg.get_u64("samples", 10000);
            pc.seed = cfg.get_u64("seed", 1);
            pc.threads = cfg.get_int("threads", 1);
            auto res = pair_survival(pc);
            std::printf("L=%d beta=%g pi=%.5g +- %.3g 1/pi=%.5g\n", L, beta, res.pi, res.pi_stderr, 1.0 / res.pi);
            summary.add_row({std::to_string(L), fmt_g17(beta), std::to_string(pc.samples), fmt_g17(res.pi),
                             fmt_g17(res.pi_stderr), fmt_g17(res.time_to_separation.mean)});
            for (auto& r : res.records) records.push_back(std::move(r));
            plots.push_back({"fig17_inv_pi_vs_L", "beta" + fmt_g17(beta), std::log(double(L) / 2.0), 1.0 / res.pi});
        }
    std::string out = resolve_out(cfg.get_string("out", "pair_survival.csv"));
    write_records_csv(out, records);
    write_table_csv(out + ".summary.csv", summary);
    if (cfg.get_bool("plot-data", false)) write_plot_csv(out, plots);
    return 0;
}

int run_small_limit(const KeyValueConfig& cfg) {
    auto sizes = cfg.get_ints("sizes", {16, 24, 32, 40, 48});
    auto betas = cfg.get_doubles("betas", {12, 13, 14, 15, 16, 17, 18});
    uint64_t samples = cfg.get_u64("samples", 1000);
    uint64_t pi_samples = cfg.get_u64("pi-samples", 10000);
    uint64_t seed = cfg.get_u64("seed", 1);
    int threads = cfg.get_int("threads", 1);

    std::vector<ExperimentRecord> records;
    std::vector<PlotSeries> plots;
    Table summary;
    summary.header = {"L",     "beta",  "tau",   "tau_se",   "tau_c", "tau_c_se", "tau_m",
                      "tau_m_se", "pi", "pi_se", "censored", "regime_ok"};

    std::vector<std::vector<double>> Xc;  // design for ln(tau_c * Pi)
    std::vector<double> yc;
    std::vector<double> bl2, tm;  // tau_m = c * beta L^2

    for (double beta : betas)
        for (int L : sizes) {
            auto point = small_limit_point(L, beta, samples, seed, threads, &records);
            PairSurvivalConfig pc;
            pc.L = L;
            pc.beta = beta;
            pc.samples = pi_samples;
            pc.seed = seed ^ 0x9999;
            pc.threads = threads;
            auto pi = pair_survival(pc);
            std::printf("L=%d beta=%g tau=%.5g tau_c=%.5g tau_m=%.5g pi=%.4g%s\n", L, beta, point.tau.mean,
                        point.tau_c.mean, point.tau_m.mean, pi.pi, point.regime_ok ? "" : "  [regime warning]");
            summary.add_row({std::to_string(L), fmt_g17(beta), fmt_g17(point.tau.mean), fmt_g17(point.tau.stderr_),
                             fmt_g17(point.tau_c.mean), fmt_g17(point.tau_c.stderr_), fmt_g17(point.tau_m.mean),
                             fmt_g17(point.tau_m.stderr_), fmt_g17(pi.pi), fmt_g17(pi.pi_stderr),
                             fmt_g17(point.censored_fraction), point.regime_ok ? "1" : "0"});
            if (point.tau_c.mean > 0 && pi.pi > 0) {
                Xc.push_back({1.0, beta, std::log(double(L))});
                yc.push_back(std::log(point.tau_c.mean * pi.pi));
                plots.push_back({"fig5_tauc_pi", "beta" + fmt_g17(beta), std::log(double(L)),
                                 std::log(point.tau_c.mean * pi.pi)});
            }
            bl2.push_back(beta * double(L) * double(L));
            tm.push_back(point.tau_m.mean);
            plots.push_back({"fig18_taum_over_L2", "L" + std::to_string(L), beta,
                             point.tau_m.mean / (double(L) * double(L))});
        }

    auto pc = linear_least_squares(Xc, yc);
    double num = 0, den = 0;
    for (size_t i = 0; i < bl2.size(); ++i) {
        num += bl2[i] * tm[i];
        den += bl2[i] * bl2[i];
    }
    double taum_coeff = num / den;
    std::printf("fit: ln(tau_c * Pi) = %.4g + %.4g * beta + %.4g * ln L\n", pc[0], pc[1], pc[2]);
    std::printf("fit: tau_c prefactor exp(c) = %.4g (beta exponent %.4g, L exponent %.4g)\n", std::exp(pc[0]), pc[1],
                pc[2]);
    std::printf("fit: tau_m = %.5g * beta L^2\n", taum_coeff);

    std::string out = resolve_out(cfg.get_string("out", "small_limit.csv"));
    write_records_csv(out, records);
    write_table_csv(out + ".summary.csv", summary);
    if (cfg.get_bool("plot-data", false)) write_plot_csv(out, plots);
    return 0;
}

int run_large_limit(const KeyValueConfig& cfg) {
    auto sizes = cfg.get_ints("sizes", {100, 140, 200});
    auto betas = cfg.get_doubles("betas", {2, 2.5, 3, 3.5, 4, 4.5, 5});
    uint64_t samples = cfg.get_u64("samples", 1000);
    uint64_t seed = cfg.get_u64("seed", 1);
    int threads = cfg.get_int("threads", 1);
    DecodeCadence cad = DecodeCadence::geometric(cfg.get_double("t0", 0.25), cfg.get_double("factor", 1.05));

    std::vector<ExperimentRecord> records;
    std::vector<PlotSeries> plots;
    Table summary;
    summary.header = {"L", "beta", "tau", "tau_se", "censored", "density", "mean_sep", "max_sep"};

    std::map<int, std::vector<std::pair<double, double>>> by_L;    // beta -> tau
    std::map<double, std::vector<std::pair<int, double>>> by_beta; // L -> tau
    std::vector<double> sep_betas, sep_vals;

    for (int L : sizes)
        for (double beta : betas) {
            auto pt = large_limit_point(L, beta, samples, seed, threads, cad, &records);
            std::printf("L=%d beta=%g tau=%.5g +- %.3g density=%.4g mean_sep=%.4g max_sep=%.4g\n", L, beta,
                        pt.tau.mean, pt.tau.stderr_, pt.density_at_failure, pt.mean_sep.mean, pt.max_sep.mean);
            summary.add_row({std::to_string(L), fmt_g17(beta), fmt_g17(pt.tau.mean), fmt_g17(pt.tau.stderr_),
                             fmt_g17(pt.censored_fraction), fmt_g17(pt.density_at_failure), fmt_g17(pt.mean_sep.mean),
                             fmt_g17(pt.max_sep.mean)});
            by_L[L].push_back({beta, pt.tau.mean});
            by_beta[beta].push_back({L, pt.tau.mean});
            if (L == sizes.back() && pt.mean_sep.mean > 0) {
                sep_betas.push_back(beta);
                sep_vals.push_back(pt.mean_sep.mean);
            }
            plots.push_back({"fig6_tau_vs_beta", "L" + std::to_string(L), beta, pt.tau.mean});
            plots.push_back({"fig20_tau_vs_L", "beta" + fmt_g17(beta), std::log(double(L)), std::log(pt.tau.mean)});
            plots.push_back({"fig19_sep_vs_beta", "L" + std::to_string(L), beta, pt.mean_sep.mean});
        }

    double exp_sum = 0;
    for (auto& [L, pts] : by_L) {
        std::vector<double> bs, ts;
        for (auto [b, t] : pts) {
            bs.push_back(b);
            ts.push_back(t);
        }
        auto f = fit_large_limit(bs, ts);
        std::printf("L=%d fit: tau = %.4g e^{%.4g beta} (1 + %.4g beta + %.4g beta^2)\n", L, f.C, f.exponent, f.r,
                    f.s);
        exp_sum += f.exponent;
    }
    std::printf("mean beta exponent = %.4g\n", exp_sum / double(by_L.size()));

    for (auto& [beta, pts] : by_beta) {
        std::vector<double> ls, ts;
        for (auto [L, t] : pts) {
            ls.push_back(std::log(double(L)));
            ts.push_back(std::log(t));
        }
        auto g = fit("linear", ls, ts, 17, 0);
        std::printf("beta=%g d log tau / d log L = %.4g\n", beta, g.param(0));
    }

    if (sep_betas.size() >= 2) {
        std::vector<double> lnsep;
        for (double v : sep_vals) lnsep.push_back(std::log(v));
        auto g = fit("linear", sep_betas, lnsep, 17, 0);
        std::printf("mean pair separation slope vs beta (log scale) = %.4g\n", g.param(0));
    }

    std::string out = resolve_out(cfg.get_string("out", "large_limit.csv"));
    write_records_csv(out, records);
    write_table_csv(out + ".summary.csv", summary);
    if (cfg.get_bool("plot-data", false)) write_plot_csv(out, plots);
    return 0;
}

int run_cubic(const KeyValueConfig& cfg) {
    auto sizes = cfg.get_ints("sizes", {5, 7, 9});
    auto betas = cfg.get_doubles("betas", {9.2, 10.0, 10.8});
    uint64_t samples = cfg.get_u64("samples", 200);
    uint64_t seed = cfg.get_u64("seed", 1);
    int threads = cfg.get_int("threads", 1);
    double interval_scale = cfg.get_double("interval-scale", 1e-10);
    uint64_t max_events = cfg.get_u64("max-events", 1ull << 33);

    std::vector<ExperimentRecord> records;
    std::vector<PlotSeries> plots;
    Table summary;
    summary.header = {"L", "beta", "tau", "tau_se", "censored", "mean_events"};

    std::map<double, std::vector<std::pair<int, double>>> by_beta;
    for (double beta : betas)
        for (int L : sizes) {
            auto pt = cubic_point(L, beta, samples, seed, threads, interval_scale, max_events, &records);
            std::printf("L=%d beta=%g tau=%.5g +- %.3g censored=%.3g events/sample=%.3g\n", L, beta, pt.tau.mean,
                        pt.tau.stderr_, pt.censored_fraction, pt.mean_events);
            summary.add_row({std::to_string(L), fmt_g17(beta), fmt_g17(pt.tau.mean), fmt_g17(pt.tau.stderr_),
                             fmt_g17(pt.censored_fraction), fmt_g17(pt.mean_events)});
            by_beta[beta].push_back({L, pt.tau.mean});
            plots.push_back({"fig9_tau_vs_L", "beta" + fmt_g17(beta), std::log(double(L)), std::log(pt.tau.mean)});
        }

    std::vector<double> bs, exps;
    for (auto& [beta, pts] : by_beta) {
        std::vector<double> ls, ts;
        for (auto [L, t] : pts) {
            ls.push_back(double(L));
            ts.push_back(t);
        }
        auto f = fit("power-law-in-L", ls, ts);
        std::printf("beta=%g L-exponent=%.4g\n", beta, f.param(0));
        bs.push_back(beta);
        exps.push_back(f.param(0));
        plots.push_back({"fig9_exponents", "exponent", beta, f.param(0)});
    }
    if (bs.size() >= 2) {
        auto g = fit("linear", bs, exps, 17, 0);
        std::printf("exponent(beta) fit: %.4g beta %+.4g\n", g.param(0), g.param(1));
    }

    // optimal-size curve when the grid brackets a maximum
    std::vector<double> ob, otau, olopt;
    for (auto& [beta, pts] : by_beta) {
        size_t best = 0;
        for (size_t i = 1; i < pts.size(); ++i)
            if (pts[i].second > pts[best].second) best = i;
        if (best > 0 && best + 1 < pts.size()) {
            ob.push_back(beta);
            otau.push_back(pts[best].second);
            olopt.push_back(double(pts[best].first));
            plots.push_back({"fig10_tau_opt", "tau_opt", beta, pts[best].second});
            plots.push_back({"fig10_L_opt", "L_opt", beta, double(pts[best].first)});
        }
    }
    if (ob.size() >= 3) {
        auto fq = fit("psc-quadratic", ob, otau, 17, 0);
        std::printf("ln tau_opt fit: %.4g beta^2 %+.4g beta %+.4g\n", fq.param(0), fq.param(1), fq.param(2));
        std::vector<double> lnl;
        for (double v : olopt) lnl.push_back(std::log(v));
        auto fl = fit("linear", ob, lnl, 17, 0);
        std::printf("ln L_opt fit: %.4g beta %+.4g\n", fl.param(0), fl.param(1));
    } else {
        std::printf("optimal-size curve not resolved by this grid\n");
    }

    std::string out = resolve_out(cfg.get_string("out", "cubic.csv"));
    write_records_csv(out, records);
    write_table_csv(out + ".summary.csv", summary);
    if (cfg.get_bool("plot-data", false)) write_plot_csv(out, plots);
    return 0;
}

int run_threshold(const KeyValueConfig& cfg) {
    ThresholdConfig tc;
    std::string code_id = cfg.get_string("code", "toric2d");
    tc.sizes = cfg.get_ints("sizes", {8, 16, 32});
    tc.ps = cfg.get_doubles("p", {0.06, 0.07, 0.08, 0.09, 0.10});
    tc.samples = cfg.get_u64("samples", 2000);
    tc.seed = cfg.get_u64("seed", 1);
    tc.threads = cfg.get_int("threads", 1);
    std::string kind = cfg.get_string("error-kind", "X");
    tc.error_kind = kind == "Z" ? Pauli::Z : Pauli::X;

    auto res = threshold_scan([&](int L) { return build_code(code_id, L); }, tc);
    Table t;
    t.header = {"code", "L", "p", "samples", "failures", "rate", "stderr"};
    std::vector<PlotSeries> plots;
    for (const auto& row : res.rows) {
        t.add_row({row.code, std::to_string(row.L), fmt_g17(row.p), std::to_string(row.samples),
                   std::to_string(row.failures), fmt_g17(row.rate), fmt_g17(row.stderr_)});
        plots.push_back({"fig15_threshold", "L" + std::to_string(row.L), row.p, row.rate});
    }
    std::string out = resolve_out(cfg.get_string("out", "threshold.csv"));
    write_table_csv(out, t);
    std::printf("crossing = %.5g (spread %.2g)%s\n", res.crossing, res.crossing_spread,
                res.wide_interval ? "  [wide interval: insufficient samples]" : "");
    if (cfg.get_bool("plot-data", false)) write_plot_csv(out, plots);
    return 0;
}

int run_barrier(const KeyValueConfig& cfg) {
    std::string code_id = cfg.get_string("code", "toric2d");
    int L = cfg.get_int("L", 3);
    StabilizerCode code = build_code(code_id, L);
    std::string sector = cfg.get_string("sector", "X");
    size_t pair = size_t(cfg.get_int("pair", 0));
    if (pair >= code.logical_pairs.size()) throw ConfigError("barrier: pair index out of range");
    const PauliOperator& target =
        sector == "X" ? code.logical_pairs[pair].first : code.logical_pairs[pair].second;
    double eb = energy_barrier(code, sector == "X" ? Pauli::X : Pauli::Z, logical_class_bits(code, target),
                               cfg.get_u64("max-states", 2000000));
    std::printf("%g\n", eb);
    return 0;
}

int run_curie_weiss(const KeyValueConfig& cfg) {
    auto res = curie_weiss(cfg.get_double("n", 100), cfg.get_double("delta", 1.0), cfg.get_double("beta", 2.0),
                           size_t(cfg.get_u64("grid", 1001)));
    std::printf("F''(1/2) = %.6g  double_well = %d  barrier = %.6g  x_min = %.6g\n", res.f_second_derivative_half,
                int(res.double_well), res.barrier, res.x_minimum);
    if (cfg.has("out")) {
        Table t;
        t.header = {"x", "free_energy"};
        for (size_t i = 0; i < res.x.size(); ++i) t.add_row({fmt_g17(res.x[i]), fmt_g17(res.free_energy[i])});
        write_table_csv(resolve_out(cfg.get_string("out", "curie_weiss.csv")), t);
    }
    return 0;
}

int run_peierls(const KeyValueConfig& cfg) {
    double beta = cfg.get_double("beta", 2.0);
    auto b = peierls_bound(beta);
    std::printf("N_minus/V <= %.9g   <|sigma|> >= %.9g\n", b.n_minus_fraction, b.magnetization);
    if (cfg.get_bool("sample-check", false)) {
        int L = cfg.get_int("L", 32);
        int sweeps = cfg.get_int("sweeps", 100000);
        auto model = build_ising_2d(L);
        std::vector<int8_t> spins(size_t(model.V), 1);
        Rng rng(cfg.get_u64("seed", 1));
        int burn = sweeps / 10;
        for (int s = 0; s < burn; ++s) metropolis_sweep(model, spins, beta, rng);
        double acc = 0;
        int nm = 0;
        for (int s = 0; s < sweeps; ++s) {
            metropolis_sweep(model, spins, beta, rng);
            if (s % 10 == 0) {
                acc += std::abs(model.magnetization(spins));
                ++nm;
            }
        }
        double mag = acc / nm;
        bool ok = mag >= b.magnetization;
        std::printf("sampled <|sigma|> = %.6g on L=%d (%d sweeps): %s\n", mag, L, sweeps,
                    ok ? "respects bound" : "VIOLATES bound");
        return ok ? 0 : 3;
    }
    return 0;
}

int run_fit(const KeyValueConfig& cfg) {
    std::string input = cfg.get_string("input", "");
    if (input.empty()) throw ConfigError("fit: input CSV required");
    std::string xcol = cfg.get_string("xcol", "x"), ycol = cfg.get_string("ycol", "y");
    std::ifstream in(input);
    if (!in) throw ConfigError("fit: cannot open " + input);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("fit: empty input");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) header.push_back(trim(f));
    }
    int xi = -1, yi = -1;
    for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == xcol) xi = int(i);
        if (header[i] == ycol) yi = int(i);
    }
    if (xi < 0 || yi < 0) throw ConfigError("fit: columns not found");
    std::vector<double> xs, ys;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::stringstream ss(line);
        std::string f;
        std::vector<std::string> row;
        while (std::getline(ss, f, ',')) row.push_back(f);
        xs.push_back(std::stod(row[size_t(xi)]));
        ys.push_back(std::stod(row[size_t(yi)]));
    }
    auto f = fit(cfg.get_string("model", "linear"), xs, ys, cfg.get_u64("bootstrap-seed", 17),
                 cfg.get_int("bootstrap", 200));
    std::printf("model=%s points=%zu residual=%.6g\n", f.model.c_str(), xs.size(), f.residual_norm);
    for (size_t i = 0; i < f.params.size(); ++i) {
        if (i < f.ci.size() && std::isfinite(f.ci[i].first))
            std::printf("param[%zu] = %.10g  ci95 = [%.10g, %.10g]\n", i, f.params[i], f.ci[i].first, f.ci[i].second);
        else
            std::printf("param[%zu] = %.10g\n", i, f.params[i]);
    }
    return 0;
}

int run_verify_code(const KeyValueConfig& cfg) {
    StabilizerCode code = build_code(cfg.get_string("code", "toric2d"), cfg.get_int("L", 8));
    auto rep = verify_code(code);
    std::fputs(rep.text().c_str(), stdout);
    if (cfg.has("dump")) {
        std::ofstream out(resolve_out(cfg.get_string("dump", "")));
        out << dump_code_json(code).dump(1) << '\n';
    }
    if (cfg.get_u64("distance-max-n", 0) >= code.n) {
        std::printf("  distance (brute force): %zu\n", code_distance_bruteforce(code));
    }
    return rep.all_ok() ? 0 : 3;
}

struct SubSpec {
    std::string name;
    std::string help;
    std::vector<KeySpec> keys;
    int (*run)(const KeyValueConfig&);
};

const std::vector<KeySpec> kCommon = {
    {"samples", "", "Monte Carlo samples"},
    {"seed", "1", "master seed"},
    {"threads", "1", "worker threads"},
    {"out", "", "results CSV path"},
    {"plot-data", "", "emit per-figure x/y series", true},
};

std::vector<SubSpec> subcommands() {
    std::vector<SubSpec> subs;
    subs.push_back({"coherence",
                    "coherence-time estimation for one code",
                    {{"code", "toric2d", "4q | toric2d | cubic | toric4d"},
                     {"L", "16", "linear size"},
                     {"beta", "4", "inverse temperature"},
                     {"betas", "", "list of inverse temperatures"},
                     {"delta", "1", "gap multiplier"},
                     {"model", "stabilizer", "stabilizer | anyon-anyon | anyon-vacuum"},
                     {"V", "0", "interaction strength"},
                     {"alpha", "0", "power-law exponent"},
                     {"potential", "power", "power | log"},
                     {"events", "XYZ", "XYZ | XZ | X | Z"},
                     {"cadence", "every-event", "every-event | fixed-interval | geometric | none"},
                     {"interval", "1", "fixed-interval decode spacing"},
                     {"t0", "0.25", "geometric cadence start"},
                     {"factor", "1.05", "geometric cadence ratio"},
                     {"t-max", "inf", "censoring horizon"},
                     {"max-events", "", "event budget per sample"},
                     {"method2-threshold", "0.99", "success-rate threshold for method 2"}},
                    run_coherence});
    subs.push_back({"pair-survival",
                    "isolated-pair separation probability (Pi)",
                    {{"L", "32", "linear size"},
                     {"sizes", "", "list of sizes"},
                     {"beta", "3", "inverse temperature"},
                     {"betas", "", "list of inverse temperatures"}},
                    run_pair_survival});
    subs.push_back({"small-limit",
                    "small-size toric suite: tau, tau_c, tau_m, Pi",
                    {{"sizes", "16,24,32,40,48", "lattice sizes"},
                     {"betas", "12,13,14,15,16,17,18", "inverse temperatures"},
                     {"pi-samples", "10000", "samples for the Pi estimate"},
                     {"events", "XYZ", "event set"}},
                    run_small_limit});
    subs.push_back({"large-limit",
                    "large-size toric suite",
                    {{"sizes", "100,140,200", "lattice sizes"},
                     {"betas", "2,2.5,3,3.5,4,4.5,5", "inverse temperatures"},
                     {"events", "XYZ", "event set"},
                     {"t0", "0.25", "geometric cadence start"},
                     {"factor", "1.05", "geometric cadence ratio"}},
                    run_large_limit});
    subs.push_back({"cubic",
                    "cubic-code partial self-correction suite",
                    {{"sizes", "5,7,9", "lattice sizes (odd, no factor 2/15/63)"},
                     {"betas", "9.2,10,10.8", "inverse temperatures"},
                     {"interval-scale", "1e-10", "decode interval prefactor (dt = scale * e^{4 beta})"},
                     {"max-events", "", "event budget per sample"}},
                    run_cubic});
    subs.push_back({"threshold",
                    "decoder threshold scan under iid bit-flip noise",
                    {{"code", "toric2d", "code family"},
                     {"sizes", "8,16,32", "lattice sizes"},
                     {"p", "0.06,0.07,0.08,0.09,0.10", "error rates (list or a:b:step)"},
                     {"error-kind", "X", "X | Z"}},
                    run_threshold});
    subs.push_back({"barrier",
                    "exact energy barrier by bottleneck search",
                    {{"code", "toric2d", "code id"},
                     {"L", "3", "linear size"},
                     {"sector", "X", "X | Z"},
                     {"pair", "0", "logical pair index"},
                     {"max-states", "2000000", "search state cap"}},
                    run_barrier});
    subs.push_back({"curie-weiss",
                    "Curie-Weiss free-energy profile",
                    {{"n", "100", "spin count"},
                     {"delta", "1", "coupling"},
                     {"beta", "2", "inverse temperature"},
                     {"grid", "1001", "grid points"}},
                    run_curie_weiss});
    subs.push_back({"peierls",
                    "Peierls bound for the 2D Ising model",
                    {{"beta", "2", "inverse temperature"},
                     {"sample-check", "", "run a Metropolis check against the bound", true},
                     {"L", "32", "Ising size for the sampled check"},
                     {"sweeps", "100000", "Metropolis sweeps"}},
                    run_peierls});
    subs.push_back({"fit",
                    "least-squares fit of a CSV column pair",
                    {{"model", "linear", "linear | arrhenius | power-law-in-L | psc-quadratic"},
                     {"input", "", "input CSV"},
                     {"xcol", "x", "x column name"},
                     {"ycol", "y", "y column name"},
                     {"bootstrap", "200", "bootstrap rounds"},
                     {"bootstrap-seed", "17", "bootstrap sub-seed"}},
                    run_fit});
    subs.push_back({"verify-code",
                    "build a catalog code and verify its invariants",
                    {{"code", "toric2d", "code id"},
                     {"L", "8", "linear size"},
                     {"dump", "", "write the code-definition JSON here"},
                     {"distance-max-n", "0", "run the brute-force distance when n <= this"}},
                    run_verify_code});
    return subs;
}

int dispatch(const std::string& name, const KeyValueConfig& cfg, const std::string& manifest_out) {
    auto subs = subcommands();
    for (const auto& s : subs) {
        if (s.name != name) continue;
        std::set<std::string> allowed;
        for (const auto& k : s.keys) allowed.insert(k.name);
        for (const auto& k : kCommon) allowed.insert(k.name);
        cfg.require_known(allowed);

        RunManifest man;
        man.command = name;
        man.config_hash = cfg.hash_hex();
        man.master_seed = cfg.get_u64("seed", 1);
        man.start_time = iso8601_now();
        man.host = host_descriptor();
        for (const auto& [k, v] : cfg.entries()) man.params[k] = v;

        int rc = s.run(cfg);

        man.end_time = iso8601_now();
        std::string mpath = manifest_out;
        if (mpath.empty()) {
            std::string out = cfg.get_string("out", "");
            mpath = out.empty() ? (name + ".manifest.json") : out + ".manifest.json";
        }
        man.write(resolve_out(mpath));
        return rc;
    }
    std::fprintf(stderr, "unknown subcommand: %s\n", name.c_str());
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qmem: stabilizer-code thermal memory laboratory"};
    app.require_subcommand(0, 1);

    std::string replay_path, replay_out;
    app.add_option("--replay", replay_path, "re-run from a manifest (bit-exact)");
    app.add_option("--replay-out", replay_out, "override the output path when replaying");

    struct SubState {
        CLI::App* cli = nullptr;
        std::string config_path;
        std::map<std::string, std::string> values;
        std::map<std::string, CLI::Option*> opts;
        const SubSpec* spec = nullptr;
    };
    static auto specs = subcommands();
    std::vector<SubState> states(specs.size());
    for (size_t i = 0; i < specs.size(); ++i) {
        auto& st = states[i];
        st.spec = &specs[i];
        st.cli = app.add_subcommand(specs[i].name, specs[i].help);
        st.cli->add_option("--config", st.config_path, "key-value config file");
        auto add_keys = [&](const std::vector<KeySpec>& keys) {
            for (const auto& k : keys) {
                std::string help = k.help + (k.dflt.empty() ? "" : " [default " + k.dflt + "]");
                if (k.is_flag) {
                    st.opts[k.name] = st.cli->add_flag("--" + k.name, help);
                } else {
                    st.opts[k.name] = st.cli->add_option("--" + k.name, st.values[k.name], help);
                }
            }
        };
        add_keys(specs[i].keys);
        add_keys(kCommon);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (!replay_path.empty()) {
            RunManifest man = RunManifest::load(replay_path);
            KeyValueConfig cfg;
            for (const auto& [k, v] : man.params) cfg.set(k, v);
            if (!replay_out.empty()) cfg.set("out", replay_out);
            return dispatch(man.command, cfg, replay_out.empty() ? "" : replay_out + ".manifest.json");
        }
        for (auto& st : states) {
            if (!st.cli->parsed()) continue;
            KeyValueConfig cfg;
            if (!st.config_path.empty()) cfg = KeyValueConfig::from_file(st.config_path);
            for (const auto& [key, opt] : st.opts) {
                if (opt->count() == 0) continue;
                bool flag = false;
                for (const auto& k : st.spec->keys)
                    if (k.name == key && k.is_flag) flag = true;
                for (const auto& k : kCommon)
                    if (k.name == key && k.is_flag) flag = true;
                cfg.set(key, flag ? "true" : st.values[key]);
            }
            return dispatch(st.spec->name, cfg, "");
        }
        std::fputs(app.help().c_str(), stdout);
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
