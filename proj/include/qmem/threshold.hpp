#pragma once

// Decoder threshold scans under an i.i.d. single-qubit bit-flip channel,
// with the crossing estimated from pairwise intersections of per-size linear
// fits of the failure rate.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qmem/decoder.hpp"
#include "qmem/fit.hpp"
#include "qmem/parallel.hpp"
#include "qmem/rng.hpp"
#include "qmem/stats.hpp"

namespace qmem {

struct ThresholdRow {
    std::string code;
    int L = 0;
    double p = 0.0;
    uint64_t samples = 0;
    uint64_t failures = 0;
    double rate = 0.0;
    double stderr_ = 0.0;
};

struct ThresholdResult {
    std::vector<ThresholdRow> rows;
    double crossing = std::numeric_limits<double>::quiet_NaN();
    double crossing_spread = 0.0;
    bool wide_interval = false;  // insufficient statistics for a crossing
};

struct ThresholdConfig {
    std::vector<int> sizes;
    std::vector<double> ps;
    uint64_t samples = 2000;
    uint64_t seed = 1;
    int threads = 1;
    Pauli error_kind = Pauli::X;
};

// One Monte Carlo failure estimate for a prepared code at error rate p.
inline ThresholdRow threshold_point(const StabilizerCode& code, double p, uint64_t samples, uint64_t seed,
                                    int threads, Pauli kind) {
    struct Ctx {
        ClusterDecoder dec;
        std::vector<uint32_t> count_stamp;
        std::vector<uint8_t> parity;
        std::vector<int32_t> touched;
        uint32_t gen = 0;
        explicit Ctx(const StabilizerCode& c) : dec(c), count_stamp(c.num_checks(), 0), parity(c.num_checks(), 0) {}
    };

    // Class masks for accumulating the error's logical bits.
    std::vector<uint32_t> cmask(code.n, 0);
    for (size_t q = 0; q < code.n; ++q)
        for (size_t j = 0; j < code.num_logical_generators(); ++j)
            if (check_anticommutes_single(code.logical_generator(j), q, kind)) cmask[q] |= 1u << j;

    const auto& rows = code.checks.rows();
    std::vector<uint8_t> fail(samples, 0);
    parallel_samples_ctx(
        samples, threads, [&]() { return std::make_shared<Ctx>(code); },
        [&](std::shared_ptr<Ctx>& ctx, uint64_t i) {
            Rng rng(mix_seed(seed, i, 0x7123ull + uint64_t(p * 1e9)));
            ++ctx->gen;
            ctx->touched.clear();
            uint32_t err_bits = 0;
            // geometric skipping over qubits
            double lq = std::log1p(-p);
            size_t q = 0;
            if (p > 0) {
                for (;;) {
                    double u = rng.uniform_pos();
                    size_t skip = size_t(std::floor(std::log(u) / lq));
                    q += skip;
                    if (q >= code.n) break;
                    err_bits ^= cmask[q];
                    for (int32_t c : code.qubit_to_checks[q]) {
                        if (!check_anticommutes_single(rows[size_t(c)], q, kind)) continue;
                        if (ctx->count_stamp[size_t(c)] != ctx->gen) {
                            ctx->count_stamp[size_t(c)] = ctx->gen;
                            ctx->parity[size_t(c)] = 0;
                            ctx->touched.push_back(c);
                        }
                        ctx->parity[size_t(c)] ^= 1;
                    }
                    ++q;
                }
            }
            std::vector<int32_t> violated;
            for (int32_t c : ctx->touched)
                if (ctx->parity[size_t(c)]) violated.push_back(c);
            std::sort(violated.begin(), violated.end());
            auto corr = ctx->dec.decode_sparse(violated);
            fail[i] = ((corr.class_bits ^ err_bits) != 0) ? 1 : 0;
        });

    ThresholdRow row;
    row.code = code.name;
    row.L = code.dim > 0 ? code.period[0] / 2 : 0;
    row.p = p;
    row.samples = samples;
    for (uint8_t f : fail) row.failures += f;
    row.rate = double(row.failures) / double(samples);
    row.stderr_ = binomial_stderr(row.rate, samples);
    return row;
}

inline ThresholdResult threshold_scan(const std::function<StabilizerCode(int)>& build, const ThresholdConfig& cfg) {
    ThresholdResult out;
    std::vector<std::vector<double>> rates(cfg.sizes.size());
    for (size_t li = 0; li < cfg.sizes.size(); ++li) {
        StabilizerCode code = build(cfg.sizes[li]);
        for (double p : cfg.ps) {
            auto row = threshold_point(code, p, cfg.samples, cfg.seed, cfg.threads, cfg.error_kind);
            rates[li].push_back(row.rate);
            out.rows.push_back(row);
        }
    }

    // Crossing: pairwise intersections of linear fits rate(p) per size.
    std::vector<double> crossings;
    for (size_t a = 0; a < cfg.sizes.size(); ++a)
        for (size_t b = a + 1; b < cfg.sizes.size(); ++b) {
            try {
                auto fa = fit("linear", cfg.ps, rates[a], 17, 0);
                auto fb = fit("linear", cfg.ps, rates[b], 17, 0);
                double den = fa.param(0) - fb.param(0);
                if (std::abs(den) < 1e-12) continue;
                double px = (fb.param(1) - fa.param(1)) / den;
                if (std::isfinite(px)) crossings.push_back(px);
            } catch (const std::exception&) {
            }
        }
    if (crossings.empty()) {
        out.wide_interval = true;
        return out;
    }
    double s = 0, mn = crossings[0], mx = crossings[0];
    for (double c : crossings) {
        s += c;
        mn = std::min(mn, c);
        mx = std::max(mx, c);
    }
    out.crossing = s / double(crossings.size());
    out.crossing_spread = mx - mn;
    out.wide_interval = out.crossing_spread > 0.5 * out.crossing;
    return out;
}

}  // namespace qmem
