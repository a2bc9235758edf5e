#pragma once

// Analytic and search-based diagnostics: the exact energy-barrier search
// (minimax over single-qubit event sequences), the Curie-Weiss free-energy
// profile, and the Peierls bound for the 2D Ising model.

#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <stdexcept>
#include <vector>

#include "qmem/code.hpp"

namespace qmem {

// Minimum over single-qubit event sequences, of the maximum energy reached,
// to build a logical operator of the given class. Search runs over syndrome
// configurations (energy only depends on those) with a bottleneck-Dijkstra;
// states are expanded in increasing bottleneck order, so the first arrival at
// the target is optimal.
//
// `sector` selects the single-qubit event kind (X or Z); `target_bits` is the
// logical class-bit pattern that the accumulated error must reach.
inline double energy_barrier(const StabilizerCode& code, Pauli sector, uint32_t target_bits,
                             size_t max_states = 2'000'000) {
    if (sector != Pauli::X && sector != Pauli::Z) throw std::invalid_argument("energy_barrier: sector must be X or Z");
    double gap = code.mass;

    // Per-qubit toggle and class masks for the chosen kind.
    const auto& rows = code.checks.rows();
    std::vector<std::vector<int32_t>> toggles(code.n);
    std::vector<uint32_t> cmask(code.n, 0);
    for (size_t q = 0; q < code.n; ++q) {
        for (int32_t c : code.qubit_to_checks[q])
            if (check_anticommutes_single(rows[size_t(c)], q, sector)) toggles[q].push_back(c);
        for (size_t j = 0; j < code.num_logical_generators(); ++j)
            if (check_anticommutes_single(code.logical_generator(j), q, sector)) cmask[q] |= 1u << j;
    }

    using State = std::pair<std::vector<int32_t>, uint32_t>;  // sorted violated set, class bits
    std::map<State, double> best;
    using QEntry = std::pair<double, State>;
    std::priority_queue<QEntry, std::vector<QEntry>, std::greater<>> pq;

    State start{{}, 0};
    best[start] = 0.0;
    pq.push({0.0, start});
    State goal{{}, target_bits};

    while (!pq.empty()) {
        auto [b, st] = pq.top();
        pq.pop();
        auto it = best.find(st);
        if (it == best.end() || b > it->second) continue;
        if (st == goal) return b;
        if (best.size() > max_states)
            throw std::runtime_error("energy_barrier: state space exceeded " + std::to_string(max_states) +
                                     " states; search refused");
        for (size_t q = 0; q < code.n; ++q) {
            State ns = st;
            for (int32_t c : toggles[q]) {
                auto pos = std::lower_bound(ns.first.begin(), ns.first.end(), c);
                if (pos != ns.first.end() && *pos == c)
                    ns.first.erase(pos);
                else
                    ns.first.insert(pos, c);
            }
            ns.second ^= cmask[q];
            double e = gap * double(ns.first.size());
            double nb = std::max(b, e);
            auto found = best.find(ns);
            if (found == best.end() || nb < found->second) {
                best[ns] = nb;
                pq.push({nb, ns});
            }
        }
    }
    throw std::runtime_error("energy_barrier: target class unreachable");
}

struct CurieWeissResult {
    std::vector<double> x, free_energy;
    double f_second_derivative_half = 0.0;  // analytic F''(1/2)
    bool double_well = false;
    double barrier = 0.0;     // F(1/2) - F(minimum)
    double x_minimum = 0.0;   // left minimum location
};

// F(x) = E(x) - S(x)/beta with E = -Delta n (1-2x)^2 and the binomial
// entropy; endpoints use the exact S(0) = S(1) = 0 limits.
inline CurieWeissResult curie_weiss(double n, double delta, double beta, size_t grid = 1001) {
    if (n < 2) throw std::invalid_argument("curie_weiss: n must be >= 2");
    if (!(beta > 0)) throw std::invalid_argument("curie_weiss: beta must be positive");
    CurieWeissResult r;
    auto entropy = [&](double x) {
        if (x <= 0.0 || x >= 1.0) return 0.0;
        return -n * (x * std::log(x) + (1.0 - x) * std::log(1.0 - x));
    };
    auto F = [&](double x) {
        double e = -delta * n * (1.0 - 2.0 * x) * (1.0 - 2.0 * x);
        return e - entropy(x) / beta;
    };
    r.x.resize(grid);
    r.free_energy.resize(grid);
    double fmin = 1e300;
    double fh = F(0.5);
    for (size_t i = 0; i < grid; ++i) {
        double x = double(i) / double(grid - 1);
        r.x[i] = x;
        r.free_energy[i] = F(x);
        if (x <= 0.5 && r.free_energy[i] < fmin) {
            fmin = r.free_energy[i];
            r.x_minimum = x;
        }
    }
    // F''(1/2) = 4n(1/beta - 2 Delta); negative curvature at x = 1/2 means a
    // local maximum there, i.e. the double well (beta > 1/(2 Delta)).
    r.f_second_derivative_half = 4.0 * n * (1.0 / beta - 2.0 * delta);
    r.double_well = r.f_second_derivative_half < 0.0;
    r.barrier = fh - fmin;
    return r;
}

struct PeierlsBound {
    double n_minus_fraction = 0.0;   // upper bound on <N_-> / V
    double magnetization = 0.0;      // lower bound on <|sigma|>
};

// Evaluated from the summed contour series; requires 3 e^{-beta} < 1 for the
// geometric series behind it to converge.
inline PeierlsBound peierls_bound(double beta) {
    if (!(3.0 * std::exp(-beta) < 1.0))
        throw std::domain_error("peierls_bound: requires 3 e^{-beta} < 1");
    double u = std::exp(-2.0 * beta);
    PeierlsBound b;
    b.n_minus_fraction = 27.0 * std::exp(-4.0 * beta) * (2.0 - 9.0 * u) / ((1.0 - 9.0 * u) * (1.0 - 9.0 * u));
    b.magnetization = 0.5 - 2.0 * b.n_minus_fraction;
    return b;
}

}  // namespace qmem
