#pragma once

// Classical nearest-neighbor Ising model on a periodic square lattice with
// coupling 1/2 per edge (unit cost per broken bond), majority-vote readout
// and a deterministic Metropolis sampler used as a sampled baseline.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qmem/rng.hpp"

namespace qmem {

struct ClassicalSpinModel {
    int L = 0;
    int V = 0;
    double coupling = 0.5;
    std::vector<std::pair<int32_t, int32_t>> edges;
    std::vector<std::array<int32_t, 4>> neighbors;  // right, up, left, down

    double energy(const std::vector<int8_t>& spins) const {
        double e = 0.0;
        for (auto [i, j] : edges) e -= coupling * spins[size_t(i)] * spins[size_t(j)];
        return e;
    }

    double magnetization(const std::vector<int8_t>& spins) const {
        long s = 0;
        for (int8_t v : spins) s += v;
        return double(s) / double(V);
    }
};

inline ClassicalSpinModel build_ising_2d(int L) {
    if (L < 2) throw std::invalid_argument("build_ising_2d: L must be >= 2");
    ClassicalSpinModel m;
    m.L = L;
    m.V = L * L;
    auto site = [L](int x, int y) {
        x = ((x % L) + L) % L;
        y = ((y % L) + L) % L;
        return int32_t(y * L + x);
    };
    m.neighbors.resize(size_t(m.V));
    for (int y = 0; y < L; ++y)
        for (int x = 0; x < L; ++x) {
            m.edges.emplace_back(site(x, y), site(x + 1, y));
            m.edges.emplace_back(site(x, y), site(x, y + 1));
            m.neighbors[size_t(site(x, y))] = {site(x + 1, y), site(x, y + 1), site(x - 1, y), site(x, y - 1)};
        }
    return m;
}

struct MajorityReadout {
    int bit = 0;   // sign of the magnetization
    bool tie = false;
};

inline MajorityReadout majority_readout(const ClassicalSpinModel& m, const std::vector<int8_t>& spins) {
    double mag = m.magnetization(spins);
    if (mag == 0.0) return {0, true};
    return {mag > 0 ? +1 : -1, false};
}

// One Metropolis sweep (V proposed single-spin flips, sites in fixed order).
inline void metropolis_sweep(const ClassicalSpinModel& m, std::vector<int8_t>& spins, double beta, Rng& rng) {
    for (int i = 0; i < m.V; ++i) {
        const auto& nb = m.neighbors[size_t(i)];
        int sum = spins[size_t(nb[0])] + spins[size_t(nb[1])] + spins[size_t(nb[2])] + spins[size_t(nb[3])];
        double dE = 2.0 * m.coupling * spins[size_t(i)] * sum;
        if (dE <= 0.0 || rng.uniform() < std::exp(-beta * dE)) spins[size_t(i)] = int8_t(-spins[size_t(i)]);
    }
}

}  // namespace qmem
