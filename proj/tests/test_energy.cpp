#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qmem/catalog.hpp"
#include "qmem/energy.hpp"
#include "qmem/rng.hpp"

using namespace qmem;

namespace {

// Independent oracle: minimum-image Euclidean distance between two toric
// plaquettes from raw face coordinates.
double plaq_dist_oracle(int L, int x1, int y1, int x2, int y2) {
    auto md = [L](int d) {
        d = ((d % L) + L) % L;
        return std::min(d, L - d);
    };
    double dx = md(x2 - x1), dy = md(y2 - y1);
    return std::sqrt(dx * dx + dy * dy);
}

int32_t plaquette_id(const StabilizerCode& code, int x, int y) {
    Coord c{2 * x + 1, 2 * y + 1, 0, 0};
    int32_t id = code.check_at(c, 1);
    REQUIRE(id >= 0);
    return id;
}

AnyonConfiguration cfg_of(const StabilizerCode& code, const std::vector<int32_t>& violated) {
    BitVec bits(code.num_checks());
    for (int32_t c : violated) bits.set(size_t(c), true);
    return AnyonConfiguration::from_syndrome(code, bits);
}

}  // namespace

TEST_CASE("total_energy fixed examples") {
    auto code = build_toric_2d(8);

    auto stab = EnergyModel::stabilizer();
    auto aa0 = EnergyModel::anyon_anyon(1.0, 1.0, 0.0);
    CHECK(total_energy(stab, code, cfg_of(code, {})) == 0.0);
    CHECK(total_energy(aa0, code, cfg_of(code, {})) == 0.0);

    // alpha = 0: E = N Delta + V N(N-1)/2, with N = 3 in one sector
    auto cfg3 = cfg_of(code, {plaquette_id(code, 0, 0), plaquette_id(code, 3, 1), plaquette_id(code, 5, 6)});
    CHECK_THAT(total_energy(aa0, code, cfg3), Catch::Matchers::WithinRel(6.0, 1e-12));

    // alpha = 1, two anyons at torus distance 4: E = 2 + 1/4
    auto aa1 = EnergyModel::anyon_anyon(1.0, 1.0, 1.0);
    auto cfg2 = cfg_of(code, {plaquette_id(code, 1, 2), plaquette_id(code, 5, 2)});
    CHECK_THAT(total_energy(aa1, code, cfg2), Catch::Matchers::WithinRel(2.25, 1e-12));

    // stabilizer kind scales with the violated count
    CHECK_THAT(total_energy(stab, code, cfg3), Catch::Matchers::WithinRel(3.0, 1e-12));
}

TEST_CASE("stabilizer energy depends only on the syndrome") {
    auto code = build_toric_2d(4);
    auto stab = EnergyModel::stabilizer();
    Rng rng(404);
    for (int it = 0; it < 50; ++it) {
        PauliOperator e(code.n);
        for (int k = 0; k < 6; ++k) e.toggle(rng.below(code.n), Pauli(1 + rng.below(3)));
        PauliOperator e2 = e;
        for (int k = 0; k < 3; ++k) e2 = e2 * code.checks.rows()[rng.below(code.num_checks())];
        auto c1 = AnyonConfiguration::from_syndrome(code, syndrome_bits(code, e));
        auto c2 = AnyonConfiguration::from_syndrome(code, syndrome_bits(code, e2));
        CHECK(total_energy(stab, code, c1) == total_energy(stab, code, c2));
    }
}

TEST_CASE("delta_energy") {
    auto code = build_toric_2d(6);
    auto stab = EnergyModel::stabilizer();
    std::vector<uint8_t> empty(code.num_checks(), 0);

    CHECK(delta_energy(stab, code, empty, {}) == 0.0);

    // creating a toric pair costs +2 (the energy barrier scale)
    std::vector<int32_t> pair = {plaquette_id(code, 2, 2), plaquette_id(code, 3, 2)};
    CHECK_THAT(delta_energy(stab, code, empty, pair), Catch::Matchers::WithinRel(2.0, 1e-12));

    // randomized configurations: delta equals a recompute-from-scratch oracle
    Rng rng(808);
    std::vector<EnergyModel> models = {
        stab,
        EnergyModel::anyon_anyon(1.0, 0.7, 1.0),
        EnergyModel::anyon_anyon(0.5, 0.3, 0.0),
        EnergyModel::anyon_anyon(1.0, 0.4, 0.0, PairPotential::Log),
        EnergyModel::anyon_vacuum(1.0, 0.2, 1.0),
        EnergyModel::anyon_vacuum(1.0, 0.1, 0.5),
    };
    for (const auto& m : models) {
        for (int it = 0; it < 40; ++it) {
            std::vector<uint8_t> violated(code.num_checks(), 0);
            std::vector<int32_t> on;
            for (size_t c = 0; c < code.num_checks(); ++c)
                if (rng.bernoulli(0.08)) {
                    violated[c] = 1;
                    on.push_back(int32_t(c));
                }
            std::vector<int32_t> flips;
            for (size_t c = 0; c < code.num_checks(); ++c)
                if (rng.bernoulli(0.05)) flips.push_back(int32_t(c));

            double d = delta_energy(m, code, violated, flips);

            auto before = cfg_of(code, on);
            std::vector<int32_t> after_list;
            {
                std::vector<uint8_t> after(violated);
                for (int32_t c : flips) after[size_t(c)] ^= 1;
                for (size_t c = 0; c < code.num_checks(); ++c)
                    if (after[c]) after_list.push_back(int32_t(c));
            }
            double oracle = total_energy(m, code, cfg_of(code, after_list)) - total_energy(m, code, before);
            CHECK_THAT(d, Catch::Matchers::WithinAbs(oracle, 1e-9));
        }
    }
}

TEST_CASE("EnergyState incremental bookkeeping matches recompute") {
    auto code = build_toric_2d(5);
    Rng rng(11);
    for (const auto& m : {EnergyModel::anyon_anyon(1.0, 0.5, 1.0), EnergyModel::anyon_vacuum(1.0, 0.3, 1.0)}) {
        EnergyState st(code, m);
        for (int it = 0; it < 200; ++it) {
            int32_t c = int32_t(rng.below(code.num_checks()));
            st.apply_toggle(std::span<const int32_t>(&c, 1));
        }
        double incremental = st.energy();
        st.recompute();
        CHECK_THAT(incremental, Catch::Matchers::WithinAbs(st.energy(), 1e-9 * std::max(1.0, std::abs(st.energy()))));
    }
}

TEST_CASE("anyon_gap") {
    auto code = build_toric_2d(8);
    // V = 0 reduces to the bare gap
    CHECK(anyon_gap(EnergyModel::anyon_vacuum(1.0, 0.0, 1.0), code, plaquette_id(code, 0, 0)) == 1.0);

    // alpha = 0: 1 + 4 (K - 1) with K the sector size
    double K = double(code.n) / 2.0;  // L^2 plaquettes
    CHECK_THAT(anyon_gap(EnergyModel::anyon_vacuum(1.0, 1.0, 0.0), code, plaquette_id(code, 0, 0)),
               Catch::Matchers::WithinRel(1.0 + 4.0 * (K - 1.0), 1e-12));

    // alpha = 1 on the L = 8 torus vs a direct lattice-sum oracle
    int L = 8;
    double s = 0.0;
    for (int x = 0; x < L; ++x)
        for (int y = 0; y < L; ++y) {
            if (x == 0 && y == 0) continue;
            s += 1.0 / plaq_dist_oracle(L, 0, 0, x, y);
        }
    double expect = 1.0 + 4.0 * 0.5 * s;
    CHECK_THAT(anyon_gap(EnergyModel::anyon_vacuum(1.0, 0.5, 1.0), code, plaquette_id(code, 0, 0)),
               Catch::Matchers::WithinRel(expect, 1e-12));
}

TEST_CASE("anyon-vacuum gap grows as L^(2-alpha)") {
    for (double alpha : {0.5, 1.0}) {
        auto m = EnergyModel::anyon_vacuum(1.0, 1.0, alpha);
        auto small = build_toric_2d(32);
        auto big = build_toric_2d(64);
        double mu_small = anyon_gap(m, small, plaquette_id(small, 0, 0));
        double mu_big = anyon_gap(m, big, plaquette_id(big, 0, 0));
        double ratio = mu_big / mu_small;
        double target = std::pow(2.0, 2.0 - alpha);
        CHECK(std::abs(ratio - target) / target < 0.10);
    }
}

TEST_CASE("anyon-vacuum energy is minimized by the vacuum") {
    auto code = build_toric_2d(6);
    auto m = EnergyModel::anyon_vacuum(1.0, 0.4, 1.0);
    Rng rng(5);
    for (int it = 0; it < 100; ++it) {
        std::vector<int32_t> on;
        for (size_t c = 0; c < code.num_checks(); ++c)
            if (rng.bernoulli(0.15)) on.push_back(int32_t(c));
        CHECK(total_energy(m, code, cfg_of(code, on)) >= -1e-12);
    }
}

TEST_CASE("logarithmic potential grows with separation") {
    auto code = build_toric_2d(16);
    auto m = EnergyModel::anyon_anyon(1.0, 1.0, 0.0, PairPotential::Log);
    double prev = -1e300;
    for (int d = 1; d <= 8; ++d) {
        auto cfg = cfg_of(code, {plaquette_id(code, 0, 0), plaquette_id(code, d, 0)});
        double e = total_energy(m, code, cfg);
        CHECK(e > prev);
        prev = e;
    }
}
