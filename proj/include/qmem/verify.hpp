#pragma once

// Catalog invariants bundled as one report: pairwise check commutation,
// logical-operator algebra, locality, bounded qubit degree, and translation
// covariance of syndromes on randomized errors.

#include <sstream>
#include <string>

#include "qmem/code.hpp"
#include "qmem/rng.hpp"

namespace qmem {

struct CodeReport {
    std::string code_name;
    size_t n = 0, num_checks = 0, rank = 0, k = 0;
    int max_degree = 0;
    bool checks_commute = false;
    bool logical_algebra_ok = false;
    bool locality_ok = false;
    bool degree_ok = false;
    bool translation_ok = true;  // skipped (kept true) for dim = 0

    bool all_ok() const {
        return checks_commute && logical_algebra_ok && locality_ok && degree_ok && translation_ok;
    }

    std::string text() const {
        std::ostringstream os;
        os << "code " << code_name << ": n=" << n << " checks=" << num_checks << " rank=" << rank << " k=" << k
           << "\n";
        auto line = [&](const char* what, bool ok) { os << "  " << what << ": " << (ok ? "ok" : "FAILED") << "\n"; };
        line("pairwise check commutation", checks_commute);
        line("logical operator algebra", logical_algebra_ok);
        line("check locality", locality_ok);
        line("bounded qubit degree", degree_ok);
        line("translation covariance", translation_ok);
        return os.str();
    }
};

inline CodeReport verify_code(const StabilizerCode& code, int max_degree_bound = 16, uint64_t seed = 1) {
    CodeReport rep;
    rep.code_name = code.name;
    rep.n = code.n;
    rep.num_checks = code.num_checks();
    rep.rank = code.checks.rank();
    rep.k = code.n - rep.rank;

    rep.checks_commute = code.checks.rows_commute_pairwise();

    rep.logical_algebra_ok = true;
    for (const auto& row : code.checks.rows())
        for (const auto& [lx, lz] : code.logical_pairs)
            if (!commutes(row, lx) || !commutes(row, lz)) rep.logical_algebra_ok = false;
    for (size_t i = 0; i < code.logical_pairs.size() && rep.logical_algebra_ok; ++i)
        for (size_t j = 0; j < code.logical_pairs.size(); ++j) {
            bool anti_xz = !commutes(code.logical_pairs[i].first, code.logical_pairs[j].second);
            if (anti_xz != (i == j) || !commutes(code.logical_pairs[i].first, code.logical_pairs[j].first) ||
                !commutes(code.logical_pairs[i].second, code.logical_pairs[j].second)) {
                rep.logical_algebra_ok = false;
                break;
            }
        }

    rep.locality_ok = true;
    const auto& rows = code.checks.rows();
    for (size_t c = 0; c < rows.size() && rep.locality_ok; ++c) {
        int32_t anchor_found = -1;
        Coord anchor{};
        for (size_t q = 0; q < code.n; ++q) {
            if (!rows[c].x_bit(q) && !rows[c].z_bit(q)) continue;
            if (anchor_found < 0) {
                anchor = code.qubit_coord[q];
                anchor_found = 1;
                continue;
            }
            for (int d = 0; d < code.dim; ++d) {
                int32_t delta = wrap_delta(code.qubit_coord[q][d] - anchor[d], code.period[d]);
                if (delta > 2 * code.locality_radius || delta < -2 * code.locality_radius) rep.locality_ok = false;
            }
        }
    }

    rep.max_degree = 0;
    for (const auto& adj : code.qubit_to_checks) rep.max_degree = std::max(rep.max_degree, int(adj.size()));
    rep.degree_ok = rep.max_degree <= max_degree_bound;

    if (code.dim > 0) {
        Rng rng(seed);
        for (int axis = 0; axis < code.dim && rep.translation_ok; ++axis) {
            auto tm = lattice_translation(code, axis);
            for (int it = 0; it < 10; ++it) {
                PauliOperator e(code.n);
                for (int m = 0; m < 4; ++m) e.toggle(rng.below(code.n), Pauli(1 + rng.below(3)));
                auto syn = syndrome_bits(code, e);
                auto syn_t = syndrome_bits(code, permute_qubits(e, tm.qubit_perm));
                BitVec expect(code.num_checks());
                for (size_t c = 0; c < code.num_checks(); ++c)
                    if (syn.get(c)) expect.set(size_t(tm.check_perm[c]), true);
                if (!(syn_t == expect)) {
                    rep.translation_ok = false;
                    break;
                }
            }
        }
    }
    return rep;
}

}  // namespace qmem
