#pragma once

// Local stabilizer codes on periodic lattices: geometry, syndromes, residual
// classification and the exhaustive distance search for small instances.
//
// All lattice coordinates are stored doubled so that vertices, edge midpoints,
// face centers and cube centers are integer points of one common grid.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qmem/bits.hpp"
#include "qmem/pauli.hpp"

namespace qmem {

constexpr int kMaxDim = 4;
using Coord = std::array<int32_t, kMaxDim>;

enum class CheckType : uint8_t { X = 0, Z = 1, Mixed = 2 };

// Signed minimum-image delta on a ring of the given (doubled) period.
inline int32_t wrap_delta(int32_t d, int32_t period) {
    d %= period;
    if (d < 0) d += period;
    if (2 * d > period) d -= period;
    return d;
}

struct StabilizerCode {
    std::string name;
    size_t n = 0;
    int dim = 0;
    Coord period{1, 1, 1, 1};  // doubled extent per axis, 1 when unused

    ParityCheckMatrix checks;
    std::vector<CheckType> check_type;
    std::vector<Coord> qubit_coord;
    std::vector<Coord> check_coord;
    std::vector<uint8_t> qubit_tag;   // disambiguates co-located qubits
    std::vector<uint8_t> check_tag;

    std::vector<std::vector<int32_t>> qubit_to_checks;
    int locality_radius = 1;  // lattice units
    double mass = 1.0;        // energy per violated check

    std::vector<std::pair<PauliOperator, PauliOperator>> logical_pairs;
    // True when logical_pairs span all k encoded qubits; then a trivial-class
    // trivial-syndrome Pauli is necessarily a stabilizer.
    bool logicals_complete = true;

    // Cell maps (CSR), built by finalize().
    int64_t num_cells = 1;
    std::vector<int32_t> cell_qubit_off, cell_qubit_dat;
    std::vector<int32_t> cell_check_off, cell_check_dat;

    int64_t cell_index(const Coord& c) const {
        int64_t idx = 0;
        for (int d = kMaxDim - 1; d >= 0; --d) idx = idx * period[d] + c[d];
        return idx;
    }

    Coord wrap(Coord c) const {
        for (int d = 0; d < kMaxDim; ++d) {
            c[d] %= period[d];
            if (c[d] < 0) c[d] += period[d];
        }
        return c;
    }

    int64_t min_image_dist2(const Coord& a, const Coord& b) const {
        int64_t s = 0;
        for (int d = 0; d < dim; ++d) {
            int64_t dd = wrap_delta(a[d] - b[d], period[d]);
            s += dd * dd;
        }
        return s;  // doubled-units squared
    }

    int32_t chebyshev(const Coord& a, const Coord& b) const {
        int32_t m = 0;
        for (int d = 0; d < dim; ++d) {
            int32_t dd = wrap_delta(a[d] - b[d], period[d]);
            if (dd < 0) dd = -dd;
            if (dd > m) m = dd;
        }
        return m;  // doubled units
    }

    size_t num_checks() const { return checks.num_rows(); }
    size_t num_logical_generators() const { return 2 * logical_pairs.size(); }

    const PauliOperator& logical_generator(size_t j) const {
        const auto& pr = logical_pairs[j / 2];
        return (j % 2 == 0) ? pr.first : pr.second;
    }

    void finalize() {
        num_cells = 1;
        for (int d = 0; d < kMaxDim; ++d) num_cells *= period[d];

        qubit_to_checks.assign(n, {});
        const auto& rows = checks.rows();
        check_type.assign(rows.size(), CheckType::Mixed);
        for (size_t c = 0; c < rows.size(); ++c) {
            bool has_x = rows[c].x_bits().any(), has_z = rows[c].z_bits().any();
            check_type[c] = has_x && has_z ? CheckType::Mixed : (has_x ? CheckType::X : CheckType::Z);
            for (size_t q = 0; q < n; ++q)
                if (rows[c].x_bit(q) || rows[c].z_bit(q))
                    qubit_to_checks[q].push_back(int32_t(c));
        }

        auto build_csr = [&](const std::vector<Coord>& coords, std::vector<int32_t>& off,
                             std::vector<int32_t>& dat) {
            std::vector<int32_t> count(size_t(num_cells), 0);
            for (const auto& c : coords) count[size_t(cell_index(c))]++;
            off.assign(size_t(num_cells) + 1, 0);
            for (int64_t i = 0; i < num_cells; ++i) off[size_t(i + 1)] = off[size_t(i)] + count[size_t(i)];
            dat.assign(coords.size(), 0);
            std::vector<int32_t> cur(off.begin(), off.end() - 1);
            for (size_t i = 0; i < coords.size(); ++i)
                dat[size_t(cur[size_t(cell_index(coords[i]))]++)] = int32_t(i);
        };
        build_csr(qubit_coord, cell_qubit_off, cell_qubit_dat);
        build_csr(check_coord, cell_check_off, cell_check_dat);
    }

    // Qubit/check living at a wrapped cell with the given tag, or -1.
    int32_t qubit_at(const Coord& c, uint8_t tag) const {
        int64_t cell = cell_index(wrap(c));
        for (int32_t i = cell_qubit_off[size_t(cell)]; i < cell_qubit_off[size_t(cell) + 1]; ++i)
            if (qubit_tag[size_t(cell_qubit_dat[size_t(i)])] == tag) return cell_qubit_dat[size_t(i)];
        return -1;
    }
    int32_t check_at(const Coord& c, uint8_t tag) const {
        int64_t cell = cell_index(wrap(c));
        for (int32_t i = cell_check_off[size_t(cell)]; i < cell_check_off[size_t(cell) + 1]; ++i)
            if (check_tag[size_t(cell_check_dat[size_t(i)])] == tag) return cell_check_dat[size_t(i)];
        return -1;
    }
};

// Whether single-qubit Pauli p on `qubit` anticommutes with check row `row`.
inline bool check_anticommutes_single(const PauliOperator& row, size_t qubit, Pauli p) {
    bool xe = (p == Pauli::X || p == Pauli::Y);
    bool ze = (p == Pauli::Z || p == Pauli::Y);
    return (xe && row.z_bit(qubit)) ^ (ze && row.x_bit(qubit));
}

// Violated-check bit vector (1 = eigenvalue -1).
inline BitVec syndrome_bits(const StabilizerCode& code, const PauliOperator& err) {
    if (err.num_qubits() != code.n) throw std::invalid_argument("syndrome: dimension mismatch");
    BitVec s(code.num_checks());
    const auto& rows = code.checks.rows();
    for (size_t c = 0; c < rows.size(); ++c)
        if (!commutes(rows[c], err)) s.set(c, true);
    return s;
}

// Eigenvalue form: M_j = +1 when the check commutes with the error.
inline std::vector<int8_t> syndrome(const StabilizerCode& code, const PauliOperator& err) {
    BitVec s = syndrome_bits(code, err);
    std::vector<int8_t> m(code.num_checks());
    for (size_t c = 0; c < m.size(); ++c) m[c] = s.get(c) ? -1 : +1;
    return m;
}

struct ResidualClass {
    enum class Kind { Trivial, Stabilizer, Logical } kind;
    uint32_t class_bits = 0;  // bit j: anticommutes with logical generator j

    bool is_failure() const { return class_bits != 0; }
};

inline uint32_t logical_class_bits(const StabilizerCode& code, const PauliOperator& p) {
    uint32_t bits = 0;
    for (size_t j = 0; j < code.num_logical_generators(); ++j)
        if (!commutes(code.logical_generator(j), p)) bits |= (1u << j);
    return bits;
}

inline ResidualClass classify_residual(const StabilizerCode& code, const PauliOperator& residual) {
    if (syndrome_bits(code, residual).any())
        throw std::invalid_argument("classify_residual: residual has nontrivial syndrome");
    if (residual.is_identity()) return {ResidualClass::Kind::Trivial, 0};
    uint32_t bits = logical_class_bits(code, residual);
    if (bits == 0) {
        if (code.logicals_complete || code.checks.in_group(residual))
            return {ResidualClass::Kind::Stabilizer, 0};
        return {ResidualClass::Kind::Logical, 0};  // hits only unexposed pairs
    }
    return {ResidualClass::Kind::Logical, bits};
}

// Exhaustive minimum weight over the trivial-syndrome group minus the
// stabilizer group. Enumerates the syndrome-map kernel with a Gray code.
inline size_t code_distance_bruteforce(const StabilizerCode& code) {
    if (code.n > 24) throw std::invalid_argument("code_distance_bruteforce: n > 24");
    const size_t n = code.n;
    const auto& rows = code.checks.rows();

    // Constraint rows: symplectic form against each check, i.e. v satisfies
    // them all iff v commutes with every check.
    std::vector<BitVec> constraints;
    for (const auto& r : rows) {
        BitVec c(2 * n);
        for (size_t q = 0; q < n; ++q) {
            if (r.z_bit(q)) c.set(q, true);
            if (r.x_bit(q)) c.set(n + q, true);
        }
        constraints.push_back(std::move(c));
    }
    Gf2Basis cbasis(2 * n);
    for (auto& c : constraints) cbasis.add(c);

    // Kernel basis: candidate vectors e_i reduced against an extended system.
    // Standard trick: compute kernel of the constraint matrix by eliminating
    // over candidate unit vectors.
    std::vector<BitVec> kernel;
    {
        // Build the constraint matrix rows and reduce unit vectors' images.
        // v is in the kernel iff dot(constraint_j, v) = 0 for all j.
        // Kernel = nullspace; find it by Gaussian elimination on the matrix.
        std::vector<BitVec> mat = constraints;  // m x 2n
        std::vector<int> pivot_col;
        size_t r = 0;
        for (size_t c = 0; c < 2 * n && r < mat.size(); ++c) {
            size_t sel = r;
            while (sel < mat.size() && !mat[sel].get(c)) ++sel;
            if (sel == mat.size()) continue;
            std::swap(mat[r], mat[sel]);
            for (size_t i = 0; i < mat.size(); ++i)
                if (i != r && mat[i].get(c)) mat[i] ^= mat[r];
            pivot_col.push_back(int(c));
            ++r;
        }
        std::vector<bool> is_pivot(2 * n, false);
        for (int c : pivot_col) is_pivot[size_t(c)] = true;
        for (size_t free_c = 0; free_c < 2 * n; ++free_c) {
            if (is_pivot[free_c]) continue;
            BitVec v(2 * n);
            v.set(free_c, true);
            for (size_t i = 0; i < r; ++i)
                if (mat[i].get(free_c)) v.set(size_t(pivot_col[i]), true);
            kernel.push_back(std::move(v));
        }
    }

    Gf2Basis stab(2 * n);
    for (const auto& row : rows) stab.add(row.symplectic_row());

    if (kernel.size() > 26) throw std::invalid_argument("code_distance_bruteforce: kernel too large");

    auto weight_of = [n](const BitVec& v) {
        size_t w = 0;
        for (size_t q = 0; q < n; ++q)
            if (v.get(q) || v.get(n + q)) ++w;
        return w;
    };

    size_t best = n + 1;
    BitVec cur(2 * n);
    uint64_t count = uint64_t(1) << kernel.size();
    for (uint64_t g = 1; g < count; ++g) {
        // Gray code: flip the basis vector for the lowest set bit of g.
        int bit = std::countr_zero(g);
        cur ^= kernel[size_t(bit)];
        size_t w = weight_of(cur);
        if (w < best && !stab.contains(cur)) best = w;
    }
    if (best > n) throw std::runtime_error("code_distance_bruteforce: no logical operator found");
    return best;
}

// Translation by one lattice unit along `axis`; returns qubit and check
// permutations. Only meaningful for translation-invariant catalog codes.
struct TranslationMap {
    std::vector<int32_t> qubit_perm;
    std::vector<int32_t> check_perm;
};

inline TranslationMap lattice_translation(const StabilizerCode& code, int axis) {
    if (axis < 0 || axis >= code.dim) throw std::invalid_argument("translation axis out of range");
    TranslationMap tm;
    tm.qubit_perm.resize(code.n);
    tm.check_perm.resize(code.num_checks());
    for (size_t q = 0; q < code.n; ++q) {
        Coord c = code.qubit_coord[q];
        c[axis] += 2;
        int32_t t = code.qubit_at(c, code.qubit_tag[q]);
        if (t < 0) throw std::runtime_error("translation: missing image qubit");
        tm.qubit_perm[q] = t;
    }
    for (size_t k = 0; k < code.num_checks(); ++k) {
        Coord c = code.check_coord[k];
        c[axis] += 2;
        int32_t t = code.check_at(c, code.check_tag[k]);
        if (t < 0) throw std::runtime_error("translation: missing image check");
        tm.check_perm[size_t(k)] = t;
    }
    return tm;
}

inline PauliOperator permute_qubits(const PauliOperator& p, const std::vector<int32_t>& perm) {
    PauliOperator r(p.num_qubits());
    for (size_t q = 0; q < p.num_qubits(); ++q) {
        Pauli f = p.factor(q);
        if (f != Pauli::I) r.set_factor(size_t(perm[q]), f);
    }
    return r;
}

}  // namespace qmem
