#pragma once

// Concrete code constructors: the four-qubit code, the 2D toric code, the
// cubic code and the 4D toric code, all with periodic boundaries.

#include <stdexcept>
#include <string>

#include "qmem/code.hpp"

namespace qmem {

inline StabilizerCode build_four_qubit_toric() {
    StabilizerCode code;
    code.name = "four-qubit";
    code.n = 4;
    code.dim = 0;
    code.period = {1, 1, 1, 1};
    code.checks = ParityCheckMatrix({PauliOperator::from_string("XXXX"), PauliOperator::from_string("ZZZZ")});
    code.check_coord = {Coord{0, 0, 0, 0}, Coord{0, 0, 0, 0}};
    code.check_tag = {0, 1};
    code.qubit_coord.assign(4, Coord{0, 0, 0, 0});
    code.qubit_tag = {0, 1, 2, 3};
    code.locality_radius = 1;
    // One exposed pair; k = 2 but the second encoded qubit is left untracked.
    code.logical_pairs = {{PauliOperator::from_string("XXII"), PauliOperator::from_string("ZIZI")}};
    code.logicals_complete = false;
    code.finalize();
    return code;
}

// Qubits on the edges of an L x L periodic square lattice. Edge (x, y, o):
// o=0 points along +x from vertex (x,y), o=1 along +y.
inline StabilizerCode build_toric_2d(int L) {
    if (L < 2) throw std::invalid_argument("build_toric_2d: L must be >= 2");
    StabilizerCode code;
    code.name = "toric2d";
    code.dim = 2;
    code.period = {2 * L, 2 * L, 1, 1};
    code.n = size_t(2) * size_t(L) * size_t(L);

    auto edge = [L](int x, int y, int o) {
        x = ((x % L) + L) % L;
        y = ((y % L) + L) % L;
        return size_t(2 * (y * L + x) + o);
    };

    code.qubit_coord.resize(code.n);
    code.qubit_tag.assign(code.n, 0);
    for (int y = 0; y < L; ++y)
        for (int x = 0; x < L; ++x) {
            code.qubit_coord[edge(x, y, 0)] = Coord{2 * x + 1, 2 * y, 0, 0};
            code.qubit_coord[edge(x, y, 1)] = Coord{2 * x, 2 * y + 1, 0, 0};
        }

    std::vector<PauliOperator> rows;
    rows.reserve(size_t(2 * L * L));
    for (int y = 0; y < L; ++y)
        for (int x = 0; x < L; ++x) {
            PauliOperator star(code.n);
            star.set_factor(edge(x, y, 0), Pauli::X);
            star.set_factor(edge(x - 1, y, 0), Pauli::X);
            star.set_factor(edge(x, y, 1), Pauli::X);
            star.set_factor(edge(x, y - 1, 1), Pauli::X);
            rows.push_back(star);
            code.check_coord.push_back(Coord{2 * x, 2 * y, 0, 0});
            code.check_tag.push_back(0);
        }
    for (int y = 0; y < L; ++y)
        for (int x = 0; x < L; ++x) {
            PauliOperator plaq(code.n);
            plaq.set_factor(edge(x, y, 0), Pauli::Z);
            plaq.set_factor(edge(x, y + 1, 0), Pauli::Z);
            plaq.set_factor(edge(x, y, 1), Pauli::Z);
            plaq.set_factor(edge(x + 1, y, 1), Pauli::Z);
            rows.push_back(plaq);
            code.check_coord.push_back(Coord{2 * x + 1, 2 * y + 1, 0, 0});
            code.check_tag.push_back(1);
        }
    code.checks = ParityCheckMatrix(std::move(rows));
    code.locality_radius = 1;

    // Canonical straight-string representatives: one vertical, one horizontal
    // per sector.
    PauliOperator lx1(code.n), lz1(code.n), lx2(code.n), lz2(code.n);
    for (int y = 0; y < L; ++y) lx1.set_factor(edge(0, y, 0), Pauli::X);
    for (int x = 0; x < L; ++x) lz1.set_factor(edge(x, 0, 0), Pauli::Z);
    for (int x = 0; x < L; ++x) lx2.set_factor(edge(x, 0, 1), Pauli::X);
    for (int y = 0; y < L; ++y) lz2.set_factor(edge(0, y, 1), Pauli::Z);
    code.logical_pairs = {{lx1, lz1}, {lx2, lz2}};
    code.logicals_complete = true;
    code.finalize();
    return code;
}

inline bool cubic_code_size_allowed(int L) {
    return L >= 3 && L < 200 && L % 2 != 0 && L % 15 != 0 && L % 63 != 0;
}

// Two qubits per vertex of an L^3 periodic cubic lattice, one S^X and one S^Z
// eight-body check per unit cube. Sizes with factors 2, 15 or 63 are refused;
// the remaining odd sizes carry exactly two logical qubits with sublattice
// product-operator representatives.
inline StabilizerCode build_cubic_code(int L) {
    if (!cubic_code_size_allowed(L))
        throw std::invalid_argument("build_cubic_code: L must be odd, < 200, with no factor 2, 15 or 63");
    StabilizerCode code;
    code.name = "cubic";
    code.dim = 3;
    code.period = {2 * L, 2 * L, 2 * L, 1};
    const size_t nv = size_t(L) * size_t(L) * size_t(L);
    code.n = 2 * nv;

    auto vert = [L](int x, int y, int z) {
        x = ((x % L) + L) % L;
        y = ((y % L) + L) % L;
        z = ((z % L) + L) % L;
        return size_t((z * L + y) * L + x);
    };
    auto qub = [&](int x, int y, int z, int s) { return 2 * vert(x, y, z) + size_t(s); };

    code.qubit_coord.resize(code.n);
    code.qubit_tag.resize(code.n);
    for (int z = 0; z < L; ++z)
        for (int y = 0; y < L; ++y)
            for (int x = 0; x < L; ++x)
                for (int s = 0; s < 2; ++s) {
                    code.qubit_coord[qub(x, y, z, s)] = Coord{2 * x, 2 * y, 2 * z, 0};
                    code.qubit_tag[qub(x, y, z, s)] = uint8_t(s);
                }

    // Corner patterns inside the unit cube at base vertex v. Left qubit (s=0)
    // carries the lone-Pauli corners next to the full-weight corner.
    static const int xL[4][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    static const int xR[4][3] = {{0, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
    static const int zL[4][3] = {{1, 1, 1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    static const int zR[4][3] = {{1, 1, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}};

    std::vector<PauliOperator> rows;
    rows.reserve(2 * nv);
    for (int z = 0; z < L; ++z)
        for (int y = 0; y < L; ++y)
            for (int x = 0; x < L; ++x) {
                PauliOperator sx(code.n);
                for (const auto& d : xL) sx.set_factor(qub(x + d[0], y + d[1], z + d[2], 0), Pauli::X);
                for (const auto& d : xR) sx.set_factor(qub(x + d[0], y + d[1], z + d[2], 1), Pauli::X);
                rows.push_back(sx);
                code.check_coord.push_back(Coord{2 * x + 1, 2 * y + 1, 2 * z + 1, 0});
                code.check_tag.push_back(0);
            }
    for (int z = 0; z < L; ++z)
        for (int y = 0; y < L; ++y)
            for (int x = 0; x < L; ++x) {
                PauliOperator sz(code.n);
                for (const auto& d : zL) sz.set_factor(qub(x + d[0], y + d[1], z + d[2], 0), Pauli::Z);
                for (const auto& d : zR) sz.set_factor(qub(x + d[0], y + d[1], z + d[2], 1), Pauli::Z);
                rows.push_back(sz);
                code.check_coord.push_back(Coord{2 * x + 1, 2 * y + 1, 2 * z + 1, 0});
                code.check_tag.push_back(1);
            }
    code.checks = ParityCheckMatrix(std::move(rows));
    code.locality_radius = 1;

    PauliOperator lx1(code.n), lz1(code.n), lx2(code.n), lz2(code.n);
    for (size_t v = 0; v < nv; ++v) {
        lx1.set_factor(2 * v, Pauli::X);
        lz1.set_factor(2 * v, Pauli::Z);
        lx2.set_factor(2 * v + 1, Pauli::X);
        lz2.set_factor(2 * v + 1, Pauli::Z);
    }
    code.logical_pairs = {{lx1, lz1}, {lx2, lz2}};
    code.logicals_complete = true;
    code.finalize();
    return code;
}

// Qubits on the faces of an L^4 periodic hypercubic lattice; six-body X-type
// link operators and Z-type cube operators. Build-and-verify catalog entry.
inline StabilizerCode build_toric_4d(int L) {
    if (L < 2) throw std::invalid_argument("build_toric_4d: L must be >= 2");
    StabilizerCode code;
    code.name = "toric4d";
    code.dim = 4;
    code.period = {2 * L, 2 * L, 2 * L, 2 * L};
    const size_t nv = size_t(L) * size_t(L) * size_t(L) * size_t(L);
    code.n = 6 * nv;

    static const int face_dims[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    static const int cube_dims[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};

    auto vlin = [L](Coord v) {
        size_t idx = 0;
        for (int d = kMaxDim - 1; d >= 0; --d) {
            int c = ((v[d] % L) + L) % L;
            idx = idx * size_t(L) + size_t(c);
        }
        return idx;
    };
    auto face = [&](Coord v, int o) { return 6 * vlin(v) + size_t(o); };
    int face_index[4][4];
    for (int o = 0; o < 6; ++o) face_index[face_dims[o][0]][face_dims[o][1]] = o;

    code.qubit_coord.resize(code.n);
    code.qubit_tag.assign(code.n, 0);
    std::vector<Coord> vs(nv);
    {
        Coord v{0, 0, 0, 0};
        for (size_t i = 0; i < nv; ++i) {
            vs[i] = v;
            for (int d = 0; d < 4; ++d) {
                if (++v[d] < L) break;
                v[d] = 0;
            }
        }
    }
    for (const auto& v : vs)
        for (int o = 0; o < 6; ++o) {
            Coord c{2 * v[0], 2 * v[1], 2 * v[2], 2 * v[3]};
            c[face_dims[o][0]] += 1;
            c[face_dims[o][1]] += 1;
            code.qubit_coord[face(v, o)] = c;
        }

    std::vector<PauliOperator> rows;
    rows.reserve(8 * nv);
    for (const auto& v : vs)
        for (int mu = 0; mu < 4; ++mu) {
            PauliOperator link(code.n);
            for (int nu = 0; nu < 4; ++nu) {
                if (nu == mu) continue;
                int o = face_index[std::min(mu, nu)][std::max(mu, nu)];
                link.set_factor(face(v, o), Pauli::X);
                Coord u = v;
                u[nu] -= 1;
                link.set_factor(face(u, o), Pauli::X);
            }
            rows.push_back(link);
            Coord c{2 * v[0], 2 * v[1], 2 * v[2], 2 * v[3]};
            c[mu] += 1;
            code.check_coord.push_back(c);
            code.check_tag.push_back(0);
        }
    for (const auto& v : vs)
        for (int t = 0; t < 4; ++t) {
            PauliOperator cube(code.n);
            for (int j = 0; j < 3; ++j) {
                int lam = cube_dims[t][j];
                int a = cube_dims[t][(j + 1) % 3], b = cube_dims[t][(j + 2) % 3];
                int o = face_index[std::min(a, b)][std::max(a, b)];
                cube.set_factor(face(v, o), Pauli::Z);
                Coord u = v;
                u[lam] += 1;
                cube.set_factor(face(u, o), Pauli::Z);
            }
            rows.push_back(cube);
            Coord c{2 * v[0], 2 * v[1], 2 * v[2], 2 * v[3]};
            c[cube_dims[t][0]] += 1;
            c[cube_dims[t][1]] += 1;
            c[cube_dims[t][2]] += 1;
            code.check_coord.push_back(c);
            code.check_tag.push_back(1);
        }
    code.checks = ParityCheckMatrix(std::move(rows));
    code.locality_radius = 1;

    // One pair per orientation class: Z on a mu-nu sheet through the origin,
    // X on the dual sheet of the same orientation.
    for (int o = 0; o < 6; ++o) {
        int mu = face_dims[o][0], nu = face_dims[o][1];
        int rho = -1, sig = -1;
        for (int d = 0; d < 4; ++d)
            if (d != mu && d != nu) (rho < 0 ? rho : sig) = d;
        PauliOperator lz(code.n), lx(code.n);
        for (const auto& v : vs) {
            if (v[rho] == 0 && v[sig] == 0) lz.set_factor(face(v, o), Pauli::Z);
            if (v[mu] == 0 && v[nu] == 0) lx.set_factor(face(v, o), Pauli::X);
        }
        code.logical_pairs.emplace_back(lx, lz);
    }
    code.logicals_complete = true;
    code.finalize();
    return code;
}

inline StabilizerCode build_code(const std::string& id, int L) {
    if (id == "4q" || id == "four-qubit") return build_four_qubit_toric();
    if (id == "toric2d") return build_toric_2d(L);
    if (id == "cubic") return build_cubic_code(L);
    if (id == "toric4d") return build_toric_4d(L);
    throw std::invalid_argument("unknown code id: " + id);
}

}  // namespace qmem
