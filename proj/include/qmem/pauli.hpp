#pragma once

// Projective n-qubit Pauli group in symplectic (X bits, Z bits) form.
// Phases are not tracked: syndromes, energies and logical classes only
// depend on the projective part.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qmem/bits.hpp"

namespace qmem {

enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) { return "IXYZ"[size_t(p)]; }

class PauliOperator {
public:
    PauliOperator() = default;
    explicit PauliOperator(size_t n) : n_(n), x_(n), z_(n) {}

    static PauliOperator from_string(std::string_view s) {
        PauliOperator p(s.size());
        for (size_t i = 0; i < s.size(); ++i) {
            switch (s[i]) {
                case 'I': break;
                case 'X': p.x_.set(i, true); break;
                case 'Y': p.x_.set(i, true); p.z_.set(i, true); break;
                case 'Z': p.z_.set(i, true); break;
                default: throw std::invalid_argument("bad Pauli character");
            }
        }
        return p;
    }

    std::string to_string() const {
        std::string s(n_, 'I');
        for (size_t i = 0; i < n_; ++i) s[i] = pauli_char(factor(i));
        return s;
    }

    size_t num_qubits() const { return n_; }
    bool x_bit(size_t i) const { return x_.get(i); }
    bool z_bit(size_t i) const { return z_.get(i); }
    const BitVec& x_bits() const { return x_; }
    const BitVec& z_bits() const { return z_; }

    Pauli factor(size_t i) const {
        bool x = x_.get(i), z = z_.get(i);
        if (x && z) return Pauli::Y;
        if (x) return Pauli::X;
        if (z) return Pauli::Z;
        return Pauli::I;
    }

    void set_factor(size_t i, Pauli p) {
        x_.set(i, p == Pauli::X || p == Pauli::Y);
        z_.set(i, p == Pauli::Z || p == Pauli::Y);
    }

    // Projective multiplication by a single-qubit Pauli.
    void toggle(size_t qubit, Pauli p) {
        if (p == Pauli::X || p == Pauli::Y) x_.flip(qubit);
        if (p == Pauli::Z || p == Pauli::Y) z_.flip(qubit);
    }

    bool is_identity() const { return !x_.any() && !z_.any(); }

    size_t weight() const { return BitVec::or_popcount(x_, z_); }

    friend PauliOperator operator*(const PauliOperator& a, const PauliOperator& b) {
        if (a.n_ != b.n_) throw std::invalid_argument("Pauli dimension mismatch");
        PauliOperator r = a;
        r.x_ ^= b.x_;
        r.z_ ^= b.z_;
        return r;
    }

    bool operator==(const PauliOperator&) const = default;

    friend bool commutes(const PauliOperator& a, const PauliOperator& b) {
        if (a.n_ != b.n_) throw std::invalid_argument("Pauli dimension mismatch");
        return !(BitVec::dot(a.x_, b.z_) ^ BitVec::dot(a.z_, b.x_));
    }

    // 2n-bit symplectic row (x bits then z bits), for GF(2) group algebra.
    BitVec symplectic_row() const {
        BitVec r(2 * n_);
        for (size_t i = 0; i < n_; ++i) {
            if (x_.get(i)) r.set(i, true);
            if (z_.get(i)) r.set(n_ + i, true);
        }
        return r;
    }

private:
    size_t n_ = 0;
    BitVec x_, z_;
};

inline size_t weight(const PauliOperator& p) { return p.weight(); }

// Stabilizer generators, possibly over-complete. Rank and the echelon basis
// for membership tests are computed once on demand and cached.
class ParityCheckMatrix {
public:
    ParityCheckMatrix() = default;
    explicit ParityCheckMatrix(std::vector<PauliOperator> rows) : rows_(std::move(rows)) {
        if (!rows_.empty()) n_ = rows_[0].num_qubits();
        for (const auto& r : rows_)
            if (r.num_qubits() != n_) throw std::invalid_argument("check row dimension mismatch");
    }

    const std::vector<PauliOperator>& rows() const { return rows_; }
    size_t num_rows() const { return rows_.size(); }
    size_t num_qubits() const { return n_; }

    size_t rank() const {
        build_basis();
        return basis_.rank();
    }

    bool in_group(const PauliOperator& p) const {
        if (p.num_qubits() != n_) throw std::invalid_argument("Pauli dimension mismatch");
        build_basis();
        return basis_.contains(p.symplectic_row());
    }

    bool rows_commute_pairwise() const {
        for (size_t i = 0; i < rows_.size(); ++i)
            for (size_t j = i + 1; j < rows_.size(); ++j)
                if (!commutes(rows_[i], rows_[j])) return false;
        return true;
    }

private:
    void build_basis() const {
        if (basis_built_) return;
        basis_ = Gf2Basis(2 * n_);
        for (const auto& r : rows_) basis_.add(r.symplectic_row());
        basis_built_ = true;
    }

    std::vector<PauliOperator> rows_;
    size_t n_ = 0;
    mutable Gf2Basis basis_;
    mutable bool basis_built_ = false;
};

}  // namespace qmem
