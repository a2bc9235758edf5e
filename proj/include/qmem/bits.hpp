#pragma once

// Packed bit vectors and dense GF(2) linear algebra used by the Pauli layer,
// the group-membership tests and the decoder's box solves.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qmem {

struct BitVec {
    size_t n = 0;
    std::vector<uint64_t> w;

    BitVec() = default;
    explicit BitVec(size_t nbits) : n(nbits), w((nbits + 63) / 64, 0) {}

    bool get(size_t i) const { return (w[i >> 6] >> (i & 63)) & 1u; }
    void set(size_t i, bool v) {
        uint64_t m = uint64_t(1) << (i & 63);
        if (v)
            w[i >> 6] |= m;
        else
            w[i >> 6] &= ~m;
    }
    void flip(size_t i) { w[i >> 6] ^= uint64_t(1) << (i & 63); }

    void clear() { std::fill(w.begin(), w.end(), 0); }

    bool any() const {
        for (uint64_t x : w)
            if (x) return true;
        return false;
    }

    size_t popcount() const {
        size_t s = 0;
        for (uint64_t x : w) s += size_t(std::popcount(x));
        return s;
    }

    int lowest_set() const {
        for (size_t i = 0; i < w.size(); ++i)
            if (w[i]) return int(i * 64 + size_t(std::countr_zero(w[i])));
        return -1;
    }

    BitVec& operator^=(const BitVec& o) {
        for (size_t i = 0; i < w.size(); ++i) w[i] ^= o.w[i];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) {
        a ^= b;
        return a;
    }
    bool operator==(const BitVec&) const = default;

    // Parity of popcount(a & b). XOR-folding the ANDed words preserves the
    // popcount parity since popcnt(x^y) = popcnt(x)+popcnt(y) mod 2.
    static bool dot(const BitVec& a, const BitVec& b) {
        uint64_t acc = 0;
        for (size_t i = 0; i < a.w.size(); ++i) acc ^= a.w[i] & b.w[i];
        return std::popcount(acc) & 1;
    }

    static size_t or_popcount(const BitVec& a, const BitVec& b) {
        size_t s = 0;
        for (size_t i = 0; i < a.w.size(); ++i) s += size_t(std::popcount(a.w[i] | b.w[i]));
        return s;
    }
};

// Row-echelon basis built incrementally; pivot = lowest set bit, rows kept
// fully reduced so membership reduces against each row at most once.
class Gf2Basis {
public:
    explicit Gf2Basis(size_t cols = 0) : cols_(cols) {}

    size_t rank() const { return rows_.size(); }
    size_t cols() const { return cols_; }

    // Reduce v against the basis in place; returns the remainder's pivot or -1.
    int reduce(BitVec& v) const {
        for (size_t i = 0; i < rows_.size(); ++i)
            if (v.get(size_t(pivots_[i]))) v ^= rows_[i];
        return v.lowest_set();
    }

    bool contains(BitVec v) const { return reduce(v) < 0; }

    // Insert if independent; returns true when the rank grew.
    bool add(BitVec v) {
        int p = reduce(v);
        if (p < 0) return false;
        for (size_t i = 0; i < rows_.size(); ++i)
            if (rows_[i].get(size_t(p))) rows_[i] ^= v;
        size_t at = 0;
        while (at < pivots_.size() && pivots_[at] < p) ++at;
        rows_.insert(rows_.begin() + long(at), std::move(v));
        pivots_.insert(pivots_.begin() + long(at), p);
        return true;
    }

    const std::vector<BitVec>& rows() const { return rows_; }
    const std::vector<int>& pivots() const { return pivots_; }

private:
    size_t cols_;
    std::vector<BitVec> rows_;
    std::vector<int> pivots_;
};

// Solve A x = b over GF(2). Rows are given augmented (coefficients in
// [0, ncols), RHS at bit ncols). Pivots are chosen in ascending column order
// and free variables are set to zero, so the solution is deterministic.
inline std::optional<BitVec> gf2_solve(std::vector<BitVec>& aug, size_t ncols) {
    size_t r = 0;
    std::vector<std::pair<size_t, size_t>> pivots;  // (row, col)
    for (size_t c = 0; c < ncols && r < aug.size(); ++c) {
        size_t sel = r;
        while (sel < aug.size() && !aug[sel].get(c)) ++sel;
        if (sel == aug.size()) continue;
        std::swap(aug[r], aug[sel]);
        for (size_t i = 0; i < aug.size(); ++i)
            if (i != r && aug[i].get(c)) aug[i] ^= aug[r];
        pivots.emplace_back(r, c);
        ++r;
    }
    for (size_t i = r; i < aug.size(); ++i)
        if (aug[i].get(ncols)) return std::nullopt;
    BitVec x(ncols);
    for (auto [row, col] : pivots)
        if (aug[row].get(ncols)) x.set(col, true);
    return x;
}

}  // namespace qmem
