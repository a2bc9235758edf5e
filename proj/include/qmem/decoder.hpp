#pragma once

// Clustering decoder. Violated checks start in unit boxes; boxes whose
// members come within Chebyshev distance r merge; each box tries to
// neutralize itself with a correction supported strictly inside the box that
// reproduces exactly the enclosed violations and leaves every other check
// touching the box clean. Neutral boxes freeze and leave the search; r
// doubles each round until everything is neutral (at worst one box covers
// the lattice). CSS sectors decode independently.
//
// Neutralization runs through a box-restricted GF(2) solve with a fixed
// pivot order. Sectors whose single-qubit errors always toggle exactly two
// sector checks one lattice step apart (the toric code's string sectors)
// take an equivalent fast route: members pair up greedily and are joined by
// axis-ordered paths, which is a deterministic solution of the same
// box-restricted system.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "qmem/code.hpp"

namespace qmem {

struct ClusterBox {
    Coord lo{}, hi{};  // inclusive, doubled units, possibly unwrapped
    bool full_axis[kMaxDim] = {false, false, false, false};
    std::vector<int32_t> checks;
    bool neutral = false;
};

struct DecoderResult {
    PauliOperator correction;
    int rounds = 0;
    int final_radius = 0;  // lattice units
    std::vector<int> per_round_clusters;
};

struct SparseCorrection {
    std::vector<std::pair<int32_t, Pauli>> ops;  // XOR semantics; repeats cancel
    uint32_t class_bits = 0;
    int rounds = 0;
    int final_radius = 0;
    std::vector<int> per_round_clusters;
};

class ClusterDecoder {
public:
    explicit ClusterDecoder(const StabilizerCode& code) : code_(&code) {
        check_member_.assign(code.num_checks(), 0);
        cand_stamp_.assign(code.num_checks(), 0);
        qubit_xvar_.assign(code.n, -1);
        qubit_zvar_.assign(code.n, -1);
        toggle_stamp_.assign(code.n, 0);
        toggle_parity_x_.assign(code.n, 0);
        toggle_parity_z_.assign(code.n, 0);
        class_mask_x_.assign(code.n, 0);
        class_mask_z_.assign(code.n, 0);
        for (size_t q = 0; q < code.n; ++q) {
            uint32_t mx = 0, mz = 0;
            for (size_t j = 0; j < code.num_logical_generators(); ++j) {
                if (check_anticommutes_single(code.logical_generator(j), q, Pauli::X)) mx |= 1u << j;
                if (check_anticommutes_single(code.logical_generator(j), q, Pauli::Z)) mz |= 1u << j;
            }
            class_mask_x_[q] = mx;
            class_mask_z_[q] = mz;
        }
        css_ = true;
        for (auto t : code.check_type)
            if (t == CheckType::Mixed) css_ = false;
        if (css_) {
            build_string_moves(0, Pauli::Z);  // X-type checks are toggled by Z errors
            build_string_moves(1, Pauli::X);  // Z-type checks by X errors
        }
    }

    const StabilizerCode& code() const { return *code_; }

    // Disable the string-pairing route (cross-validation against the generic
    // GF(2) solver).
    void force_generic(bool on) { force_generic_ = on; }

    SparseCorrection decode_sparse(std::span<const int32_t> violated) {
        SparseCorrection out;
        if (violated.empty()) return out;
        if (css_) {
            std::array<std::vector<int32_t>, 2> by_sec;
            for (int32_t c : violated) by_sec[size_t(code_->check_type[size_t(c)])].push_back(c);
            for (int s = 0; s < 2; ++s)
                if (!by_sec[size_t(s)].empty()) decode_group(by_sec[size_t(s)], s, out);
        } else {
            std::vector<int32_t> v(violated.begin(), violated.end());
            decode_group(v, -1, out);
        }
        return out;
    }

    DecoderResult decode(const BitVec& violated_bits) {
        std::vector<int32_t> v;
        for (size_t c = 0; c < code_->num_checks(); ++c)
            if (violated_bits.get(c)) v.push_back(int32_t(c));
        SparseCorrection sc = decode_sparse(v);
        DecoderResult r;
        r.correction = PauliOperator(code_->n);
        for (auto [q, p] : sc.ops) r.correction.toggle(size_t(q), p);
        r.rounds = sc.rounds;
        r.final_radius = sc.final_radius;
        r.per_round_clusters = sc.per_round_clusters;
        return r;
    }

private:
    struct Item {
        int32_t check;
        Coord coord;
        Coord unwrapped;  // anchor-relative, rebuilt per round
    };

    struct StringStep {
        int32_t check = -1;
        int32_t qubit = -1;
    };

    // sector -> per check, 2*dim entries (axis, direction) of unit-step moves
    struct StringMoves {
        bool available = false;
        Pauli kind = Pauli::I;
        std::vector<StringStep> steps;  // [check * 2*dim + 2*axis + dir]
    };

    void build_string_moves(int sector, Pauli kind) {
        StringMoves& sm = moves_[size_t(sector)];
        sm.kind = kind;
        sm.available = false;
        if (code_->dim == 0) return;
        const auto& rows = code_->checks.rows();
        size_t stride = size_t(2 * code_->dim);
        sm.steps.assign(code_->num_checks() * stride, StringStep{});
        for (size_t q = 0; q < code_->n; ++q) {
            int32_t hit[3];
            int nh = 0;
            for (int32_t c : code_->qubit_to_checks[q]) {
                if (int(code_->check_type[size_t(c)]) != sector) continue;
                if (!check_anticommutes_single(rows[size_t(c)], q, kind)) continue;
                if (nh < 3) hit[nh] = c;
                ++nh;
            }
            if (nh == 0) continue;
            if (nh != 2) return;  // not a string sector
            const Coord &a = code_->check_coord[size_t(hit[0])], &b = code_->check_coord[size_t(hit[1])];
            int axis = -1, dir = 0, nonzero = 0;
            for (int d = 0; d < code_->dim; ++d) {
                int32_t dd = wrap_delta(b[d] - a[d], code_->period[d]);
                if (dd != 0) {
                    ++nonzero;
                    axis = d;
                    dir = dd > 0 ? 0 : 1;
                    if (dd != 2 && dd != -2) return;
                }
            }
            if (nonzero != 1) return;
            sm.steps[size_t(hit[0]) * stride + size_t(2 * axis + dir)] = {hit[1], int32_t(q)};
            sm.steps[size_t(hit[1]) * stride + size_t(2 * axis + (1 - dir))] = {hit[0], int32_t(q)};
        }
        // Complete only if every sector check has all its axis neighbors.
        for (size_t c = 0; c < code_->num_checks(); ++c) {
            if (int(code_->check_type[c]) != sector) continue;
            for (size_t k = 0; k < stride; ++k)
                if (sm.steps[c * stride + k].check < 0) return;
        }
        sm.available = true;
    }

    int find(int i) {
        while (uf_parent_[size_t(i)] != i) {
            uf_parent_[size_t(i)] = uf_parent_[size_t(uf_parent_[size_t(i)])];
            i = uf_parent_[size_t(i)];
        }
        return i;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        uf_parent_[size_t(b)] = a;
    }

    void decode_group(std::vector<int32_t>& violated, int sector, SparseCorrection& out) {
        std::sort(violated.begin(), violated.end());
        const size_t m = violated.size();
        items_.clear();
        items_.reserve(m);
        for (int32_t c : violated) items_.push_back({c, code_->check_coord[size_t(c)], {}});
        uf_parent_.resize(m);
        for (size_t i = 0; i < m; ++i) uf_parent_[i] = int(i);
        std::vector<uint8_t> frozen(m, 0);

        bool strings = sector >= 0 && moves_[size_t(sector)].available && !force_generic_;

        int32_t max_period = 2;
        for (int d = 0; d < code_->dim; ++d) max_period = std::max(max_period, code_->period[d]);

        int rounds = out.rounds;
        int32_t r_d = 2;
        for (;;) {
            ++rounds;
            // Merge active items within Chebyshev distance r_d via a grid.
            grid_.clear();
            for (size_t i = 0; i < m; ++i)
                if (!frozen[i]) grid_[grid_key(items_[i].coord, r_d)].push_back(int32_t(i));
            for (size_t i = 0; i < m; ++i) {
                if (frozen[i]) continue;
                visit_neighbor_cells(items_[i].coord, r_d, [&](int64_t key) {
                    auto it = grid_.find(key);
                    if (it == grid_.end()) return;
                    for (int32_t j : it->second)
                        if (size_t(j) > i && code_->chebyshev(items_[i].coord, items_[size_t(j)].coord) <= r_d)
                            unite(int(i), j);
                });
            }

            cluster_of_.assign(m, -1);
            clusters_.clear();
            for (size_t i = 0; i < m; ++i) {
                if (frozen[i]) continue;
                int root = find(int(i));
                if (cluster_of_[size_t(root)] < 0) {
                    cluster_of_[size_t(root)] = int32_t(clusters_.size());
                    clusters_.emplace_back();
                }
                clusters_[size_t(cluster_of_[size_t(root)])].push_back(int32_t(i));
            }
            out.per_round_clusters.push_back(int(clusters_.size()));
            if (clusters_.empty()) break;

            bool all_neutral = true;
            for (auto& cl : clusters_) {
                bool ok;
                if (strings) {
                    ok = neutralize_strings(cl, sector, r_d, out);
                } else {
                    ClusterBox small = cluster_box(cl, std::min<int32_t>(r_d, 4));
                    ok = try_neutralize(small, out);
                    if (!ok && r_d > 4) {
                        ClusterBox big = cluster_box(cl, r_d);
                        ok = try_neutralize(big, out);
                    }
                }
                if (ok)
                    for (int32_t i : cl) frozen[size_t(i)] = 1;
                else
                    all_neutral = false;
            }
            out.rounds = rounds;
            out.final_radius = int(r_d / 2);
            if (all_neutral) break;
            if (r_d >= 2 * max_period)
                throw std::runtime_error("cluster_decode: inconsistent syndrome (no correction at full radius)");
            r_d *= 2;
        }
    }

    int64_t grid_key(const Coord& c, int32_t cell) const {
        int64_t key = 0;
        for (int d = 0; d < code_->dim; ++d) key = key * 4096 + (c[d] / cell);
        return key;
    }

    template <class Fn>
    void visit_neighbor_cells(const Coord& c, int32_t cell, Fn&& fn) const {
        if (code_->dim == 0) {
            fn(0);
            return;
        }
        int ncell[kMaxDim], span[kMaxDim];
        int total = 1;
        for (int d = 0; d < code_->dim; ++d) {
            ncell[d] = (code_->period[d] + cell - 1) / cell;
            span[d] = ncell[d] >= 3 ? 3 : ncell[d];
            total *= span[d];
        }
        for (int idx = 0; idx < total; ++idx) {
            int rem = idx;
            int cc[kMaxDim];
            for (int d = 0; d < code_->dim; ++d) {
                int off = rem % span[d] - 1;
                rem /= span[d];
                cc[d] = c[d] / cell + off;
                cc[d] = (cc[d] % ncell[d] + ncell[d]) % ncell[d];
            }
            int64_t key = 0;
            for (int d = 0; d < code_->dim; ++d) key = key * 4096 + cc[d];
            fn(key);
        }
    }

    // Anchor-relative bounding box, padded; an axis saturates to the full
    // period once the padded extent covers it.
    ClusterBox cluster_box(const std::vector<int32_t>& members, int32_t pad) {
        ClusterBox box;
        box.checks.reserve(members.size());
        for (int32_t i : members) box.checks.push_back(items_[size_t(i)].check);
        if (code_->dim == 0) return box;
        const Coord anchor = items_[size_t(members[0])].coord;
        Coord mn{0, 0, 0, 0}, mx{0, 0, 0, 0};
        for (int32_t i : members) {
            auto& it = items_[size_t(i)];
            for (int d = 0; d < code_->dim; ++d) {
                int32_t delta = wrap_delta(it.coord[d] - anchor[d], code_->period[d]);
                it.unwrapped[d] = anchor[d] + delta;
                mn[d] = std::min(mn[d], delta);
                mx[d] = std::max(mx[d], delta);
            }
        }
        for (int d = 0; d < code_->dim; ++d) {
            if (mx[d] - mn[d] + 2 * pad + 1 >= code_->period[d]) {
                box.full_axis[d] = true;
                box.lo[d] = 0;
                box.hi[d] = code_->period[d] - 1;
            } else {
                box.lo[d] = anchor[d] + mn[d] - pad;
                box.hi[d] = anchor[d] + mx[d] + pad;
            }
        }
        return box;
    }

    // String-sector route: members pair up greedily (deterministic order) and
    // are joined by axis-ordered unit-step paths inside the cluster box.
    bool neutralize_strings(const std::vector<int32_t>& members, int sector, int32_t r_d, SparseCorrection& out) {
        if (members.size() % 2 != 0) return false;
        ClusterBox box = cluster_box(members, r_d);  // fills unwrapped coords

        const StringMoves& sm = moves_[size_t(sector)];
        size_t stride = size_t(2 * code_->dim);
        ++toggle_gen_;
        touched_.clear();

        std::vector<int32_t> left(members.begin(), members.end());
        std::sort(left.begin(), left.end());  // item indices; ascending = by check id order
        std::vector<uint8_t> used(left.size(), 0);
        for (size_t i = 0; i < left.size(); ++i) {
            if (used[i]) continue;
            used[i] = 1;
            const Item& A = items_[size_t(left[i])];
            // nearest unused partner; ties resolved by position (lowest id)
            size_t best = SIZE_MAX;
            int64_t bd = 0;
            for (size_t j = i + 1; j < left.size(); ++j) {
                if (used[j]) continue;
                const Item& B = items_[size_t(left[j])];
                int64_t d2 = 0;
                for (int d = 0; d < code_->dim; ++d) {
                    int64_t dd = box.full_axis[d] ? wrap_delta(B.coord[d] - A.coord[d], code_->period[d])
                                                  : B.unwrapped[d] - A.unwrapped[d];
                    d2 += dd * dd;
                }
                if (best == SIZE_MAX || d2 < bd) {
                    best = j;
                    bd = d2;
                }
            }
            used[best] = 1;
            const Item& B = items_[size_t(left[best])];

            int32_t cur = A.check;
            for (int d = 0; d < code_->dim; ++d) {
                int32_t delta = box.full_axis[d] ? wrap_delta(B.coord[d] - A.coord[d], code_->period[d])
                                                 : int32_t(B.unwrapped[d] - A.unwrapped[d]);
                int dir = delta > 0 ? 0 : 1;
                for (int32_t s = 0; s < std::abs(delta) / 2; ++s) {
                    const StringStep& st = sm.steps[size_t(cur) * stride + size_t(2 * d + dir)];
                    record_toggle(st.qubit, sm.kind);
                    cur = st.check;
                }
            }
            if (cur != B.check) throw std::runtime_error("cluster_decode: string path bookkeeping error");
        }
        emit_toggles(sm.kind, out);
        return true;
    }

    void record_toggle(int32_t q, Pauli kind) {
        auto& par = (kind == Pauli::X) ? toggle_parity_x_ : toggle_parity_z_;
        if (toggle_stamp_[size_t(q)] != toggle_gen_) {
            toggle_stamp_[size_t(q)] = toggle_gen_;
            toggle_parity_x_[size_t(q)] = 0;
            toggle_parity_z_[size_t(q)] = 0;
            touched_.push_back(q);
        }
        par[size_t(q)] ^= 1;
    }

    void emit_toggles(Pauli kind, SparseCorrection& out) {
        std::sort(touched_.begin(), touched_.end());
        for (int32_t q : touched_) {
            if (kind == Pauli::X && toggle_parity_x_[size_t(q)]) {
                out.ops.emplace_back(q, Pauli::X);
                out.class_bits ^= class_mask_x_[size_t(q)];
            }
            if (kind == Pauli::Z && toggle_parity_z_[size_t(q)]) {
                out.ops.emplace_back(q, Pauli::Z);
                out.class_bits ^= class_mask_z_[size_t(q)];
            }
        }
    }

    bool try_neutralize(const ClusterBox& box, SparseCorrection& out) {
        box_qubits_.clear();
        if (code_->dim == 0) {
            for (size_t q = 0; q < code_->n; ++q) box_qubits_.push_back(int32_t(q));
        } else {
            Coord c{0, 0, 0, 0};
            collect_box_qubits(box, 0, c);
        }
        if (box_qubits_.empty()) return false;

        ++member_gen_;
        for (int32_t c : box.checks) check_member_[size_t(c)] = member_gen_;

        bool need_x = false, need_z = false;
        candidate_checks_.clear();
        ++cand_gen_;
        for (int32_t q : box_qubits_) {
            for (int32_t c : code_->qubit_to_checks[size_t(q)]) {
                if (cand_stamp_[size_t(c)] == cand_gen_) continue;
                cand_stamp_[size_t(c)] = cand_gen_;
                candidate_checks_.push_back(c);
                CheckType t = code_->check_type[size_t(c)];
                if (t != CheckType::X) need_x = true;  // Z or Mixed content reacts to X errors
                if (t != CheckType::Z) need_z = true;
            }
        }
        std::sort(candidate_checks_.begin(), candidate_checks_.end());

        size_t nv = 0;
        for (int32_t q : box_qubits_) {
            qubit_xvar_[size_t(q)] = need_x ? int32_t(nv++) : -1;
            qubit_zvar_[size_t(q)] = need_z ? int32_t(nv++) : -1;
        }

        rows_.clear();
        const auto& checks = code_->checks.rows();
        for (int32_t c : candidate_checks_) {
            BitVec row(nv + 1);
            bool nonzero = false;
            const auto& chk = checks[size_t(c)];
            for (int32_t q : box_qubits_) {
                if (chk.z_bit(size_t(q)) && qubit_xvar_[size_t(q)] >= 0) {
                    row.flip(size_t(qubit_xvar_[size_t(q)]));
                    nonzero = true;
                }
                if (chk.x_bit(size_t(q)) && qubit_zvar_[size_t(q)] >= 0) {
                    row.flip(size_t(qubit_zvar_[size_t(q)]));
                    nonzero = true;
                }
            }
            bool member = check_member_[size_t(c)] == member_gen_;
            if (member) row.set(nv, true);
            if (nonzero || member) rows_.push_back(std::move(row));
        }

        auto sol = gf2_solve(rows_, nv);
        if (!sol) return false;
        for (int32_t q : box_qubits_) {
            if (qubit_xvar_[size_t(q)] >= 0 && sol->get(size_t(qubit_xvar_[size_t(q)]))) {
                out.ops.emplace_back(q, Pauli::X);
                out.class_bits ^= class_mask_x_[size_t(q)];
            }
            if (qubit_zvar_[size_t(q)] >= 0 && sol->get(size_t(qubit_zvar_[size_t(q)]))) {
                out.ops.emplace_back(q, Pauli::Z);
                out.class_bits ^= class_mask_z_[size_t(q)];
            }
        }
        return true;
    }

    void collect_box_qubits(const ClusterBox& box, int d, Coord& c) {
        if (d == code_->dim) {
            int64_t cell = code_->cell_index(code_->wrap(c));
            for (int32_t i = code_->cell_qubit_off[size_t(cell)]; i < code_->cell_qubit_off[size_t(cell) + 1]; ++i)
                box_qubits_.push_back(code_->cell_qubit_dat[size_t(i)]);
            return;
        }
        for (int32_t v = box.lo[d]; v <= box.hi[d]; ++v) {
            c[d] = v;
            collect_box_qubits(box, d + 1, c);
        }
    }

    const StabilizerCode* code_;
    bool css_ = true;
    bool force_generic_ = false;
    std::array<StringMoves, 2> moves_;

    std::vector<Item> items_;
    std::vector<int> uf_parent_;
    std::vector<int32_t> cluster_of_;
    std::vector<std::vector<int32_t>> clusters_;
    std::unordered_map<int64_t, std::vector<int32_t>> grid_;

    std::vector<int32_t> box_qubits_;
    std::vector<int32_t> candidate_checks_;
    std::vector<BitVec> rows_;
    std::vector<uint32_t> check_member_, cand_stamp_;
    uint32_t member_gen_ = 0, cand_gen_ = 0;
    std::vector<int32_t> qubit_xvar_, qubit_zvar_;

    std::vector<uint32_t> toggle_stamp_;
    std::vector<uint8_t> toggle_parity_x_, toggle_parity_z_;
    std::vector<int32_t> touched_;
    uint32_t toggle_gen_ = 0;

    std::vector<uint32_t> class_mask_x_, class_mask_z_;
};

// Direct box-feasibility probe: GF(2) solve over the qubits inside the given
// (doubled-coordinate) bounds for a correction matching exactly the enclosed
// violations, clean on every check touching the box.
inline std::optional<PauliOperator> box_neutral(const StabilizerCode& code,
                                                const std::vector<int32_t>& enclosed_violated, const Coord& lo,
                                                const Coord& hi) {
    std::vector<int32_t> qubits;
    if (code.dim == 0) {
        for (size_t q = 0; q < code.n; ++q) qubits.push_back(int32_t(q));
    } else {
        struct Rec {
            const StabilizerCode& code;
            const Coord& lo;
            const Coord& hi;
            std::vector<int32_t>& out;
            void go(int d, Coord& cc) {
                if (d == code.dim) {
                    int64_t cell = code.cell_index(code.wrap(cc));
                    for (int32_t i = code.cell_qubit_off[size_t(cell)]; i < code.cell_qubit_off[size_t(cell) + 1]; ++i)
                        out.push_back(code.cell_qubit_dat[size_t(i)]);
                    return;
                }
                for (int32_t v = lo[d]; v <= hi[d]; ++v) {
                    cc[d] = v;
                    go(d + 1, cc);
                }
            }
        } rec{code, lo, hi, qubits};
        Coord c{0, 0, 0, 0};
        rec.go(0, c);
    }

    std::vector<int8_t> member(code.num_checks(), 0);
    for (int32_t v : enclosed_violated) member[size_t(v)] = 1;
    std::vector<int32_t> cand;
    std::vector<int8_t> seen(code.num_checks(), 0);
    for (int32_t q : qubits)
        for (int32_t ch : code.qubit_to_checks[size_t(q)])
            if (!seen[size_t(ch)]) {
                seen[size_t(ch)] = 1;
                cand.push_back(ch);
            }
    std::sort(cand.begin(), cand.end());

    std::vector<int32_t> xvar(code.n, -1), zvar(code.n, -1);
    size_t nv = 0;
    for (int32_t q : qubits) {
        xvar[size_t(q)] = int32_t(nv++);
        zvar[size_t(q)] = int32_t(nv++);
    }
    std::vector<BitVec> rows;
    const auto& checks = code.checks.rows();
    for (int32_t ch : cand) {
        BitVec row(nv + 1);
        for (int32_t q : qubits) {
            if (checks[size_t(ch)].z_bit(size_t(q))) row.flip(size_t(xvar[size_t(q)]));
            if (checks[size_t(ch)].x_bit(size_t(q))) row.flip(size_t(zvar[size_t(q)]));
        }
        if (member[size_t(ch)]) row.set(nv, true);
        rows.push_back(std::move(row));
    }
    auto sol = gf2_solve(rows, nv);
    if (!sol) return std::nullopt;
    PauliOperator corr(code.n);
    for (int32_t q : qubits) {
        bool xs = sol->get(size_t(xvar[size_t(q)]));
        bool zs = sol->get(size_t(zvar[size_t(q)]));
        if (xs && zs)
            corr.set_factor(size_t(q), Pauli::Y);
        else if (xs)
            corr.set_factor(size_t(q), Pauli::X);
        else if (zs)
            corr.set_factor(size_t(q), Pauli::Z);
    }
    return corr;
}

}  // namespace qmem
