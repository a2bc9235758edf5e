#pragma once

// Rejection-free event-driven kinetic Monte Carlo for a stabilizer code in a
// thermal bath: single-qubit Pauli events, rates from the bath rate equation,
// exponential waiting times. The stabilizer-Hamiltonian path keeps events in
// buckets keyed by (degree, integer energy step); interacting energy models
// fall back to a cumulative rate table over all events.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmem/code.hpp"
#include "qmem/energy.hpp"
#include "qmem/rng.hpp"

namespace qmem {

// Bath rate gamma(omega) = omega / (1 - e^{-beta omega}) with the sign
// convention omega = -(E_after - E_before): uphill events carry omega < 0.
// Branches keep it finite at omega = 0 and underflow-safe deep uphill.
inline double gamma_rate(double omega, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("gamma_rate: beta must be positive");
    double x = beta * omega;
    if (std::abs(x) < 1e-6) return 1.0 / beta + omega / 2.0;
    if (x < -30.0) return -omega * std::exp(x);
    return omega / (-std::expm1(-x));
}

struct EventSet {
    bool x = true, y = true, z = true;

    static EventSet all() { return {true, true, true}; }
    static EventSet xz() { return {true, false, true}; }
    static EventSet only_x() { return {true, false, false}; }
    static EventSet only_z() { return {false, false, true}; }

    int count() const { return int(x) + int(y) + int(z); }
    std::vector<Pauli> kinds() const {
        std::vector<Pauli> k;
        if (x) k.push_back(Pauli::X);
        if (y) k.push_back(Pauli::Y);
        if (z) k.push_back(Pauli::Z);
        return k;
    }
    std::string label() const {
        std::string s;
        if (x) s += 'X';
        if (y) s += 'Y';
        if (z) s += 'Z';
        return s;
    }
};

// Static per-(code, event set) tables: toggled checks per event, reverse map,
// and the logical-class bits each event flips.
struct EventTables {
    const StabilizerCode* code = nullptr;
    std::vector<Pauli> kinds;
    int nk = 0;
    size_t num_events = 0;
    std::vector<int32_t> tog_off, tog_dat;  // event -> toggled checks
    std::vector<int32_t> rev_off, rev_dat;  // check -> events touching it
    std::vector<uint32_t> class_mask;       // event -> logical class bits flipped
    int max_deg = 0;
    bool pair_trackable = true;  // every event toggles <= 2 checks per sector

    std::span<const int32_t> toggled(size_t eid) const {
        return {tog_dat.data() + tog_off[eid], size_t(tog_off[eid + 1] - tog_off[eid])};
    }
    std::span<const int32_t> events_of_check(size_t c) const {
        return {rev_dat.data() + rev_off[c], size_t(rev_off[c + 1] - rev_off[c])};
    }
    size_t qubit_of(size_t eid) const { return eid / size_t(nk); }
    Pauli kind_of(size_t eid) const { return kinds[eid % size_t(nk)]; }
};

inline EventTables build_event_tables(const StabilizerCode& code, EventSet set) {
    EventTables t;
    t.code = &code;
    t.kinds = set.kinds();
    t.nk = int(t.kinds.size());
    if (t.nk == 0) throw std::invalid_argument("event set is empty");
    t.num_events = code.n * size_t(t.nk);

    const auto& rows = code.checks.rows();
    t.tog_off.assign(t.num_events + 1, 0);
    std::vector<std::vector<int32_t>> tog(t.num_events);
    for (size_t q = 0; q < code.n; ++q)
        for (int k = 0; k < t.nk; ++k) {
            size_t eid = q * size_t(t.nk) + size_t(k);
            for (int32_t c : code.qubit_to_checks[q])
                if (check_anticommutes_single(rows[size_t(c)], q, t.kinds[size_t(k)])) tog[eid].push_back(c);
        }
    size_t total = 0;
    for (size_t e = 0; e < t.num_events; ++e) {
        t.tog_off[e] = int32_t(total);
        total += tog[e].size();
        t.max_deg = std::max(t.max_deg, int(tog[e].size()));
    }
    t.tog_off[t.num_events] = int32_t(total);
    t.tog_dat.reserve(total);
    for (auto& v : tog) t.tog_dat.insert(t.tog_dat.end(), v.begin(), v.end());

    std::vector<int32_t> cnt(code.num_checks() + 1, 0);
    for (int32_t c : t.tog_dat) cnt[size_t(c)]++;
    t.rev_off.assign(code.num_checks() + 1, 0);
    for (size_t c = 0; c < code.num_checks(); ++c) t.rev_off[c + 1] = t.rev_off[c] + cnt[c];
    t.rev_dat.assign(total, 0);
    std::vector<int32_t> cur(t.rev_off.begin(), t.rev_off.end() - 1);
    for (size_t e = 0; e < t.num_events; ++e)
        for (int32_t c : tog[e]) t.rev_dat[size_t(cur[size_t(c)]++)] = int32_t(e);

    t.class_mask.assign(t.num_events, 0);
    for (size_t q = 0; q < code.n; ++q)
        for (int k = 0; k < t.nk; ++k) {
            uint32_t m = 0;
            for (size_t j = 0; j < code.num_logical_generators(); ++j)
                if (check_anticommutes_single(code.logical_generator(j), q, t.kinds[size_t(k)])) m |= 1u << j;
            t.class_mask[q * size_t(t.nk) + size_t(k)] = m;
        }

    for (size_t e = 0; e < t.num_events && t.pair_trackable; ++e) {
        int per_sector[2] = {0, 0};
        for (int32_t c : t.toggled(e)) {
            CheckType ct = code.check_type[size_t(c)];
            if (ct == CheckType::Mixed) {
                t.pair_trackable = false;
                break;
            }
            if (++per_sector[int(ct)] > 2) {
                t.pair_trackable = false;
                break;
            }
        }
    }
    return t;
}

// Creation-pair bookkeeping: each live anyon points at its pair; pairs merge
// when anyons from two different pairs fuse.
class PairTracker {
public:
    struct Pair {
        int32_t a = -1, b = -1;
        double t_created = 0.0;
        bool alive = false;
    };

    void reset(size_t num_checks) {
        anyon_pair_.assign(num_checks, -1);
        pairs_.clear();
        live_ = 0;
    }

    void on_new_pair(int32_t p, int32_t q, double t) {
        int32_t id = int32_t(pairs_.size());
        pairs_.push_back({p, q, t, true});
        anyon_pair_[size_t(p)] = id;
        anyon_pair_[size_t(q)] = id;
        ++live_;
    }

    void on_move(int32_t from, int32_t to) {
        int32_t id = anyon_pair_[size_t(from)];
        anyon_pair_[size_t(from)] = -1;
        anyon_pair_[size_t(to)] = id;
        auto& pr = pairs_[size_t(id)];
        (pr.a == from ? pr.a : pr.b) = to;
    }

    void on_annihilate(int32_t p, int32_t q, double /*t*/) {
        int32_t ip = anyon_pair_[size_t(p)], iq = anyon_pair_[size_t(q)];
        anyon_pair_[size_t(p)] = anyon_pair_[size_t(q)] = -1;
        if (ip == iq) {
            pairs_[size_t(ip)].alive = false;
            --live_;
            return;
        }
        // Fusion across pairs: the two survivors become one extended pair
        // carrying the earlier creation time.
        auto& A = pairs_[size_t(ip)];
        auto& B = pairs_[size_t(iq)];
        int32_t sa = (A.a == p) ? A.b : A.a;
        int32_t sb = (B.a == q) ? B.b : B.a;
        A.alive = B.alive = false;
        live_ -= 2;
        on_new_pair(sa, sb, std::min(A.t_created, B.t_created));
    }

    int32_t live_count() const { return live_; }
    const std::vector<Pair>& pairs() const { return pairs_; }
    int32_t pair_of(int32_t anyon) const { return anyon_pair_[size_t(anyon)]; }

    template <class DistFn>
    void separation_stats(DistFn dist, double& mean, double& maxv) const {
        mean = 0.0;
        maxv = 0.0;
        int n = 0;
        for (const auto& pr : pairs_) {
            if (!pr.alive) continue;
            double d = dist(pr.a, pr.b);
            mean += d;
            maxv = std::max(maxv, d);
            ++n;
        }
        if (n > 0) mean /= n;
    }

    // Live pair with the largest separation (failure attribution).
    template <class DistFn>
    const Pair* widest_pair(DistFn dist) const {
        const Pair* best = nullptr;
        double bd = -1.0;
        for (const auto& pr : pairs_) {
            if (!pr.alive) continue;
            double d = dist(pr.a, pr.b);
            if (d > bd) {
                bd = d;
                best = &pr;
            }
        }
        return best;
    }

private:
    std::vector<int32_t> anyon_pair_;
    std::vector<Pair> pairs_;
    int32_t live_ = 0;
};

struct KmcParams {
    double beta = 1.0;
    EnergyModel model;
    EventSet events = EventSet::all();
    bool forbid_creation = false;  // zero the rate of events whose toggled checks are all satisfied
    bool track_pairs = true;
    bool log_events = false;
};

struct StepResult {
    double dt = 0.0;
    int32_t qubit = -1;
    Pauli kind = Pauli::I;
    double omega = 0.0;
    size_t eid = 0;
};

struct RateEntry {
    int32_t qubit;
    Pauli kind;
    double omega;
    double rate;
};

class SyndromeState {
public:
    SyndromeState(const StabilizerCode& code, const EventTables& tables, const KmcParams& prm,
                  const PauliOperator* initial_frame = nullptr)
        : code_(&code), tab_(&tables), prm_(prm), frame_x_(code.n), frame_z_(code.n),
          estate_(code, prm.model) {
        fast_ = prm_.model.kind == EnergyKind::Stabilizer;
        gap_ = prm_.model.delta * code.mass;
        pair_tracking_ = prm_.track_pairs && tab_->pair_trackable;
        if (pair_tracking_) tracker_.reset(code.num_checks());
        vlist_pos_.assign(code.num_checks(), -1);

        if (initial_frame) {
            if (initial_frame->num_qubits() != code.n) throw std::invalid_argument("initial frame dimension mismatch");
            BitVec syn = syndrome_bits(code, *initial_frame);
            std::vector<int32_t> on;
            for (size_t c = 0; c < code.num_checks(); ++c)
                if (syn.get(c)) on.push_back(int32_t(c));
            estate_.apply_toggle(on);
            for (int32_t c : on) violated_list_toggle(c, false);
            for (size_t q = 0; q < code.n; ++q) {
                if (initial_frame->x_bit(q)) frame_x_.set(q, true);
                if (initial_frame->z_bit(q)) frame_z_.set(q, true);
            }
            frame_class_ = logical_class_bits(code, *initial_frame);
            if (pair_tracking_ && !on.empty()) {
                // Seed bookkeeping: group initial anyons per sector into pairs
                // in index order (protocols seed at most one pair per sector).
                std::array<std::vector<int32_t>, 2> by_sec;
                for (int32_t c : on) by_sec[size_t(code.check_type[size_t(c)])].push_back(c);
                for (auto& v : by_sec)
                    for (size_t i = 0; i + 1 < v.size(); i += 2) tracker_.on_new_pair(v[i], v[i + 1], 0.0);
            }
        }

        if (fast_) {
            init_buckets();
        } else {
            omega_.assign(tab_->num_events, 0.0);
            cum_.assign(tab_->num_events, 0.0);
            refresh_interacting_rates();
        }
    }

    const StabilizerCode& code() const { return *code_; }
    const EventTables& tables() const { return *tab_; }
    const KmcParams& params() const { return prm_; }
    double time() const { return t_; }
    uint64_t num_events() const { return n_applied_; }
    double energy() const { return fast_ ? gap_ * double(estate_.num_violated()) : estate_.energy(); }
    size_t num_violated() const { return estate_.num_violated(); }
    bool is_violated(int32_t c) const { return estate_.is_violated(c); }
    const std::vector<int32_t>& violated_list() const { return vlist_; }
    uint32_t frame_class() const { return frame_class_; }
    const BitVec& frame_x() const { return frame_x_; }
    const BitVec& frame_z() const { return frame_z_; }
    const PairTracker& pairs() const { return tracker_; }
    bool pair_tracking() const { return pair_tracking_; }
    const std::vector<StepResult>& event_log() const { return log_; }

    PauliOperator frame() const {
        PauliOperator p(code_->n);
        for (size_t q = 0; q < code_->n; ++q) {
            bool x = frame_x_.get(q), z = frame_z_.get(q);
            if (x && z)
                p.set_factor(q, Pauli::Y);
            else if (x)
                p.set_factor(q, Pauli::X);
            else if (z)
                p.set_factor(q, Pauli::Z);
        }
        return p;
    }

    BitVec violated_bits() const {
        BitVec v(code_->num_checks());
        for (size_t c = 0; c < code_->num_checks(); ++c)
            if (estate_.is_violated(int32_t(c))) v.set(c, true);
        return v;
    }

    double anyon_distance(int32_t a, int32_t b) const {
        return check_distance(*code_, a, b);
    }

    // Total rate, recomputed exactly from the bucket counts every step so the
    // waiting-time parameter never drifts.
    double total_rate() const {
        if (fast_) {
            double r = 0.0;
            for (size_t k = 0; k < buckets_.size(); ++k)
                if (!buckets_[k].empty()) r += double(buckets_[k].size()) * key_rate_[k];
            return r;
        }
        return cum_.empty() ? 0.0 : cum_.back();
    }

    std::vector<RateEntry> enumerate_rates() const {
        std::vector<RateEntry> out;
        out.reserve(tab_->num_events);
        for (size_t e = 0; e < tab_->num_events; ++e) {
            double w, r;
            if (fast_) {
                int dE = event_dE_[e];
                int deg = int(tab_->toggled(e).size());
                w = -gap_ * double(dE);
                r = key_rate_[key_of(deg, dE)];
            } else {
                w = omega_[e];
                r = gamma_rate(w, prm_.beta);
                if (prm_.forbid_creation && creation_event(e)) r = 0.0;
            }
            out.push_back({int32_t(tab_->qubit_of(e)), tab_->kind_of(e), w, r});
        }
        return out;
    }

    // One KMC step: waiting time from the total rate, event from the bucket
    // distribution. Throws on a stuck chain (R = 0).
    StepResult step(Rng& rng) {
        double R = total_rate();
        if (!(R > 0.0)) throw std::runtime_error("kmc engine fault: total rate vanished");
        double dt = rng.exponential(R);
        return apply_sampled_event(t_ + dt, rng);
    }

    // Draw a waiting time and event without mutating the state (test probe).
    StepResult sample_only(Rng& rng) const {
        double R = total_rate();
        if (!(R > 0.0)) throw std::runtime_error("kmc engine fault: total rate vanished");
        double dt = rng.exponential(R);
        size_t eid = sample_event(rng, R);
        return {dt, int32_t(tab_->qubit_of(eid)), tab_->kind_of(eid), event_omega(eid), eid};
    }

    // Applies one sampled event at the given absolute time; the waiting time
    // was drawn by the caller (lets the driver interleave checkpoints).
    StepResult apply_sampled_event(double t_next, Rng& rng) {
        double R = total_rate();
        if (!(R > 0.0)) throw std::runtime_error("kmc engine fault: total rate vanished");
        size_t eid = sample_event(rng, R);
        double w = event_omega(eid);
        double dt = t_next - t_;
        apply_event(eid, t_next);
        StepResult res{dt, int32_t(tab_->qubit_of(eid)), tab_->kind_of(eid), w, eid};
        if (prm_.log_events) log_.push_back(res);
        return res;
    }

    double event_omega(size_t eid) const {
        if (fast_) return -gap_ * double(event_dE_[eid]);
        return omega_[eid];
    }

    // Recompute all cached quantities from scratch and compare; throws on
    // mismatch beyond tolerance. Used by consistency tests and paranoia runs.
    void verify_consistency() const {
        PauliOperator f = frame();
        BitVec syn = syndrome_bits(*code_, f);
        for (size_t c = 0; c < code_->num_checks(); ++c)
            if (syn.get(c) != estate_.is_violated(int32_t(c)))
                throw std::runtime_error("kmc consistency: violated set mismatch");
        if (logical_class_bits(*code_, f) != frame_class_)
            throw std::runtime_error("kmc consistency: class bits mismatch");
        if (fast_) {
            for (size_t e = 0; e < tab_->num_events; ++e) {
                int dE = 0;
                for (int32_t c : tab_->toggled(e)) dE += estate_.is_violated(c) ? -1 : +1;
                if (dE != event_dE_[e]) throw std::runtime_error("kmc consistency: event delta mismatch");
            }
        } else {
            EnergyState fresh(*code_, prm_.model);
            std::vector<int32_t> on;
            for (size_t c = 0; c < code_->num_checks(); ++c)
                if (estate_.is_violated(int32_t(c))) on.push_back(int32_t(c));
            fresh.apply_toggle(on);
            for (size_t e = 0; e < tab_->num_events; ++e) {
                double w = -fresh.toggle_cost(tab_->toggled(e));
                if (std::abs(w - omega_[e]) > 1e-9 * std::max(1.0, std::abs(w)))
                    throw std::runtime_error("kmc consistency: omega mismatch");
            }
            if (std::abs(fresh.energy() - estate_.energy()) > 1e-9 * std::max(1.0, std::abs(fresh.energy())))
                throw std::runtime_error("kmc consistency: energy mismatch");
        }
    }

private:
    size_t key_of(int deg, int dE) const { return size_t(deg) * stride_ + size_t(dE + tab_->max_deg); }

    bool creation_event(size_t e) const {
        for (int32_t c : tab_->toggled(e))
            if (estate_.is_violated(c)) return false;
        return !tab_->toggled(e).empty();
    }

    void init_buckets() {
        stride_ = size_t(2 * tab_->max_deg + 1);
        size_t nkeys = size_t(tab_->max_deg + 1) * stride_;
        buckets_.assign(nkeys, {});
        key_rate_.assign(nkeys, 0.0);
        for (int deg = 0; deg <= tab_->max_deg; ++deg)
            for (int dE = -deg; dE <= deg; ++dE) {
                double r = gamma_rate(-gap_ * double(dE), prm_.beta);
                if (prm_.forbid_creation && deg > 0 && dE == deg) r = 0.0;
                key_rate_[key_of(deg, dE)] = r;
            }
        event_dE_.assign(tab_->num_events, 0);
        event_key_.assign(tab_->num_events, 0);
        event_pos_.assign(tab_->num_events, 0);
        for (size_t e = 0; e < tab_->num_events; ++e) {
            int dE = 0;
            for (int32_t c : tab_->toggled(e)) dE += estate_.is_violated(c) ? -1 : +1;
            event_dE_[e] = int16_t(dE);
            size_t key = key_of(int(tab_->toggled(e).size()), dE);
            event_key_[e] = uint16_t(key);
            event_pos_[e] = int32_t(buckets_[key].size());
            buckets_[key].push_back(int32_t(e));
        }
    }

    void bucket_move(size_t e, size_t newkey) {
        size_t oldkey = event_key_[e];
        auto& ob = buckets_[oldkey];
        int32_t pos = event_pos_[e];
        int32_t last = ob.back();
        ob[size_t(pos)] = last;
        event_pos_[size_t(last)] = pos;
        ob.pop_back();
        event_key_[e] = uint16_t(newkey);
        event_pos_[e] = int32_t(buckets_[newkey].size());
        buckets_[newkey].push_back(int32_t(e));
    }

    size_t sample_event(Rng& rng, double R) const {
        double u = rng.uniform() * R;
        if (fast_) {
            double acc = 0.0;
            size_t last_nonempty = SIZE_MAX;
            for (size_t k = 0; k < buckets_.size(); ++k) {
                if (buckets_[k].empty() || key_rate_[k] <= 0.0) continue;
                last_nonempty = k;
                double w = double(buckets_[k].size()) * key_rate_[k];
                if (u < acc + w) {
                    size_t idx = size_t((u - acc) / key_rate_[k]);
                    if (idx >= buckets_[k].size()) idx = buckets_[k].size() - 1;
                    return size_t(buckets_[k][idx]);
                }
                acc += w;
            }
            // Floating-point edge: fall back to the last usable bucket.
            if (last_nonempty == SIZE_MAX) throw std::runtime_error("kmc engine fault: no selectable event");
            return size_t(buckets_[last_nonempty].back());
        }
        size_t lo = size_t(std::upper_bound(cum_.begin(), cum_.end(), u) - cum_.begin());
        if (lo >= cum_.size()) lo = cum_.size() - 1;
        // Skip zero-rate entries the search may have landed past.
        while (lo + 1 < cum_.size() && event_rate_interacting(lo) <= 0.0) ++lo;
        return lo;
    }

    double event_rate_interacting(size_t e) const {
        double r = gamma_rate(omega_[e], prm_.beta);
        if (prm_.forbid_creation && creation_event(e)) r = 0.0;
        return r;
    }

    void refresh_interacting_rates() {
        double acc = 0.0;
        for (size_t e = 0; e < tab_->num_events; ++e) {
            omega_[e] = -estate_.toggle_cost(tab_->toggled(e));
            acc += event_rate_interacting(e);
            cum_[e] = acc;
        }
    }

    void apply_event(size_t eid, double t_next) {
        auto toggled = tab_->toggled(eid);

        // Pair bookkeeping wants before-status.
        if (pair_tracking_) {
            std::array<std::array<int32_t, 2>, 2> on{{{-1, -1}, {-1, -1}}}, off{{{-1, -1}, {-1, -1}}};
            std::array<int, 2> non = {0, 0}, noff = {0, 0};
            for (int32_t c : toggled) {
                int s = int(code_->check_type[size_t(c)]);
                if (estate_.is_violated(c))
                    off[size_t(s)][size_t(noff[size_t(s)]++)] = c;
                else
                    on[size_t(s)][size_t(non[size_t(s)]++)] = c;
            }
            double tev = t_next;
            for (int s = 0; s < 2; ++s) {
                if (non[s] == 1 && noff[s] == 1)
                    tracker_.on_move(off[size_t(s)][0], on[size_t(s)][0]);
                else if (non[s] == 2 && noff[s] == 0)
                    tracker_.on_new_pair(on[size_t(s)][0], on[size_t(s)][1], tev);
                else if (non[s] == 0 && noff[s] == 2)
                    tracker_.on_annihilate(off[size_t(s)][0], off[size_t(s)][1], tev);
            }
        }

        if (fast_) {
            for (int32_t c : toggled) {
                bool was = estate_.is_violated(c);
                int shift = was ? +2 : -2;  // contribution of c to each event's delta flips sign
                estate_.apply_toggle(std::span<const int32_t>(&c, 1));
                violated_list_toggle(c, was);
                for (int32_t e2 : tab_->events_of_check(size_t(c))) {
                    int nd = event_dE_[size_t(e2)] + shift;
                    event_dE_[size_t(e2)] = int16_t(nd);
                    bucket_move(size_t(e2), key_of(int(tab_->toggled(size_t(e2)).size()), nd));
                }
            }
        } else {
            for (int32_t c : toggled) violated_list_toggle(c, estate_.is_violated(c));
            estate_.apply_toggle(toggled);
            refresh_interacting_rates();
        }

        size_t q = tab_->qubit_of(eid);
        Pauli k = tab_->kind_of(eid);
        if (k == Pauli::X || k == Pauli::Y) frame_x_.flip(q);
        if (k == Pauli::Z || k == Pauli::Y) frame_z_.flip(q);
        frame_class_ ^= tab_->class_mask[eid];
        t_ = t_next;
        ++n_applied_;
    }

    void violated_list_toggle(int32_t c, bool was_violated) {
        if (was_violated) {
            int32_t pos = vlist_pos_[size_t(c)];
            int32_t last = vlist_.back();
            vlist_[size_t(pos)] = last;
            vlist_pos_[size_t(last)] = pos;
            vlist_.pop_back();
            vlist_pos_[size_t(c)] = -1;
        } else {
            vlist_pos_[size_t(c)] = int32_t(vlist_.size());
            vlist_.push_back(c);
        }
    }

    const StabilizerCode* code_;
    const EventTables* tab_;
    KmcParams prm_;
    BitVec frame_x_, frame_z_;
    uint32_t frame_class_ = 0;
    EnergyState estate_;
    std::vector<int32_t> vlist_;
    std::vector<int32_t> vlist_pos_;
    double gap_ = 1.0;
    bool fast_ = true;
    double t_ = 0.0;
    uint64_t n_applied_ = 0;

    // stabilizer fast path
    size_t stride_ = 1;
    std::vector<std::vector<int32_t>> buckets_;
    std::vector<double> key_rate_;
    std::vector<int16_t> event_dE_;
    std::vector<uint16_t> event_key_;
    std::vector<int32_t> event_pos_;

    // interacting path
    std::vector<double> omega_, cum_;

    bool pair_tracking_ = false;
    PairTracker tracker_;
    std::vector<StepResult> log_;
};

}  // namespace qmem
