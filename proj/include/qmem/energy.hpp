#pragma once

// Syndrome-configuration energies: the pure stabilizer Hamiltonian and the
// interacting-anyon models (anyon-anyon pair potentials, anyon-vacuum gap).
// Interactions act per sector (X-type and Z-type checks independently) with
// minimum-image Euclidean distances on the torus; pair sums run over
// unordered pairs.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qmem/code.hpp"

namespace qmem {

enum class EnergyKind { Stabilizer, AnyonAnyon, AnyonVacuum };
enum class PairPotential { PowerLaw, Log };

struct EnergyModel {
    EnergyKind kind = EnergyKind::Stabilizer;
    double delta = 1.0;  // gap multiplier; energy per excitation is delta * code.mass
    double V = 0.0;
    double alpha = 0.0;
    PairPotential potential = PairPotential::PowerLaw;

    static EnergyModel stabilizer(double delta = 1.0) { return {EnergyKind::Stabilizer, delta, 0.0, 0.0, PairPotential::PowerLaw}; }
    static EnergyModel anyon_anyon(double delta, double V, double alpha, PairPotential u = PairPotential::PowerLaw) {
        return {EnergyKind::AnyonAnyon, delta, V, alpha, u};
    }
    static EnergyModel anyon_vacuum(double delta, double V, double alpha) {
        return {EnergyKind::AnyonVacuum, delta, V, alpha, PairPotential::PowerLaw};
    }
};

struct AnyonConfiguration {
    std::array<std::vector<int32_t>, 2> sector;  // violated checks, by check type

    static AnyonConfiguration from_syndrome(const StabilizerCode& code, const BitVec& violated) {
        AnyonConfiguration cfg;
        for (size_t c = 0; c < code.num_checks(); ++c)
            if (violated.get(c)) cfg.sector[size_t(code.check_type[c])].push_back(int32_t(c));
        return cfg;
    }

    size_t total() const { return sector[0].size() + sector[1].size(); }
};

inline int check_sector(const StabilizerCode& code, int32_t c) {
    CheckType t = code.check_type[size_t(c)];
    if (t == CheckType::Mixed) throw std::invalid_argument("interacting energy model needs CSS checks");
    return int(t);
}

inline double check_distance(const StabilizerCode& code, int32_t a, int32_t b) {
    return 0.5 * std::sqrt(double(code.min_image_dist2(code.check_coord[size_t(a)], code.check_coord[size_t(b)])));
}

inline double pair_potential_value(const EnergyModel& m, double r) {
    if (m.potential == PairPotential::Log) return std::log(r);
    return m.alpha == 0.0 ? 1.0 : std::pow(r, -m.alpha);
}

// Effective anyon gap mu_k = Delta + 4V sum_{k' != k} r^{-alpha}, summed over
// the other checks of k's sector.
inline double anyon_gap(const EnergyModel& m, const StabilizerCode& code, int32_t k) {
    double gap = m.delta * code.mass;
    if (m.kind != EnergyKind::AnyonVacuum) return gap;
    int sec = check_sector(code, k);
    double s = 0.0;
    for (size_t c = 0; c < code.num_checks(); ++c) {
        if (int32_t(c) == k || int(code.check_type[c]) != sec) continue;
        double r = check_distance(code, k, int32_t(c));
        s += m.alpha == 0.0 ? 1.0 : std::pow(r, -m.alpha);
    }
    return gap + 4.0 * m.V * s;
}

inline double total_energy(const EnergyModel& m, const StabilizerCode& code, const AnyonConfiguration& cfg) {
    double gap = m.delta * code.mass;
    if (m.kind == EnergyKind::Stabilizer) return gap * double(cfg.total());
    double e = 0.0;
    for (const auto& sec : cfg.sector) {
        for (size_t i = 0; i < sec.size(); ++i) {
            if (m.kind == EnergyKind::AnyonAnyon)
                e += gap;
            else
                e += anyon_gap(m, code, sec[i]);
            for (size_t j = i + 1; j < sec.size(); ++j) {
                double r = check_distance(code, sec[i], sec[j]);
                if (m.kind == EnergyKind::AnyonAnyon)
                    e += m.V * pair_potential_value(m, r);
                else
                    e -= 4.0 * m.V * (m.alpha == 0.0 ? 1.0 : std::pow(r, -m.alpha));
            }
        }
    }
    return e;
}

// Incremental energy bookkeeping for one evolving syndrome. For interacting
// kinds it maintains per-check field sums so that toggle costs are O(|toggle|^2).
class EnergyState {
public:
    EnergyState() = default;
    EnergyState(const StabilizerCode& code, const EnergyModel& model)
        : code_(&code), model_(model), violated_(code.num_checks(), 0) {
        if (model_.kind != EnergyKind::Stabilizer) {
            sector_.resize(code.num_checks());
            for (size_t c = 0; c < code.num_checks(); ++c) sector_[c] = uint8_t(check_sector(code, int32_t(c)));
            field_.assign(code.num_checks(), 0.0);
            if (model_.kind == EnergyKind::AnyonVacuum) {
                mu_.resize(code.num_checks());
                for (size_t c = 0; c < code.num_checks(); ++c) mu_[c] = anyon_gap(model_, code, int32_t(c));
            }
        }
    }

    const std::vector<uint8_t>& violated() const { return violated_; }
    bool is_violated(int32_t c) const { return violated_[size_t(c)] != 0; }
    size_t num_violated() const { return n_violated_; }
    double energy() const { return energy_; }
    const EnergyModel& model() const { return model_; }

    // Interaction term U used in pair sums: the chosen potential for the
    // anyon-anyon model, always the power law for anyon-vacuum attraction.
    double pair_term(int32_t a, int32_t b) const {
        double r = check_distance(*code_, a, b);
        if (model_.kind == EnergyKind::AnyonAnyon) return pair_potential_value(model_, r);
        return model_.alpha == 0.0 ? 1.0 : std::pow(r, -model_.alpha);
    }

    // Energy difference of toggling the given checks, without applying.
    double toggle_cost(std::span<const int32_t> toggled) const {
        double gap = model_.delta * code_->mass;
        if (model_.kind == EnergyKind::Stabilizer) {
            double d = 0.0;
            for (int32_t c : toggled) d += violated_[size_t(c)] ? -gap : gap;
            return d;
        }
        // Set form: with A the checks being violated and R those being
        // cleared, the pair-sum change is
        //   sum_A phi - U(A,R) + P(A) - sum_R phi + P(R),
        // where phi is the cached field from current anyons, U(A,R) the
        // cross sum and P(.) the internal unordered-pair sum.
        double pair_coef = model_.kind == EnergyKind::AnyonVacuum ? -4.0 * model_.V : model_.V;
        double onebody = 0.0, pairs = 0.0;
        for (size_t i = 0; i < toggled.size(); ++i) {
            int32_t c = toggled[i];
            bool removing = violated_[size_t(c)];
            double mu_c = model_.kind == EnergyKind::AnyonVacuum ? mu_[size_t(c)] : gap;
            onebody += removing ? -mu_c : mu_c;
            pairs += removing ? -field_[size_t(c)] : field_[size_t(c)];
            for (size_t j = i + 1; j < toggled.size(); ++j) {
                int32_t o = toggled[j];
                if (sector_[size_t(o)] != sector_[size_t(c)]) continue;
                bool removing_o = violated_[size_t(o)];
                double u = pair_term(c, o);
                if (removing == removing_o)
                    pairs += u;  // P(A) or P(R)
                else
                    pairs -= u;  // cross term U(A,R)
            }
        }
        return onebody + pair_coef * pairs;
    }

    void apply_toggle(std::span<const int32_t> toggled) {
        energy_ += toggle_cost(toggled);
        for (int32_t c : toggled) {
            bool was = violated_[size_t(c)];
            if (model_.kind != EnergyKind::Stabilizer) {
                double sign = was ? -1.0 : 1.0;
                for (size_t o = 0; o < violated_.size(); ++o) {
                    if (int32_t(o) == c || sector_[o] != sector_[size_t(c)]) continue;
                    field_[o] += sign * pair_term(int32_t(o), c);
                }
            }
            violated_[size_t(c)] = was ? 0 : 1;
            n_violated_ += was ? -1 : +1;
        }
    }

    void recompute() {
        n_violated_ = 0;
        BitVec bits(code_->num_checks());
        for (size_t c = 0; c < violated_.size(); ++c)
            if (violated_[c]) {
                bits.set(c, true);
                ++n_violated_;
            }
        auto cfg = AnyonConfiguration::from_syndrome(*code_, bits);
        energy_ = total_energy(model_, *code_, cfg);
        if (model_.kind != EnergyKind::Stabilizer) {
            std::fill(field_.begin(), field_.end(), 0.0);
            for (int s = 0; s < 2; ++s)
                for (int32_t a : cfg.sector[size_t(s)])
                    for (size_t c = 0; c < violated_.size(); ++c)
                        if (int32_t(c) != a && sector_[c] == uint8_t(s)) field_[c] += pair_term(int32_t(c), a);
        }
    }

private:
    const StabilizerCode* code_ = nullptr;
    EnergyModel model_;
    std::vector<uint8_t> violated_;
    std::vector<uint8_t> sector_;
    std::vector<double> field_;  // sum of pair terms from current anyons
    std::vector<double> mu_;     // cached anyon-vacuum gaps
    size_t n_violated_ = 0;
    double energy_ = 0.0;
};

// Spec-level helper: energy difference from toggling `flipped` on top of the
// configuration described by `violated`.
inline double delta_energy(const EnergyModel& m, const StabilizerCode& code,
                           const std::vector<uint8_t>& violated, std::span<const int32_t> flipped) {
    EnergyState st(code, m);
    std::vector<int32_t> init;
    for (size_t c = 0; c < violated.size(); ++c)
        if (violated[c]) init.push_back(int32_t(c));
    st.apply_toggle(init);
    return st.toggle_cost(flipped);
}

}  // namespace qmem
