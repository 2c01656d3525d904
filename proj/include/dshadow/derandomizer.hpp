// Copyright 2026 The dshadow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dshadow/ansatz.hpp"
#include "dshadow/clifford.hpp"
#include "dshadow/error.hpp"
#include "dshadow/parallel.hpp"
#include "dshadow/pauli.hpp"
#include "dshadow/weight.hpp"

namespace dshadow {

struct CostParams {
    double epsilon = 0.9;
    bool include_factor_two = true;
    /// Coverage mode only: number of measurements assumed in the product for
    /// not-yet-assigned shots. Defaults to N_O * |{P}|.
    std::optional<uint64_t> measurement_horizon;

    double exponent_scale() const { return epsilon * epsilon / 2; }
    double log_prefactor() const { return include_factor_two ? std::log(2.0) : 0.0; }
};

inline void validate(const CostParams &params) {
    require(params.epsilon > 0 && std::isfinite(params.epsilon), ErrorKind::domain, "epsilon must be positive");
}

enum class WeightSource { uniform, abs_coefficient, explicit_weights };

struct RunConfig {
    uint32_t d = 0;
    /// Fixed-budget mode.
    std::optional<uint64_t> shots;
    /// Coverage mode.
    std::optional<uint64_t> per_observable;
    /// Empty means default_slot_order(n, d).
    std::vector<SlotRef> slot_order;
    bool relaxed = false;
    WeightSource weights = WeightSource::uniform;
    /// 0 = hardware concurrency. Affects speed only.
    unsigned threads = 1;
    bool record_log = true;
};

/// h(P) = sum_i p_i(P), aligned with the Pauli set it was computed for.
struct HittingCounts {
    std::vector<PauliString> paulis;
    std::vector<double> h;

    double at(const PauliString &p) const {
        for (size_t i = 0; i < paulis.size(); i++) {
            if (paulis[i].same_masks(p)) {
                return h[i];
            }
        }
        throw Error(ErrorKind::domain, "Pauli '" + p.str() + "' not tracked");
    }
    double min() const {
        double m = std::numeric_limits<double>::infinity();
        for (double v : h) {
            m = std::min(m, v);
        }
        return m;
    }
};

struct RunLogEntry {
    uint64_t measurement = 0;
    SlotRef slot;
    uint8_t option = 0;
    double log_cost = 0;
};

struct DerandomizationResult {
    std::vector<EnsembleSpec> specs;
    HittingCounts hits;
    /// Last committed cost, natural log and value.
    double log_cost = 0;
    double cost = 0;
    /// The same cost recomputed from `hits` alone.
    double log_cost_from_hits = 0;
    std::vector<RunLogEntry> log;
};

/// Per-Pauli cost weights for `source`.
inline std::vector<double> cost_weights(const WeightedPauliSet &paulis, WeightSource source) {
    std::vector<double> w(paulis.size());
    for (size_t i = 0; i < paulis.size(); i++) {
        switch (source) {
            case WeightSource::uniform:
                w[i] = 1.0;
                break;
            case WeightSource::abs_coefficient:
                w[i] = std::abs(paulis[i].coefficient);
                break;
            case WeightSource::explicit_weights:
                w[i] = paulis[i].cost_weight;
                break;
        }
    }
    return w;
}

namespace detail {

/// log(sum_i exp(t_i)), -inf for an empty or all -inf input.
inline double log_sum_exp(const double *t, size_t count) {
    double mx = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < count; i++) {
        mx = std::max(mx, t[i]);
    }
    if (!std::isfinite(mx)) {
        return mx;
    }
    double s = 0;
    for (size_t i = 0; i < count; i++) {
        s += std::exp(t[i] - mx);
    }
    return mx + std::log(s);
}

inline double safe_log(double w) { return w > 0 ? std::log(w) : -std::numeric_limits<double>::infinity(); }

}  // namespace detail

/// log COST for hitting counts `h`: log( pref * sum_P w_P exp(-eps^2/2 h_P) ).
inline double log_cost_from_hits(const std::vector<double> &h, const std::vector<double> &weights,
                                 const CostParams &params) {
    validate(params);
    require(!h.empty(), ErrorKind::domain, "empty Pauli set");
    std::vector<double> t(h.size());
    const double a = params.exponent_scale();
    for (size_t i = 0; i < h.size(); i++) {
        t[i] = detail::safe_log(weights[i]) - a * h[i];
    }
    return params.log_prefactor() + detail::log_sum_exp(t.data(), t.size());
}

/// Hitting counts of `specs` on `paulis`.
inline HittingCounts hitting_counts(const std::vector<EnsembleSpec> &specs, const WeightedPauliSet &paulis) {
    HittingCounts hc;
    hc.h.assign(paulis.size(), 0.0);
    for (const auto &t : paulis) {
        hc.paulis.push_back(t.pauli);
    }
    for (const auto &spec : specs) {
        require(spec.n == paulis.num_qubits(), ErrorKind::dimension, "spec and Pauli set sizes differ");
        if (spec.is_deterministic()) {
            auto tableau = CliffordTableau::from_circuit(realize_fixed_circuit(spec));
            for (size_t i = 0; i < paulis.size(); i++) {
                hc.h[i] += tableau.apply(paulis[i].pauli).has_x() ? 0.0 : 1.0;
            }
        } else {
            ContractionPlan plan(spec, preferred_basis(spec));
            for (size_t i = 0; i < paulis.size(); i++) {
                hc.h[i] += plan.weight(paulis[i].pauli);
            }
        }
    }
    return hc;
}

/// COST(specs) = sum_P w_P * 2 * prod_i exp(-eps^2/2 p_i(P)), with w_P the
/// set's cost weights. Natural log; see `cost` for the value.
inline double log_cost(const std::vector<EnsembleSpec> &specs, const WeightedPauliSet &paulis,
                       const CostParams &params) {
    require(!paulis.empty(), ErrorKind::domain, "empty Pauli set");
    auto hc = hitting_counts(specs, paulis);
    return log_cost_from_hits(hc.h, cost_weights(paulis, WeightSource::explicit_weights), params);
}

inline double cost(const std::vector<EnsembleSpec> &specs, const WeightedPauliSet &paulis, const CostParams &params) {
    return std::exp(log_cost(specs, paulis, params));
}

namespace detail {

/// Greedy slot-by-slot derandomization state for one run.
class Derandomizer {
   public:
    Derandomizer(const WeightedPauliSet &paulis, const RunConfig &config, const CostParams &params)
        : paulis_(paulis), config_(config), params_(params), n_(static_cast<uint32_t>(paulis.num_qubits())) {
        validate(params);
        require(!paulis.empty(), ErrorKind::domain, "empty Pauli set");
        require(config.shots.has_value() != config.per_observable.has_value(), ErrorKind::domain,
                "exactly one of shots / per_observable must be set");
        order_ = config.slot_order.empty() ? default_slot_order(n_, config.d) : config.slot_order;
        validate_slot_order(order_, n_, config.d);
        weights_ = cost_weights(paulis, config.weights);
        log_w_.resize(weights_.size());
        for (size_t i = 0; i < weights_.size(); i++) {
            log_w_[i] = safe_log(weights_[i]);
        }
        a_ = params.exponent_scale();
        threads_ = resolve_threads(config.threads);
        h_.assign(paulis.size(), 0.0);

        // Weight under the fully random ensemble, used for every unassigned shot.
        EnsembleSpec zero = init_ensemble(n_, config.d);
        ContractionPlan plan(zero, Basis::signature);
        p_rand_.resize(paulis.size());
        for (size_t i = 0; i < paulis.size(); i++) {
            p_rand_[i] = plan.weight(paulis[i].pauli);
        }
    }

    /// log cost with every remaining shot random: the shallow-shadows value
    /// when nothing has been committed.
    double log_cost_all_random(uint64_t remaining_after_current) const {
        std::vector<double> t(active_.size());
        for (size_t j = 0; j < active_.size(); j++) {
            size_t i = active_[j];
            t[j] = log_w_[i] - a_ * (h_[i] + p_rand_[i] + double(remaining_after_current) * p_rand_[i]);
        }
        return params_.log_prefactor() + log_sum_exp(t.data(), t.size());
    }

    /// Committed value before the first slot of a fixed-budget run, i.e. the
    /// cost of N shallow-shadow shots.
    double initial_log_cost() {
        require(config_.shots.has_value() && *config_.shots >= 1, ErrorKind::domain,
                "shot budget must be at least 1");
        activate_all();
        return log_cost_all_random(*config_.shots - 1);
    }

    DerandomizationResult run_fixed() {
        uint64_t shots = *config_.shots;
        double committed = initial_log_cost();
        for (uint64_t j = 0; j < shots; j++) {
            committed = derandomize_one(j, shots - j - 1, committed);
        }
        return finish(committed);
    }

    DerandomizationResult run_covered() {
        uint64_t target = *config_.per_observable;
        require(target >= 1, ErrorKind::domain, "per-observable count must be at least 1");
        require(!config_.relaxed, ErrorKind::domain, "coverage mode needs deterministic measurements");
        uint64_t horizon = params_.measurement_horizon.value_or(target * paulis_.size());
        const uint64_t cap = target * paulis_.size();
        double committed = 0;
        for (uint64_t j = 0;; j++) {
            active_.clear();
            for (size_t i = 0; i < paulis_.size(); i++) {
                if (h_[i] < double(target)) {
                    active_.push_back(i);
                }
            }
            if (active_.empty()) {
                break;
            }
            require(j < cap, ErrorKind::internal, "coverage run exceeded N_O * |{P}| measurements");
            uint64_t future = horizon > j + 1 ? horizon - j - 1 : 0;
            std::vector<double> before(h_);
            committed = derandomize_one(j, future, log_cost_all_random(future));
            bool progress = false;
            for (size_t i : active_) {
                progress = progress || h_[i] > before[i];
            }
            require(progress, ErrorKind::internal, "measurement " + std::to_string(j) + " covers no open Pauli");
        }
        activate_all();
        return finish(committed);
    }

   private:
    struct Candidate {
        uint8_t option;
        EnsembleSpec spec;
        std::vector<double> block;
    };

    void activate_all() {
        active_.resize(paulis_.size());
        for (size_t i = 0; i < paulis_.size(); i++) {
            active_[i] = i;
        }
    }

    uint32_t block_of_slot(const SlotRef &slot) const {
        StaircaseGeometry geo(n_, config_.d);
        if (slot.kind == GateKind::two_qubit) {
            uint32_t lo = 2 * slot.position + ((config_.d - slot.layer) % 2);
            return geo.slice_of_gate(slot.layer, lo);
        }
        if (config_.d == 0) {
            return slot.position;
        }
        if (slot.layer <= config_.d) {
            return geo.slice_touching(slot.layer, slot.position);
        }
        return slot.position / 2;
    }

    /// env_[j] for active Pauli j: product of every block but k in cyclic
    /// order, so that p = tr(block_k * env).
    void build_env(uint32_t k) {
        const uint32_t D = plan_.bond_dim();
        const size_t dd = size_t{D} * D;
        const uint32_t blocks = plan_.num_blocks();
        env_.assign(active_.size() * dd, 0.0);
        parallel_chunks(active_.size(), threads_, 64, [&](size_t b, size_t e) {
            std::vector<double> tmp(dd);
            for (size_t j = b; j < e; j++) {
                const auto &p = paulis_[active_[j]].pauli;
                double *env = &env_[j * dd];
                if (D == 1) {
                    double v = 1;
                    for (uint32_t r = 0; r < blocks; r++) {
                        if (r != k) {
                            v *= *plan_.block(r, plan_.block_input(p, r));
                        }
                    }
                    env[0] = v;
                    continue;
                }
                bool first = true;
                for (uint32_t step = 1; step < blocks; step++) {
                    uint32_t r = (k + step) % blocks;
                    const double *m = plan_.block(r, plan_.block_input(p, r));
                    if (first) {
                        std::copy(m, m + dd, env);
                        first = false;
                    } else {
                        matmul(m, env, tmp.data(), D);
                        std::copy(tmp.begin(), tmp.end(), env);
                    }
                }
                if (first) {
                    for (uint32_t i = 0; i < D; i++) {
                        env[i * D + i] = 1;
                    }
                }
            }
        });
        env_block_ = k;
    }

    void ensure_plan(const EnsembleSpec &spec, Basis basis) {
        if (!plan_valid_ || plan_.basis() != basis) {
            plan_ = ContractionPlan(spec, basis);
            plan_valid_ = true;
            env_block_ = kNoBlock;
        }
    }

    /// Runs every slot of measurement `j` and returns the committed log cost.
    double derandomize_one(uint64_t j, uint64_t future, double committed) {
        EnsembleSpec spec = init_ensemble(n_, config_.d);
        plan_valid_ = false;
        std::vector<Candidate> cands;
        std::vector<double> pc;   // [option][active pauli]
        std::vector<double> terms;
        std::vector<double> fixed_part(active_.size());
        for (size_t jj = 0; jj < active_.size(); jj++) {
            size_t i = active_[jj];
            fixed_part[jj] = h_[i] + double(future) * p_rand_[i];
        }
        for (const auto &slot : order_) {
            Basis basis = (slot.kind == GateKind::two_qubit && spec.all_singles_twirled()) ? Basis::signature
                                                                                          : Basis::pauli;
            ensure_plan(spec, basis);
            uint32_t k = block_of_slot(slot);
            if (env_block_ != k) {
                build_env(k);
            }
            uint8_t current = get_slot(spec, slot);
            cands.clear();
            uint8_t first = config_.relaxed ? 0 : 1;
            for (uint8_t o = first; o <= max_code(slot.kind); o++) {
                if (config_.relaxed && o == current) {
                    // Keeping the slot: the committed value is reused exactly.
                    cands.push_back(Candidate{o, spec, {}});
                    continue;
                }
                Candidate c{o, assign(spec, slot, {slot.kind, o}), {}};
                plan_.build_slice(c.spec, k, c.block);
                cands.push_back(std::move(c));
            }
            evaluate(cands, k, pc);
            const size_t m = active_.size();
            terms.resize(m);
            size_t best = 0;
            double best_cost = std::numeric_limits<double>::infinity();
            for (size_t c = 0; c < cands.size(); c++) {
                double value;
                if (cands[c].block.empty()) {
                    value = committed;
                } else {
                    for (size_t jj = 0; jj < m; jj++) {
                        terms[jj] = log_w_[active_[jj]] - a_ * (fixed_part[jj] + pc[c * m + jj]);
                    }
                    value = params_.log_prefactor() + log_sum_exp(terms.data(), m);
                }
                // Strict '<' keeps the lowest option code on ties.
                if (value < best_cost) {
                    best_cost = value;
                    best = c;
                }
            }
            committed = best_cost;
            if (!cands[best].block.empty()) {
                spec = std::move(cands[best].spec);
                plan_.install_slice(k, cands[best].block);
            }
            if (config_.record_log) {
                log_.push_back(RunLogEntry{j, slot, cands[best].option, committed});
            }
        }
        // Commit this measurement's weights for every Pauli.
        ContractionPlan final_plan(spec, preferred_basis(spec));
        for (size_t i = 0; i < paulis_.size(); i++) {
            h_[i] += spec.is_deterministic() ? (diagonalizes_spec(spec, paulis_[i].pauli) ? 1.0 : 0.0)
                                             : final_plan.weight(paulis_[i].pauli);
        }
        specs_.push_back(std::move(spec));
        return committed;
    }

    bool diagonalizes_spec(const EnsembleSpec &spec, const PauliString &p) {
        if (tableau_owner_ != specs_.size()) {
            tableau_ = CliffordTableau::from_circuit(realize_fixed_circuit(spec));
            tableau_owner_ = specs_.size();
        }
        return !tableau_.apply(p).has_x();
    }

    /// pc[c * m + j] = p_cand for candidate c and active Pauli j.
    void evaluate(const std::vector<Candidate> &cands, uint32_t k, std::vector<double> &pc) {
        const size_t m = active_.size();
        const uint32_t D = plan_.bond_dim();
        const size_t dd = size_t{D} * D;
        pc.assign(cands.size() * m, 0.0);
        parallel_chunks(m, threads_, 64, [&](size_t b, size_t e) {
            for (size_t j = b; j < e; j++) {
                const auto &p = paulis_[active_[j]].pauli;
                uint32_t input = plan_.block_input(p, k);
                const double *env = &env_[j * dd];
                for (size_t c = 0; c < cands.size(); c++) {
                    if (cands[c].block.empty()) {
                        continue;
                    }
                    const double *blk = &cands[c].block[input * dd];
                    double acc = 0;
                    for (uint32_t beta = 0; beta < D; beta++) {
                        for (uint32_t alpha = 0; alpha < D; alpha++) {
                            acc += blk[beta * D + alpha] * env[alpha * D + beta];
                        }
                    }
                    pc[c * m + j] = acc;
                }
            }
        });
    }

    DerandomizationResult finish(double committed) {
        DerandomizationResult r;
        r.specs = std::move(specs_);
        r.hits.h = h_;
        for (const auto &t : paulis_) {
            r.hits.paulis.push_back(t.pauli);
        }
        r.log_cost = committed;
        r.cost = std::exp(committed);
        r.log_cost_from_hits = log_cost_from_hits(h_, weights_, params_);
        r.log = std::move(log_);
        return r;
    }

    static constexpr uint32_t kNoBlock = std::numeric_limits<uint32_t>::max();

    const WeightedPauliSet &paulis_;
    RunConfig config_;
    CostParams params_;
    uint32_t n_;
    std::vector<SlotRef> order_;
    std::vector<double> weights_, log_w_, p_rand_, h_;
    std::vector<size_t> active_;
    double a_ = 0;
    unsigned threads_ = 1;

    ContractionPlan plan_;
    bool plan_valid_ = false;
    std::vector<double> env_;
    uint32_t env_block_ = kNoBlock;

    CliffordTableau tableau_;
    size_t tableau_owner_ = std::numeric_limits<size_t>::max();

    std::vector<EnsembleSpec> specs_;
    std::vector<RunLogEntry> log_;
};

}  // namespace detail

/// Greedy derandomization with a fixed shot budget. Each slot takes the
/// option minimizing the cost with every later shot still random; ties go to
/// the lowest option code.
inline DerandomizationResult derandomize(const WeightedPauliSet &paulis, const RunConfig &config,
                                         const CostParams &params) {
    require(config.shots.has_value() && !config.per_observable.has_value(), ErrorKind::domain,
            "derandomize needs a shot budget");
    return detail::Derandomizer(paulis, config, params).run_fixed();
}

/// Appends derandomized measurements until every Pauli is measured at least
/// `per_observable` times. Covered Paulis leave the cost sum.
inline DerandomizationResult derandomize_until_covered(const WeightedPauliSet &paulis, uint64_t per_observable,
                                                       RunConfig config, const CostParams &params) {
    config.per_observable = per_observable;
    config.shots.reset();
    return detail::Derandomizer(paulis, config, params).run_covered();
}

struct DominanceCheck {
    double log_cost_dss = 0;
    double log_cost_shallow = 0;
    double cost_dss = 0;
    double cost_shallow = 0;
    DerandomizationResult result;
};

/// Relaxed run next to the cost of N shallow-shadow shots. Throws an internal
/// error if the relaxed cost exceeds the shallow one.
inline DominanceCheck relaxed_dominates_shallow_check(const WeightedPauliSet &paulis, RunConfig config,
                                                      const CostParams &params) {
    require(config.relaxed, ErrorKind::domain, "dominance check needs relaxed mode");
    require(config.shots.has_value() && *config.shots >= 1, ErrorKind::domain, "dominance check needs a shot budget");
    DominanceCheck out;
    out.log_cost_shallow = detail::Derandomizer(paulis, config, params).initial_log_cost();
    out.result = derandomize(paulis, config, params);
    out.log_cost_dss = out.result.log_cost;
    out.cost_dss = std::exp(out.log_cost_dss);
    out.cost_shallow = std::exp(out.log_cost_shallow);
    require(out.log_cost_dss <= out.log_cost_shallow, ErrorKind::internal, "relaxed cost exceeds shallow-shadow cost");
    return out;
}

/// Tab-separated run log: measurement, slot kind, layer, position, option,
/// log cost, cost.
inline void write_run_log(std::ostream &out, const std::vector<RunLogEntry> &log) {
    out << "measurement\tkind\tlayer\tposition\toption\tlog_cost\tcost\n";
    char buf[64];
    for (const auto &e : log) {
        out << e.measurement << '\t' << (e.slot.kind == GateKind::two_qubit ? "two" : "single") << '\t' << e.slot.layer
            << '\t' << e.slot.position << '\t' << int(e.option) << '\t';
        std::snprintf(buf, sizeof buf, "%.17g", e.log_cost);
        out << buf << '\t';
        std::snprintf(buf, sizeof buf, "%.17g", std::exp(e.log_cost));
        out << buf << '\n';
    }
}

}  // namespace dshadow
