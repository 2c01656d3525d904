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
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dshadow/ansatz.hpp"
#include "dshadow/clifford.hpp"
#include "dshadow/error.hpp"
#include "dshadow/pauli.hpp"
#include "dshadow/statevector.hpp"

namespace dshadow {

/// 2 exp(-eps^2 h / 2). Values above 1 are returned unclipped.
inline double confidence_bound(double h, double epsilon) {
    require(h >= 0, ErrorKind::domain, "hit count must be non-negative");
    require(epsilon > 0, ErrorKind::domain, "epsilon must be positive");
    return 2 * std::exp(-epsilon * epsilon * h / 2);
}

/// Precision reached with confidence 1 - delta after h hits.
inline double precision_for_confidence(double h, double delta) {
    require(h > 0, ErrorKind::domain, "precision undefined for a Pauli with no hits");
    require(delta > 0 && delta < 1, ErrorKind::domain, "delta must lie in (0, 1)");
    return std::sqrt(2 * std::log(2 / delta) / h);
}

/// Worst-case variance of N times the estimator, N / h.
inline double variance_bound(uint64_t shots, double h) {
    require(h > 0, ErrorKind::domain, "variance bound undefined for a Pauli with no hits");
    return double(shots) / h;
}

inline double mse(double true_value, const std::vector<double> &estimates) {
    require(!estimates.empty(), ErrorKind::domain, "mse of an empty list");
    double acc = 0;
    for (double e : estimates) {
        acc += (true_value - e) * (true_value - e);
    }
    return acc / double(estimates.size());
}

/// Per-circuit tableaux, built once and reused for every Pauli.
class CircuitBank {
   public:
    explicit CircuitBank(const std::vector<Circuit> &circuits) {
        require(!circuits.empty(), ErrorKind::domain, "no circuits");
        n_ = circuits.front().n;
        tableaux_.reserve(circuits.size());
        for (const auto &c : circuits) {
            require(c.n == n_, ErrorKind::dimension, "circuits act on different qubit counts");
            tableaux_.push_back(CliffordTableau::from_circuit(c));
        }
    }

    uint32_t num_qubits() const { return n_; }
    size_t size() const { return tableaux_.size(); }
    const CliffordTableau &operator[](size_t i) const { return tableaux_[i]; }

   private:
    uint32_t n_ = 0;
    std::vector<CliffordTableau> tableaux_;
};

struct PauliTally {
    uint64_t hits = 0;
    int64_t sum = 0;  // sum of the +-1 single-shot values

    double estimate() const { return hits == 0 ? 0.0 : double(sum) / double(hits); }
};

/// Single-shot value of P on record `r`: the sign of U P U^dag times the
/// parity of the measured bits on its Z support. nullopt if U does not
/// diagonalize P.
inline std::optional<int> shot_value(const CliffordTableau &t, const MeasurementRecord &r, const PauliString &p) {
    PauliString img = t.apply(p);
    if (img.has_x()) {
        return std::nullopt;
    }
    require(img.phase == 0 || img.phase == 2, ErrorKind::internal, "Clifford image of a Hermitian Pauli is not Hermitian");
    int v = img.phase == 0 ? 1 : -1;
    for (size_t k = 0; k < img.n; k++) {
        if (img.z(k) && r.bits[k] == '1') {
            v = -v;
        }
    }
    return v;
}

inline void check_records(const CircuitBank &bank, const std::vector<MeasurementRecord> &records) {
    for (const auto &r : records) {
        require(r.circuit_index < bank.size(), ErrorKind::dimension,
                "record refers to circuit " + std::to_string(r.circuit_index) + " of " + std::to_string(bank.size()));
        require(r.bits.size() == bank.num_qubits(), ErrorKind::dimension, "record bit count differs from qubit count");
    }
}

inline PauliTally tally(const CircuitBank &bank, const std::vector<MeasurementRecord> &records, const PauliString &p) {
    require(p.n == bank.num_qubits(), ErrorKind::dimension, "Pauli and circuit sizes differ");
    PauliTally out;
    for (const auto &r : records) {
        if (auto v = shot_value(bank[r.circuit_index], r, p)) {
            out.hits++;
            out.sum += *v;
        }
    }
    return out;
}

/// Empirical mean of the single-shot values over the circuits that
/// diagonalize P; 0 when none do.
inline double estimate(const std::vector<Circuit> &circuits, const std::vector<MeasurementRecord> &records,
                       const PauliString &p) {
    CircuitBank bank(circuits);
    check_records(bank, records);
    return tally(bank, records, p).estimate();
}

struct PauliRow {
    PauliString pauli;
    double coefficient = 0;
    double estimate = 0;
    uint64_t hits = 0;
    double confidence = 0;
    bool vacuous = false;
    /// N / h, or +inf with no hits.
    double variance_bound = 0;
    std::optional<double> true_value;
};

struct ScalarEstimate {
    double value = 0;
    /// eps * sum |c_P|, holding with probability at least 1 - final_cost.
    double error_bound = 0;
    double final_cost = 0;
    std::optional<double> true_value;
    std::optional<double> mse;
};

struct EstimationReport {
    uint64_t shots = 0;
    double epsilon = 0;
    std::vector<PauliRow> rows;
    ScalarEstimate scalar;

    size_t flagged() const {
        size_t k = 0;
        for (const auto &r : rows) {
            k += r.hits == 0;
        }
        return k;
    }
};

/// sum_P c_P o(P) over `terms`, each looked up in `report`.
inline ScalarEstimate estimate_scalar(const WeightedPauliSet &terms, const EstimationReport &report) {
    ScalarEstimate s;
    double abs_sum = 0;
    for (const auto &t : terms) {
        const PauliRow *row = nullptr;
        for (const auto &r : report.rows) {
            if (r.pauli.same_masks(t.pauli)) {
                row = &r;
                break;
            }
        }
        require(row != nullptr, ErrorKind::domain, "term " + t.pauli.str() + " missing from report");
        s.value += t.coefficient * row->estimate;
        abs_sum += std::abs(t.coefficient);
    }
    s.error_bound = report.epsilon * abs_sum;
    double total = 0;
    for (const auto &r : report.rows) {
        total += r.confidence;
    }
    s.final_cost = total;
    return s;
}

/// Estimates, hit counts and bounds for every term of `paulis`, plus the
/// recombined scalar sum_P c_P o(P).
inline EstimationReport build_report(const std::vector<Circuit> &circuits,
                                     const std::vector<MeasurementRecord> &records, const WeightedPauliSet &paulis,
                                     double epsilon) {
    require(epsilon > 0, ErrorKind::domain, "epsilon must be positive");
    CircuitBank bank(circuits);
    check_records(bank, records);
    require(paulis.num_qubits() == bank.num_qubits(), ErrorKind::dimension, "Pauli set and circuit sizes differ");
    EstimationReport rep;
    rep.shots = records.size();
    rep.epsilon = epsilon;
    for (const auto &t : paulis) {
        auto tl = tally(bank, records, t.pauli);
        PauliRow row;
        row.pauli = t.pauli;
        row.coefficient = t.coefficient;
        row.hits = tl.hits;
        row.estimate = tl.estimate();
        row.confidence = confidence_bound(double(tl.hits), epsilon);
        row.vacuous = row.confidence > 1;
        row.variance_bound =
            tl.hits == 0 ? std::numeric_limits<double>::infinity() : variance_bound(rep.shots, double(tl.hits));
        rep.rows.push_back(std::move(row));
    }
    rep.scalar = estimate_scalar(paulis, rep);
    return rep;
}

/// Attaches exact per-Pauli values and the exact scalar.
inline void attach_truth(EstimationReport &rep, const std::vector<double> &values) {
    require(values.size() == rep.rows.size(), ErrorKind::dimension, "true-value count differs from report rows");
    double scalar = 0;
    for (size_t i = 0; i < values.size(); i++) {
        rep.rows[i].true_value = values[i];
        scalar += rep.rows[i].coefficient * values[i];
    }
    rep.scalar.true_value = scalar;
}

/// One shot per circuit; shot i uses stream i of `seed`.
inline std::vector<MeasurementRecord> simulate(const std::vector<Circuit> &circuits, const StateVector &state,
                                               uint64_t seed) {
    std::vector<MeasurementRecord> out;
    out.reserve(circuits.size());
    for (size_t i = 0; i < circuits.size(); i++) {
        require(circuits[i].n == state.n, ErrorKind::dimension, "circuit and state sizes differ");
        out.push_back(sample_measurement(circuits[i], state, seed, i));
    }
    return out;
}

/// Same draws as `simulate`, with one rotated state per distinct circuit.
/// Circuits from derandomization repeat heavily, so this is the fast path for
/// repeated simulations.
class RepeatedSimulator {
   public:
    RepeatedSimulator(const std::vector<Circuit> &circuits, const StateVector &state) {
        std::vector<std::pair<std::vector<Gate>, size_t>> seen;
        for (const auto &c : circuits) {
            require(c.n == state.n, ErrorKind::dimension, "circuit and state sizes differ");
            size_t id = seen.size();
            for (const auto &[gates, k] : seen) {
                if (gates == c.gates) {
                    id = k;
                    break;
                }
            }
            if (id == seen.size()) {
                seen.emplace_back(c.gates, id);
                samplers_.emplace_back(apply_circuit(c, state));
            }
            which_.push_back(id);
        }
    }

    std::vector<MeasurementRecord> run(uint64_t seed) const {
        std::vector<MeasurementRecord> out;
        out.reserve(which_.size());
        for (size_t i = 0; i < which_.size(); i++) {
            auto rng = make_stream(seed, i);
            out.push_back(MeasurementRecord{i, samplers_[which_[i]].draw(rng)});
        }
        return out;
    }

    size_t distinct() const { return samplers_.size(); }

   private:
    std::vector<OutcomeSampler> samplers_;
    std::vector<size_t> which_;
};

}  // namespace dshadow
