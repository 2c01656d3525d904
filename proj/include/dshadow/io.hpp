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

// File formats shared by the CLI and tests: circuit JSON, outcome TSV,
// state files, slot-order files and report JSON / CSV.

#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "dshadow/ansatz.hpp"
#include "dshadow/estimator.hpp"
#include "dshadow/statevector.hpp"
#include "json.hpp"

namespace dshadow {

using json = nlohmann::ordered_json;

inline std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    require(bool(in), ErrorKind::parse, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json parse_json_text(const std::string &text, const std::string &source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw Error(ErrorKind::parse, source + ": " + e.what());
    }
}

// ---- circuits -------------------------------------------------------------

/// {n, d, t, s, gates}; gates only for deterministic specs.
inline json spec_to_json(const EnsembleSpec &spec) {
    json j;
    j["n"] = spec.n;
    j["d"] = spec.d;
    j["t"] = spec.t;
    j["s"] = spec.s;
    if (spec.is_deterministic()) {
        json gates = json::array();
        for (const auto &g : realize_fixed_circuit(spec).gates) {
            gates.push_back({{"layer", g.layer}, {"qubits", g.qubits}, {"name", g.name}});
        }
        j["gates"] = std::move(gates);
    }
    return j;
}

inline EnsembleSpec spec_from_json(const json &j) {
    try {
        EnsembleSpec spec = init_ensemble(j.at("n").get<uint32_t>(), j.at("d").get<uint32_t>());
        auto t = j.at("t").get<std::vector<int>>();
        auto s = j.at("s").get<std::vector<int>>();
        require(t.size() == spec.t.size() && s.size() == spec.s.size(), ErrorKind::parse,
                "circuit code arrays do not match n and d");
        for (size_t k = 0; k < t.size(); k++) {
            require(t[k] >= 0 && t[k] < kNumTwoQubitCodes, ErrorKind::parse, "bad two-qubit code");
            spec.t[k] = static_cast<uint8_t>(t[k]);
        }
        for (size_t k = 0; k < s.size(); k++) {
            require(s[k] >= 0 && s[k] < kNumSingleQubitCodes, ErrorKind::parse, "bad single-qubit code");
            spec.s[k] = static_cast<uint8_t>(s[k]);
        }
        return spec;
    } catch (const json::exception &e) {
        throw Error(ErrorKind::parse, std::string("circuit entry: ") + e.what());
    }
}

/// Reads the "circuits" array of a circuit file.
inline std::vector<EnsembleSpec> read_circuit_file(const std::string &path) {
    json doc = parse_json_text(read_text_file(path), path);
    require(doc.is_object() && doc.contains("circuits") && doc["circuits"].is_array(), ErrorKind::parse,
            path + ": missing \"circuits\" array");
    std::vector<EnsembleSpec> out;
    for (const auto &c : doc["circuits"]) {
        out.push_back(spec_from_json(c));
    }
    require(!out.empty(), ErrorKind::parse, path + ": no circuits");
    for (const auto &s : out) {
        require(s.n == out.front().n, ErrorKind::dimension, path + ": circuits act on different qubit counts");
    }
    return out;
}

// ---- outcomes ---------------------------------------------------------------

/// Writes `index \t bits` lines. Lines starting with '#' are comments.
inline void write_outcomes(std::ostream &out, const std::vector<MeasurementRecord> &records) {
    for (const auto &r : records) {
        out << r.circuit_index << '\t' << r.bits << '\n';
    }
}

inline std::vector<MeasurementRecord> read_outcomes(std::istream &in, const std::string &source) {
    std::vector<MeasurementRecord> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        auto tab = line.find('\t');
        auto where = source + ":" + std::to_string(lineno);
        require(tab != std::string::npos, ErrorKind::parse, where + ": expected 'index<TAB>bits'");
        MeasurementRecord r;
        try {
            size_t used = 0;
            r.circuit_index = std::stoull(line.substr(0, tab), &used);
            require(used == tab, ErrorKind::parse, where + ": bad circuit index");
        } catch (const std::logic_error &) {
            throw Error(ErrorKind::parse, where + ": bad circuit index");
        }
        r.bits = line.substr(tab + 1);
        require(!r.bits.empty() && r.bits.find_first_not_of("01") == std::string::npos, ErrorKind::parse,
                where + ": bits must be 0/1");
        out.push_back(std::move(r));
    }
    return out;
}

// ---- states -----------------------------------------------------------------

/// State file: one amplitude per line, "re im" (im optional), in basis order
/// where bit k of the index is qubit k. '#' comments allowed. Normalized on
/// read.
inline StateVector read_state_file(const std::string &path) {
    std::istringstream in(read_text_file(path));
    std::vector<cplx> amps;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream ls(line);
        double re, im = 0;
        if (!(ls >> re)) {
            require(line.find_first_not_of(" \t\r") == std::string::npos, ErrorKind::parse,
                    path + ":" + std::to_string(lineno) + ": expected an amplitude");
            continue;
        }
        ls >> im;
        amps.emplace_back(re, im);
    }
    require(!amps.empty() && (amps.size() & (amps.size() - 1)) == 0, ErrorKind::dimension,
            path + ": amplitude count must be a power of two");
    uint32_t n = static_cast<uint32_t>(std::countr_zero(amps.size()));
    require(n >= 1 && n <= kMaxStateQubits, ErrorKind::dimension, path + ": unsupported qubit count");
    StateVector psi(n);
    psi.amps = std::move(amps);
    require(psi.norm() > 0, ErrorKind::state, path + ": zero state");
    psi.normalize();
    return psi;
}

inline void write_state(std::ostream &out, const StateVector &psi) {
    out << std::setprecision(17);
    for (const auto &a : psi.amps) {
        out << a.real() << ' ' << a.imag() << '\n';
    }
}

// ---- slot order -------------------------------------------------------------

/// One slot per line: "two <layer> <position>" or "single <layer> <qubit>".
inline std::vector<SlotRef> read_slot_order(const std::string &path) {
    std::istringstream in(read_text_file(path));
    std::vector<SlotRef> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string kind;
        long layer = -1, pos = -1;
        ls >> kind >> layer >> pos;
        auto where = path + ":" + std::to_string(lineno);
        require(bool(ls) || ls.eof(), ErrorKind::parse, where + ": expected '<two|single> <layer> <position>'");
        require((kind == "two" || kind == "single") && layer >= 1 && pos >= 0, ErrorKind::parse,
                where + ": expected '<two|single> <layer> <position>'");
        out.push_back(SlotRef{kind == "two" ? GateKind::two_qubit : GateKind::single_qubit,
                              static_cast<uint32_t>(layer), static_cast<uint32_t>(pos)});
    }
    return out;
}

// ---- true values ------------------------------------------------------------

/// "<pauli> <value>" per line.
inline std::vector<std::pair<PauliString, double>> read_true_values(const std::string &path) {
    std::istringstream in(read_text_file(path));
    std::vector<std::pair<PauliString, double>> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string p;
        double v;
        require(bool(ls >> p >> v), ErrorKind::parse, path + ":" + std::to_string(lineno) + ": expected '<pauli> <value>'");
        out.emplace_back(parse_pauli(p), v);
    }
    return out;
}

// ---- reports ----------------------------------------------------------------

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json report_to_json(const EstimationReport &rep) {
    json rows = json::array();
    for (const auto &r : rep.rows) {
        json row;
        row["pauli"] = r.pauli.str();
        row["coefficient"] = r.coefficient;
        row["estimate"] = r.estimate;
        row["hits"] = r.hits;
        row["confidence_bound"] = r.confidence;
        row["vacuous"] = r.vacuous;
        row["variance_bound"] = number_or_null(r.variance_bound);
        row["flagged"] = r.hits == 0;
        if (r.true_value) {
            row["true_value"] = *r.true_value;
            row["abs_error"] = std::abs(*r.true_value - r.estimate);
        }
        rows.push_back(std::move(row));
    }
    json scalar;
    scalar["estimate"] = rep.scalar.value;
    scalar["error_bound"] = rep.scalar.error_bound;
    scalar["final_cost"] = rep.scalar.final_cost;
    scalar["confidence"] = std::max(0.0, 1 - rep.scalar.final_cost);
    if (rep.scalar.true_value) {
        scalar["true_value"] = *rep.scalar.true_value;
        scalar["abs_error"] = std::abs(*rep.scalar.true_value - rep.scalar.value);
    }
    if (rep.scalar.mse) {
        scalar["mse"] = *rep.scalar.mse;
    }
    json j;
    j["shots"] = rep.shots;
    j["epsilon"] = rep.epsilon;
    j["flagged"] = rep.flagged();
    j["paulis"] = std::move(rows);
    j["scalar"] = std::move(scalar);
    return j;
}

inline void write_report_csv(std::ostream &out, const EstimationReport &rep) {
    bool truth = !rep.rows.empty() && rep.rows.front().true_value.has_value();
    out << "pauli,coefficient,estimate,hits,confidence_bound,vacuous,variance_bound";
    if (truth) {
        out << ",true_value,abs_error";
    }
    out << '\n' << std::setprecision(17);
    for (const auto &r : rep.rows) {
        out << r.pauli.str() << ',' << r.coefficient << ',' << r.estimate << ',' << r.hits << ',' << r.confidence << ','
            << (r.vacuous ? 1 : 0) << ',';
        if (std::isfinite(r.variance_bound)) {
            out << r.variance_bound;
        }
        if (truth) {
            out << ',' << r.true_value.value_or(NAN) << ',' << std::abs(r.true_value.value_or(NAN) - r.estimate);
        }
        out << '\n';
    }
}

}  // namespace dshadow
