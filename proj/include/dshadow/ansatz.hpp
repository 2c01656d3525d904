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

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dshadow/error.hpp"

namespace dshadow {

enum class GateKind : uint8_t { two_qubit, single_qubit };

/// Two-qubit codes: 0 Cl(4) twirl, 1 identity, 2 CNOT, 3 SWAP.
enum : uint8_t { TQ_TWIRL = 0, TQ_IDENTITY = 1, TQ_CNOT = 2, TQ_SWAP = 3 };
/// Single-qubit codes: 0 Cl(2) twirl, 1 identity, 2 X<->Z, 3 Y<->X, 4 Z<->Y,
/// 5 X->Z->Y->X, 6 X->Y->Z->X.
enum : uint8_t { SQ_TWIRL = 0, SQ_IDENTITY = 1, SQ_XZ = 2, SQ_XY = 3, SQ_YZ = 4, SQ_XZY = 5, SQ_XYZ = 6 };

inline constexpr uint8_t kNumTwoQubitCodes = 4;
inline constexpr uint8_t kNumSingleQubitCodes = 7;

struct GateOption {
    GateKind kind;
    uint8_t code;
};

inline uint8_t max_code(GateKind kind) {
    return kind == GateKind::two_qubit ? kNumTwoQubitCodes - 1 : kNumSingleQubitCodes - 1;
}

/// Representative Clifford for each single-qubit code; all realize the code's
/// Pauli permutation up to signs.
inline const char *single_qubit_gate_name(uint8_t code) {
    static const char *names[] = {"TWIRL", "I", "H", "S", "SQRT_X", "C_XZY", "C_XYZ"};
    return names[code];
}

/// The same representatives as H/S words, applied left to right in time.
inline const char *single_qubit_gate_decomposition(uint8_t code) {
    static const char *words[] = {"", "", "H", "S", "HSH", "HS", "SH"};
    return words[code];
}

inline const char *two_qubit_gate_name(uint8_t code) {
    static const char *names[] = {"TWIRL2", "II", "CNOT", "SWAP"};
    return names[code];
}

struct SlotRef {
    GateKind kind;
    /// Two-qubit: layer 1..d. Single-qubit: layer 1..d+1.
    uint32_t layer;
    /// Two-qubit: pair position within the layer. Single-qubit: qubit index.
    uint32_t position;

    bool operator==(const SlotRef &) const = default;
};

/// One measurement's brickwork ansatz as integer gate assignments.
///
/// Two-qubit layer l (1 = earliest, d = adjacent to measurement) has offset
/// (d - l) mod 2. Offset 0 pairs (0,1),(2,3),...; offset 1 pairs (1,2),(3,4),...
/// plus the wrap pair (n-1, 0) when n is even. Time order is
/// S_1, G_1, S_2, ..., G_d, S_{d+1}, measure.
struct EnsembleSpec {
    uint32_t n = 0;
    uint32_t d = 0;
    std::vector<uint8_t> t;
    std::vector<uint8_t> s;

    uint32_t pairs_per_layer() const { return n / 2; }
    uint32_t offset(uint32_t layer) const { return (d - layer) % 2; }

    size_t t_index(uint32_t layer, uint32_t pos) const { return static_cast<size_t>(layer - 1) * pairs_per_layer() + pos; }
    size_t s_index(uint32_t layer, uint32_t qubit) const { return static_cast<size_t>(layer - 1) * n + qubit; }
    uint8_t two(uint32_t layer, uint32_t pos) const { return t[t_index(layer, pos)]; }
    uint8_t single(uint32_t layer, uint32_t qubit) const { return s[s_index(layer, qubit)]; }

    /// The pair at `pos` in `layer`, as (control, target) with control on the
    /// lower-indexed qubit.
    std::pair<uint32_t, uint32_t> pair(uint32_t layer, uint32_t pos) const;

    bool is_deterministic() const;
    bool all_singles_twirled() const;

    bool operator==(const EnsembleSpec &) const = default;
};

inline std::pair<uint32_t, uint32_t> EnsembleSpec::pair(uint32_t layer, uint32_t pos) const {
    uint32_t a = 2 * pos + offset(layer);
    uint32_t b = (a + 1) % n;
    return a < b ? std::pair{a, b} : std::pair{b, a};
}

inline bool EnsembleSpec::is_deterministic() const {
    for (auto c : t) {
        if (c == TQ_TWIRL) {
            return false;
        }
    }
    for (auto c : s) {
        if (c == SQ_TWIRL) {
            return false;
        }
    }
    return true;
}

inline bool EnsembleSpec::all_singles_twirled() const {
    for (auto c : s) {
        if (c != SQ_TWIRL) {
            return false;
        }
    }
    return true;
}

inline EnsembleSpec init_ensemble(uint32_t n, uint32_t d) {
    require(n >= 1, ErrorKind::domain, "ensemble needs at least one qubit");
    EnsembleSpec spec;
    spec.n = n;
    spec.d = d;
    spec.t.assign(static_cast<size_t>(d) * (n / 2), TQ_TWIRL);
    spec.s.assign(static_cast<size_t>(d + 1) * n, SQ_TWIRL);
    return spec;
}

/// Pairs of `layer` as 1-based-free (0-based) qubit indices, control first.
inline std::vector<std::pair<uint32_t, uint32_t>> coupling_map(const EnsembleSpec &spec, uint32_t layer) {
    require(layer >= 1 && layer <= spec.d, ErrorKind::domain,
            "layer " + std::to_string(layer) + " outside 1.." + std::to_string(spec.d));
    std::vector<std::pair<uint32_t, uint32_t>> out;
    for (uint32_t k = 0; k < spec.pairs_per_layer(); k++) {
        out.push_back(spec.pair(layer, k));
    }
    return out;
}

inline void check_slot(const EnsembleSpec &spec, const SlotRef &slot) {
    if (slot.kind == GateKind::two_qubit) {
        require(slot.layer >= 1 && slot.layer <= spec.d && slot.position < spec.pairs_per_layer(), ErrorKind::domain,
                "two-qubit slot out of range");
    } else {
        require(slot.layer >= 1 && slot.layer <= spec.d + 1 && slot.position < spec.n, ErrorKind::domain,
                "single-qubit slot out of range");
    }
}

inline uint8_t get_slot(const EnsembleSpec &spec, const SlotRef &slot) {
    check_slot(spec, slot);
    return slot.kind == GateKind::two_qubit ? spec.two(slot.layer, slot.position) : spec.single(slot.layer, slot.position);
}

/// In-place form of `assign`.
inline void assign_in_place(EnsembleSpec &spec, const SlotRef &slot, GateOption option) {
    require(slot.kind == option.kind, ErrorKind::domain, "gate option kind does not match slot kind");
    require(option.code <= max_code(option.kind), ErrorKind::domain,
            "gate code " + std::to_string(option.code) + " out of range");
    check_slot(spec, slot);
    if (slot.kind == GateKind::two_qubit) {
        spec.t[spec.t_index(slot.layer, slot.position)] = option.code;
    } else {
        spec.s[spec.s_index(slot.layer, slot.position)] = option.code;
    }
}

inline EnsembleSpec assign(const EnsembleSpec &spec, const SlotRef &slot, GateOption option) {
    EnsembleSpec out = spec;
    assign_in_place(out, slot, option);
    return out;
}

/// Two-qubit slots from the measurement-adjacent layer backwards, then
/// single-qubit slots from the earliest layer forwards.
inline std::vector<SlotRef> default_slot_order(uint32_t n, uint32_t d) {
    std::vector<SlotRef> order;
    for (uint32_t layer = d; layer >= 1; layer--) {
        for (uint32_t k = 0; k < n / 2; k++) {
            order.push_back({GateKind::two_qubit, layer, k});
        }
    }
    for (uint32_t layer = 1; layer <= d + 1; layer++) {
        for (uint32_t q = 0; q < n; q++) {
            order.push_back({GateKind::single_qubit, layer, q});
        }
    }
    return order;
}

/// Checks that `order` is a permutation of all slots with two-qubit slots first.
inline void validate_slot_order(const std::vector<SlotRef> &order, uint32_t n, uint32_t d) {
    std::vector<uint8_t> seen_t(static_cast<size_t>(d) * (n / 2), 0);
    std::vector<uint8_t> seen_s(static_cast<size_t>(d + 1) * n, 0);
    EnsembleSpec shape = init_ensemble(n, d);
    bool in_singles = false;
    for (const auto &slot : order) {
        check_slot(shape, slot);
        if (slot.kind == GateKind::two_qubit) {
            require(!in_singles, ErrorKind::domain, "two-qubit slots must precede single-qubit slots");
            auto &flag = seen_t[shape.t_index(slot.layer, slot.position)];
            require(!flag, ErrorKind::domain, "slot listed twice");
            flag = 1;
        } else {
            in_singles = true;
            auto &flag = seen_s[shape.s_index(slot.layer, slot.position)];
            require(!flag, ErrorKind::domain, "slot listed twice");
            flag = 1;
        }
    }
    require(order.size() == seen_t.size() + seen_s.size(), ErrorKind::domain, "slot order does not cover every slot");
}

struct Gate {
    std::string name;
    std::vector<uint32_t> qubits;
    /// Ansatz layer: single-qubit gates 1..d+1, two-qubit gates 1..d.
    uint32_t layer = 0;

    bool operator==(const Gate &) const = default;
};

struct Circuit {
    uint32_t n = 0;
    std::vector<Gate> gates;
};

/// Explicit gate list of a deterministic spec, in time order. Identity
/// gates are kept so the layout mirrors the spec.
inline Circuit realize_fixed_circuit(const EnsembleSpec &spec) {
    require(spec.is_deterministic(), ErrorKind::state, "cannot realize a spec that still contains twirled gates");
    Circuit c;
    c.n = spec.n;
    auto add_singles = [&](uint32_t layer) {
        for (uint32_t q = 0; q < spec.n; q++) {
            c.gates.push_back(Gate{single_qubit_gate_name(spec.single(layer, q)), {q}, layer});
        }
    };
    add_singles(1);
    for (uint32_t layer = 1; layer <= spec.d; layer++) {
        for (uint32_t k = 0; k < spec.pairs_per_layer(); k++) {
            auto [a, b] = spec.pair(layer, k);
            c.gates.push_back(Gate{two_qubit_gate_name(spec.two(layer, k)), {a, b}, layer});
        }
        add_singles(layer + 1);
    }
    return c;
}

/// Rewrites named single-qubit gates into H and S, dropping identities.
inline Circuit decompose_to_hs(const Circuit &c) {
    Circuit out;
    out.n = c.n;
    for (const auto &g : c.gates) {
        if (g.qubits.size() == 2) {
            if (g.name != "II") {
                out.gates.push_back(g);
            }
            continue;
        }
        uint8_t code = 255;
        for (uint8_t k = 1; k < kNumSingleQubitCodes; k++) {
            if (g.name == single_qubit_gate_name(k)) {
                code = k;
            }
        }
        if (code == 255) {
            out.gates.push_back(g);
            continue;
        }
        for (const char *w = single_qubit_gate_decomposition(code); *w; w++) {
            out.gates.push_back(Gate{std::string(1, *w), g.qubits, g.layer});
        }
    }
    return out;
}

}  // namespace dshadow
