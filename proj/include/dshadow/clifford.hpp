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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dshadow/ansatz.hpp"
#include "dshadow/pauli.hpp"

namespace dshadow {

/// Gate vocabulary understood by the simulators.
///
/// Single-qubit conjugation actions (P -> U P U^dagger):
///   H      X->Z,  Z->X,  Y->-Y
///   S      X->Y,  Z->Z,  Y->-X
///   SQRT_X X->X,  Z->-Y, Y->Z      (= H S H)
///   C_XZY  X->Z,  Z->Y,  Y->X      (= H then S)
///   C_XYZ  X->-Y, Z->X,  Y->-Z     (= S then H)
///   X, Y, Z Pauli gates.
enum class GateOp : uint8_t { I, X, Y, Z, H, S, SQRT_X, C_XZY, C_XYZ, II, CNOT, SWAP };

struct CompiledGate {
    GateOp op;
    uint32_t a;
    uint32_t b;
};

inline bool lookup_gate_op(std::string_view name, GateOp &op) {
    static const std::pair<std::string_view, GateOp> table[] = {
        {"I", GateOp::I},           {"X", GateOp::X},         {"Y", GateOp::Y},         {"Z", GateOp::Z},
        {"H", GateOp::H},           {"S", GateOp::S},         {"SQRT_X", GateOp::SQRT_X}, {"C_XZY", GateOp::C_XZY},
        {"C_XYZ", GateOp::C_XYZ},   {"II", GateOp::II},       {"CNOT", GateOp::CNOT},   {"SWAP", GateOp::SWAP},
    };
    for (const auto &[k, v] : table) {
        if (k == name) {
            op = v;
            return true;
        }
    }
    return false;
}

inline bool is_two_qubit_op(GateOp op) { return op == GateOp::II || op == GateOp::CNOT || op == GateOp::SWAP; }

inline std::vector<CompiledGate> compile_circuit(const Circuit &c) {
    std::vector<CompiledGate> out;
    out.reserve(c.gates.size());
    for (const auto &g : c.gates) {
        GateOp op;
        require(lookup_gate_op(g.name, op), ErrorKind::unsupported, "unsupported gate '" + g.name + "'");
        size_t arity = is_two_qubit_op(op) ? 2 : 1;
        require(g.qubits.size() == arity, ErrorKind::dimension,
                "gate '" + g.name + "' expects " + std::to_string(arity) + " qubit(s)");
        for (auto q : g.qubits) {
            require(q < c.n, ErrorKind::dimension, "gate '" + g.name + "' acts on qubit outside the circuit");
        }
        require(arity == 1 || g.qubits[0] != g.qubits[1], ErrorKind::dimension, "two-qubit gate on a repeated qubit");
        out.push_back(CompiledGate{op, g.qubits[0], arity == 2 ? g.qubits[1] : g.qubits[0]});
    }
    return out;
}

namespace detail {

inline void flip_bit(std::vector<uint64_t> &v, uint32_t k) { v[k >> 6] ^= uint64_t{1} << (k & 63); }

inline void conj_h(PauliString &p, uint32_t q) {
    bool x = p.x(q), z = p.z(q);
    if (x && z) {
        p.phase = (p.phase + 2) & 3;
    }
    if (x != z) {
        flip_bit(p.xs, q);
        flip_bit(p.zs, q);
    }
}

inline void conj_s(PauliString &p, uint32_t q) {
    bool x = p.x(q), z = p.z(q);
    if (x && z) {
        p.phase = (p.phase + 2) & 3;
    }
    if (x) {
        flip_bit(p.zs, q);
    }
}

inline void conj_pauli(PauliString &p, uint32_t q, bool gx, bool gz) {
    // Anticommuting sites pick up a sign.
    bool anti = (gx && p.z(q)) != (gz && p.x(q));
    if (anti) {
        p.phase = (p.phase + 2) & 3;
    }
}

inline void conj_cnot(PauliString &p, uint32_t c, uint32_t t) {
    bool xc = p.x(c), zc = p.z(c), xt = p.x(t), zt = p.z(t);
    if (xc && zt && (xt == zc)) {
        p.phase = (p.phase + 2) & 3;
    }
    if (xc) {
        flip_bit(p.xs, t);
    }
    if (zt) {
        flip_bit(p.zs, c);
    }
}

inline void conj_swap(PauliString &p, uint32_t a, uint32_t b) {
    uint8_t pa = p.get(a), pb = p.get(b);
    p.set(a, pb);
    p.set(b, pa);
}

}  // namespace detail

/// In-place P -> g P g^dagger.
inline void conjugate_gate(PauliString &p, const CompiledGate &g) {
    switch (g.op) {
        case GateOp::I:
        case GateOp::II:
            break;
        case GateOp::X:
            detail::conj_pauli(p, g.a, true, false);
            break;
        case GateOp::Y:
            detail::conj_pauli(p, g.a, true, true);
            break;
        case GateOp::Z:
            detail::conj_pauli(p, g.a, false, true);
            break;
        case GateOp::H:
            detail::conj_h(p, g.a);
            break;
        case GateOp::S:
            detail::conj_s(p, g.a);
            break;
        case GateOp::SQRT_X:
            detail::conj_h(p, g.a);
            detail::conj_s(p, g.a);
            detail::conj_h(p, g.a);
            break;
        case GateOp::C_XZY:
            detail::conj_h(p, g.a);
            detail::conj_s(p, g.a);
            break;
        case GateOp::C_XYZ:
            detail::conj_s(p, g.a);
            detail::conj_h(p, g.a);
            break;
        case GateOp::CNOT:
            detail::conj_cnot(p, g.a, g.b);
            break;
        case GateOp::SWAP:
            detail::conj_swap(p, g.a, g.b);
            break;
    }
}

inline PauliString conjugate(const std::vector<CompiledGate> &gates, PauliString p) {
    for (const auto &g : gates) {
        conjugate_gate(p, g);
    }
    return p;
}

/// U P U^dagger for the circuit U (gates applied in list order).
inline PauliString conjugate(const Circuit &circuit, const PauliString &p) {
    require(circuit.n == p.n, ErrorKind::dimension,
            "circuit has " + std::to_string(circuit.n) + " qubits, Pauli has " + std::to_string(p.n));
    return conjugate(compile_circuit(circuit), p);
}

/// U^dagger P U.
inline PauliString conjugate_inverse(const Circuit &circuit, const PauliString &p) {
    require(circuit.n == p.n, ErrorKind::dimension, "circuit/Pauli size mismatch");
    auto gates = compile_circuit(circuit);
    // Each gate's inverse conjugation is its forward conjugation applied enough
    // times to close the cycle: order 2 except S (4) and the 3-cycles.
    PauliString r = p;
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        int reps = 1;
        switch (it->op) {
            case GateOp::S:
                reps = 3;
                break;
            case GateOp::C_XZY:
            case GateOp::C_XYZ:
                // Orbit length divides 6 once signs are included.
                reps = 5;
                break;
            case GateOp::SQRT_X:
                reps = 3;
                break;
            default:
                reps = 1;
        }
        for (int k = 0; k < reps; k++) {
            conjugate_gate(r, *it);
        }
    }
    return r;
}

inline bool diagonalizes(const std::vector<CompiledGate> &gates, const PauliString &p) {
    return !conjugate(gates, p).has_x();
}

/// True iff U P U^dagger is a product of I and Z.
inline bool diagonalizes(const Circuit &circuit, const PauliString &p) { return !conjugate(circuit, p).has_x(); }

/// Conjugation images of the generators X_k and Z_k.
class CliffordTableau {
   public:
    CliffordTableau() = default;
    explicit CliffordTableau(uint32_t n) : n_(n) {
        for (uint32_t k = 0; k < n; k++) {
            PauliString x(n), z(n);
            x.set(k, PAULI_X);
            z.set(k, PAULI_Z);
            xs_.push_back(x);
            zs_.push_back(z);
        }
    }

    static CliffordTableau from_circuit(const Circuit &c) {
        CliffordTableau t(c.n);
        auto gates = compile_circuit(c);
        for (uint32_t k = 0; k < c.n; k++) {
            t.xs_[k] = conjugate(gates, t.xs_[k]);
            t.zs_[k] = conjugate(gates, t.zs_[k]);
        }
        return t;
    }

    uint32_t num_qubits() const { return n_; }
    const PauliString &x_image(uint32_t k) const { return xs_[k]; }
    const PauliString &z_image(uint32_t k) const { return zs_[k]; }

    /// U P U^dagger assembled from generator images, using Y = i X Z.
    PauliString apply(const PauliString &p) const {
        require(p.n == n_, ErrorKind::dimension, "tableau/Pauli size mismatch");
        PauliString r(n_);
        r.phase = p.phase;
        for (uint32_t k = 0; k < n_; k++) {
            bool x = p.x(k), z = p.z(k);
            if (x) {
                r = multiply(r, xs_[k]);
            }
            if (z) {
                r = multiply(r, zs_[k]);
            }
            if (x && z) {
                r.phase = (r.phase + 1) & 3;
            }
        }
        return r;
    }

    /// Symplectic consistency of the generator images.
    bool is_valid() const {
        for (uint32_t a = 0; a < n_; a++) {
            for (uint32_t b = 0; b < n_; b++) {
                if (!commutes(xs_[a], xs_[b]) || !commutes(zs_[a], zs_[b])) {
                    return false;
                }
                if (commutes(xs_[a], zs_[b]) != (a != b)) {
                    return false;
                }
            }
        }
        return true;
    }

   private:
    uint32_t n_ = 0;
    std::vector<PauliString> xs_;
    std::vector<PauliString> zs_;
};

}  // namespace dshadow
