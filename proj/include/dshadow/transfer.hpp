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
#include <vector>

#include "dshadow/ansatz.hpp"
#include "dshadow/clifford.hpp"

namespace dshadow {

enum class Basis : uint8_t { pauli, signature };

/// Stochastic matrix acting on the distribution of a doubled Pauli.
///
/// Pauli basis: single-site index I,X,Y,Z = 0..3. Signature basis: 0 for the
/// identity, 1 for any non-identity Pauli. Two-site index is q*lo + hi, where
/// `lo` is the first leg. Entries are stored row-major as m[out * dim + in].
struct TransferTensor {
    Basis basis = Basis::pauli;
    uint8_t arity = 1;
    uint32_t dim = 4;
    std::vector<double> m;

    double operator()(uint32_t out, uint32_t in) const { return m[out * dim + in]; }
    double &operator()(uint32_t out, uint32_t in) { return m[out * dim + in]; }
};

inline uint32_t basis_size(Basis b) { return b == Basis::pauli ? 4 : 2; }

inline GateOp single_qubit_op(uint8_t code) {
    static const GateOp ops[] = {GateOp::I, GateOp::I, GateOp::H, GateOp::S, GateOp::SQRT_X, GateOp::C_XZY, GateOp::C_XYZ};
    return ops[code];
}

inline GateOp two_qubit_op(uint8_t code) {
    static const GateOp ops[] = {GateOp::II, GateOp::II, GateOp::CNOT, GateOp::SWAP};
    return ops[code];
}

namespace detail {

inline TransferTensor zero_tensor(Basis basis, uint8_t arity) {
    TransferTensor t;
    t.basis = basis;
    t.arity = arity;
    uint32_t q = basis_size(basis);
    t.dim = arity == 1 ? q : q * q;
    t.m.assign(static_cast<size_t>(t.dim) * t.dim, 0.0);
    return t;
}

/// Pauli-basis tensor of a fixed Clifford: entry 1 where P' = +-U P U^dagger.
inline TransferTensor fixed_pauli_tensor(const std::vector<CompiledGate> &gates, uint8_t arity) {
    TransferTensor t = zero_tensor(Basis::pauli, arity);
    for (uint32_t in = 0; in < t.dim; in++) {
        PauliString p(arity);
        if (arity == 1) {
            p.set(0, static_cast<uint8_t>(in));
        } else {
            p.set(0, static_cast<uint8_t>(in / 4));
            p.set(1, static_cast<uint8_t>(in % 4));
        }
        PauliString out = conjugate(gates, p);
        uint32_t o = arity == 1 ? out.get(0) : 4u * out.get(0) + out.get(1);
        t(o, in) = 1.0;
    }
    return t;
}

inline TransferTensor twirl_pauli_tensor(uint8_t arity) {
    TransferTensor t = zero_tensor(Basis::pauli, arity);
    t(0, 0) = 1.0;
    double v = 1.0 / (t.dim - 1);
    for (uint32_t a = 1; a < t.dim; a++) {
        for (uint32_t b = 1; b < t.dim; b++) {
            t(a, b) = v;
        }
    }
    return t;
}

inline uint32_t signature_of_pauli_index(uint32_t idx, uint8_t arity) {
    if (arity == 1) {
        return idx != 0;
    }
    return 2u * ((idx / 4) != 0) + ((idx % 4) != 0);
}

inline uint32_t signature_class_size(uint32_t sig, uint8_t arity) {
    if (arity == 1) {
        return sig ? 3 : 1;
    }
    return ((sig / 2) ? 3 : 1) * ((sig % 2) ? 3 : 1);
}

}  // namespace detail

/// Reduces a Pauli-basis tensor to the signature basis. Valid when the
/// tensor is sandwiched by single-qubit twirls, which make the distribution
/// uniform inside every signature class.
inline TransferTensor to_signature(const TransferTensor &pt) {
    TransferTensor st = detail::zero_tensor(Basis::signature, pt.arity);
    for (uint32_t out = 0; out < pt.dim; out++) {
        for (uint32_t in = 0; in < pt.dim; in++) {
            uint32_t so = detail::signature_of_pauli_index(out, pt.arity);
            uint32_t si = detail::signature_of_pauli_index(in, pt.arity);
            st(so, si) += pt(out, in) / detail::signature_class_size(si, pt.arity);
        }
    }
    return st;
}

/// Transfer tensor of a gate option. Two-qubit tensors put the CNOT control
/// on the first leg unless `control_on_first` is false.
inline TransferTensor transfer_tensor(GateOption option, Basis basis, bool control_on_first = true) {
    require(option.code <= max_code(option.kind), ErrorKind::domain, "gate code out of range");
    TransferTensor pt;
    if (option.kind == GateKind::single_qubit) {
        if (basis == Basis::signature) {
            require(option.code == SQ_TWIRL, ErrorKind::unsupported,
                    "signature basis requires twirled single-qubit gates (code " + std::to_string(option.code) + ")");
            TransferTensor st = detail::zero_tensor(Basis::signature, 1);
            st(0, 0) = st(1, 1) = 1.0;
            return st;
        }
        if (option.code == SQ_TWIRL) {
            return detail::twirl_pauli_tensor(1);
        }
        return detail::fixed_pauli_tensor({CompiledGate{single_qubit_op(option.code), 0, 0}}, 1);
    }
    if (option.code == TQ_TWIRL) {
        pt = detail::twirl_pauli_tensor(2);
    } else {
        uint32_t c = control_on_first ? 0 : 1;
        pt = detail::fixed_pauli_tensor({CompiledGate{two_qubit_op(option.code), c, 1 - c}}, 2);
    }
    return basis == Basis::pauli ? pt : to_signature(pt);
}

/// Per-site probability that a doubled Pauli is diagonal in the Z basis.
inline std::vector<double> measurement_vector(Basis basis) {
    if (basis == Basis::pauli) {
        return {1.0, 0.0, 0.0, 1.0};
    }
    return {1.0, 1.0 / 3.0};
}

/// Immutable catalog of every tensor, built once.
struct TensorCatalog {
    TransferTensor single_pauli[kNumSingleQubitCodes];
    TransferTensor two_pauli[kNumTwoQubitCodes][2];
    TransferTensor single_signature;
    TransferTensor two_signature[kNumTwoQubitCodes][2];

    static const TensorCatalog &get() {
        static const TensorCatalog catalog = build();
        return catalog;
    }

    const TransferTensor &single(Basis b, uint8_t code) const {
        return b == Basis::pauli ? single_pauli[code] : single_signature;
    }
    const TransferTensor &two(Basis b, uint8_t code, bool control_on_first) const {
        return b == Basis::pauli ? two_pauli[code][control_on_first ? 0 : 1]
                                 : two_signature[code][control_on_first ? 0 : 1];
    }

   private:
    static TensorCatalog build() {
        TensorCatalog c;
        for (uint8_t k = 0; k < kNumSingleQubitCodes; k++) {
            c.single_pauli[k] = transfer_tensor({GateKind::single_qubit, k}, Basis::pauli);
        }
        c.single_signature = transfer_tensor({GateKind::single_qubit, SQ_TWIRL}, Basis::signature);
        for (uint8_t k = 0; k < kNumTwoQubitCodes; k++) {
            for (int o = 0; o < 2; o++) {
                c.two_pauli[k][o] = transfer_tensor({GateKind::two_qubit, k}, Basis::pauli, o == 0);
                c.two_signature[k][o] = transfer_tensor({GateKind::two_qubit, k}, Basis::signature, o == 0);
            }
        }
        return c;
    }
};

}  // namespace dshadow
