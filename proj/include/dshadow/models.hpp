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

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <cstring>
#include <deque>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "dshadow/ansatz.hpp"
#include "dshadow/clifford.hpp"
#include "dshadow/error.hpp"
#include "dshadow/pauli.hpp"
#include "dshadow/statevector.hpp"

namespace dshadow {

struct HubbardParams {
    uint32_t L = 2;
    double J = 1.0;
    double U = 1.0;

    uint32_t num_qubits() const { return 2 * L; }
};

/// Jordan-Wigner Hubbard chain on N = 2L qubits, open boundary:
///   H = -J/2 sum_{i=1}^{N-2} (X_{i-1} Z_i X_{i+1} + Y_{i-1} Z_i Y_{i+1})
///       + U/4 sum_cells (1 - Z_a)(1 - Z_b)
/// with 0-based sites and cells (2c, 2c+1).
inline WeightedPauliSet hubbard_hamiltonian(const HubbardParams &p) {
    require(p.L >= 2, ErrorKind::domain, "Hubbard chain needs L >= 2");
    const uint32_t n = p.num_qubits();
    WeightedPauliSet h(n);
    for (uint32_t i = 1; i + 1 < n; i++) {
        for (uint8_t outer : {PAULI_X, PAULI_Y}) {
            PauliString s(n);
            s.set(i - 1, outer);
            s.set(i, PAULI_Z);
            s.set(i + 1, outer);
            h.add(s, -p.J / 2);
        }
    }
    for (uint32_t c = 0; c < p.L; c++) {
        PauliString id(n), za(n), zb(n), zz(n);
        za.set(2 * c, PAULI_Z);
        zb.set(2 * c + 1, PAULI_Z);
        zz.set(2 * c, PAULI_Z);
        zz.set(2 * c + 1, PAULI_Z);
        h.add(id, p.U / 4);
        h.add(za, -p.U / 4);
        h.add(zb, -p.U / 4);
        h.add(zz, p.U / 4);
    }
    return h;
}

/// H^2 as a Pauli sum. Products carry their i^k phases; the imaginary parts
/// of anticommuting pairs cancel, leaving real coefficients.
inline WeightedPauliSet square_hamiltonian(const WeightedPauliSet &h) {
    const size_t n = h.num_qubits();
    std::unordered_map<PauliString, std::complex<double>, PauliMaskHash, PauliMaskEq> acc;
    acc.reserve(h.size() * h.size() / 2 + 1);
    const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (const auto &a : h) {
        for (const auto &b : h) {
            PauliString prod = multiply(a.pauli, b.pauli);
            std::complex<double> c = a.coefficient * b.coefficient * ipow[prod.phase & 3];
            prod.phase = 0;
            acc[prod] += c;
        }
    }
    // Deterministic output order: sort by rendered string.
    std::vector<std::pair<std::string, std::complex<double>>> rows;
    rows.reserve(acc.size());
    for (const auto &[p, c] : acc) {
        rows.emplace_back(p.str(), c);
    }
    std::sort(rows.begin(), rows.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
    WeightedPauliSet out(n);
    for (const auto &[s, c] : rows) {
        require(std::abs(c.imag()) < 1e-9 * (1 + std::abs(c.real())), ErrorKind::internal,
                "H^2 term " + s + " kept an imaginary part");
        out.add(parse_pauli(s), c.real());
    }
    return out;
}

/// Pauli terms of H^2 that need measuring: every term but the identity.
inline WeightedPauliSet hubbard_square_targets(const HubbardParams &p) {
    auto h2 = square_hamiltonian(hubbard_hamiltonian(p));
    WeightedPauliSet out(h2.num_qubits());
    for (const auto &t : h2) {
        if (!t.pauli.is_identity()) {
            out.add(t.pauli, t.coefficient);
        }
    }
    return out;
}

/// Product measurement basis: one of X/Y/Z per site.
using ProductBasis = std::string;

inline bool basis_diagonalizes(const ProductBasis &basis, const PauliString &p) {
    require(basis.size() == p.n, ErrorKind::dimension, "basis and Pauli sizes differ");
    for (size_t s = 0; s < p.n; s++) {
        uint8_t c = p.get(s);
        if (c != PAULI_I && code_char(c) != basis[s]) {
            return false;
        }
    }
    return true;
}

/// Depth-0 spec whose single-qubit rotations map each site's basis letter to Z.
inline EnsembleSpec basis_spec(const ProductBasis &basis) {
    EnsembleSpec spec = init_ensemble(static_cast<uint32_t>(basis.size()), 0);
    for (size_t s = 0; s < basis.size(); s++) {
        switch (basis[s]) {
            case 'X':
                spec.s[s] = SQ_XZ;
                break;
            case 'Y':
                spec.s[s] = SQ_YZ;
                break;
            case 'Z':
            case 'I':
                spec.s[s] = SQ_IDENTITY;
                break;
            default:
                throw Error(ErrorKind::parse, std::string("bad basis letter '") + basis[s] + "'");
        }
    }
    return spec;
}

namespace detail {

struct SweepPattern {
    const char *left;
    const char *block;
    int offset;
    const char *right;
};

/// Basis centered on `center`: `block` starting at center + offset, periodic
/// `left` / `right` fills anchored at the center.
inline ProductBasis sweep_basis(uint32_t n, uint32_t center, const SweepPattern &pat) {
    const int len_b = static_cast<int>(std::strlen(pat.block));
    const int len_l = static_cast<int>(std::strlen(pat.left));
    const int len_r = static_cast<int>(std::strlen(pat.right));
    auto pmod = [](int a, int m) { return ((a % m) + m) % m; };
    ProductBasis b(n, 'Z');
    for (uint32_t s = 0; s < n; s++) {
        int r = static_cast<int>(s) - static_cast<int>(center);
        if (r >= pat.offset && r < pat.offset + len_b) {
            b[s] = pat.block[r - pat.offset];
        } else if (r < pat.offset) {
            b[s] = pat.left[pmod(r, len_l)];
        } else {
            b[s] = pat.right[pmod(r, len_r)];
        }
    }
    return b;
}

}  // namespace detail

/// Product bases covering every Pauli of the Hubbard H^2 on N qubits:
/// the Z basis, XZX / YZY sweeps on a Z background for H_J and its overlap
/// with H_U, five swept patterns for the H_J^2 cross terms, and two
/// period-4 bases. 7N - 11 in total; some coincide for N = 4.
inline std::vector<ProductBasis> naive_grouping_bases(uint32_t n) {
    require(n >= 4 && n % 2 == 0, ErrorKind::domain, "naive grouping needs an even qubit count >= 4");
    std::vector<ProductBasis> out;
    out.emplace_back(n, 'Z');
    for (uint32_t i = 1; i + 1 < n; i++) {
        for (char t : {'X', 'Y'}) {
            ProductBasis b(n, 'Z');
            b[i - 1] = t;
            b[i + 1] = t;
            out.push_back(std::move(b));
        }
    }
    static const detail::SweepPattern patterns[] = {
        {"XZ", "YZY", -1, "ZY"},
        {"ZX", "YZY", -1, "ZX"},
        {"ZX", "XZXXZX", -1, "YZ"},
        {"YZ", "YXXY", -1, "XXYY"},
        {"YZ", "YZYXZX", -1, "XZ"},
    };
    for (const auto &pat : patterns) {
        for (uint32_t i = 1; i + 1 < n; i++) {
            out.push_back(detail::sweep_basis(n, i, pat));
        }
    }
    for (const char *period : {"XXYY", "XYYX"}) {
        ProductBasis b(n, 'Z');
        for (uint32_t s = 0; s < n; s++) {
            b[s] = period[s % 4];
        }
        out.push_back(std::move(b));
    }
    return out;
}

/// N_O copies of the product basis that diagonalizes each Pauli, in input
/// order. Identity sites are measured in Z.
inline std::vector<EnsembleSpec> direct_measurement_plan(const WeightedPauliSet &paulis, uint64_t per_observable) {
    std::vector<EnsembleSpec> out;
    out.reserve(paulis.size() * per_observable);
    for (const auto &t : paulis) {
        ProductBasis b(t.pauli.n, 'Z');
        for (size_t s = 0; s < t.pauli.n; s++) {
            uint8_t c = t.pauli.get(s);
            if (c != PAULI_I) {
                b[s] = code_char(c);
            }
        }
        EnsembleSpec spec = basis_spec(b);
        for (uint64_t k = 0; k < per_observable; k++) {
            out.push_back(spec);
        }
    }
    return out;
}

namespace detail {

/// The 720 symplectic classes of two-qubit Cliffords, each with a shortest
/// H/S/CNOT word on local qubits {0, 1}. Found by breadth-first search from
/// the identity over generator images.
class TwoQubitCliffordTable {
   public:
    static const TwoQubitCliffordTable &get() {
        static const TwoQubitCliffordTable table;
        return table;
    }
    size_t size() const { return words_.size(); }
    const std::vector<Gate> &word(size_t i) const { return words_[i]; }

   private:
    TwoQubitCliffordTable() {
        // Key: images of X0, X1, Z0, Z1 as 4-bit (x0, x1, z0, z1) vectors.
        auto key_of = [](const std::array<PauliString, 4> &imgs) {
            uint32_t k = 0;
            for (const auto &p : imgs) {
                uint32_t v = (p.xs[0] & 3) | ((p.zs[0] & 3) << 2);
                k = (k << 4) | v;
            }
            return k;
        };
        const std::vector<Gate> gens = {
            {"H", {0}, 0}, {"H", {1}, 0}, {"S", {0}, 0}, {"S", {1}, 0}, {"CNOT", {0, 1}, 0},
        };
        std::array<PauliString, 4> start = {parse_pauli("XI"), parse_pauli("IX"), parse_pauli("ZI"),
                                            parse_pauli("IZ")};
        std::unordered_map<uint32_t, size_t> seen;
        std::deque<std::pair<std::array<PauliString, 4>, std::vector<Gate>>> queue;
        queue.emplace_back(start, std::vector<Gate>{});
        seen.emplace(key_of(start), 0);
        words_.push_back({});
        while (!queue.empty()) {
            auto [imgs, word] = queue.front();
            queue.pop_front();
            for (const auto &g : gens) {
                Circuit c;
                c.n = 2;
                c.gates = {g};
                std::array<PauliString, 4> next;
                for (size_t k = 0; k < 4; k++) {
                    next[k] = conjugate(c, imgs[k]);
                }
                uint32_t key = key_of(next);
                if (seen.count(key)) {
                    continue;
                }
                auto w = word;
                w.push_back(g);
                seen.emplace(key, words_.size());
                words_.push_back(w);
                queue.emplace_back(next, std::move(w));
            }
        }
        require(words_.size() == 720, ErrorKind::internal, "two-qubit Clifford enumeration incomplete");
    }

    std::vector<std::vector<Gate>> words_;
};

inline const char *random_pauli_gate(std::mt19937_64 &rng) {
    static const char *names[4] = {"I", "X", "Y", "Z"};
    return names[std::uniform_int_distribution<int>(0, 3)(rng)];
}

}  // namespace detail

/// One circuit drawn from the all-twirled depth-d ensemble: every single-qubit
/// slot is a uniform Cl(2) element and every two-qubit slot a uniform Cl(4)
/// element, each written as a symplectic representative times a Pauli.
inline Circuit sample_shallow_circuit(uint32_t n, uint32_t d, std::mt19937_64 &rng) {
    EnsembleSpec shape = init_ensemble(n, d);
    const auto &table = detail::TwoQubitCliffordTable::get();
    Circuit c;
    c.n = n;
    std::uniform_int_distribution<int> single(1, kNumSingleQubitCodes - 1);
    std::uniform_int_distribution<size_t> two(0, table.size() - 1);
    auto add_singles = [&](uint32_t layer) {
        for (uint32_t q = 0; q < n; q++) {
            c.gates.push_back(Gate{detail::random_pauli_gate(rng), {q}, layer});
            c.gates.push_back(Gate{single_qubit_gate_name(static_cast<uint8_t>(single(rng))), {q}, layer});
        }
    };
    add_singles(1);
    for (uint32_t layer = 1; layer <= d; layer++) {
        for (uint32_t k = 0; k < shape.pairs_per_layer(); k++) {
            auto [a, b] = shape.pair(layer, k);
            c.gates.push_back(Gate{detail::random_pauli_gate(rng), {a}, layer});
            c.gates.push_back(Gate{detail::random_pauli_gate(rng), {b}, layer});
            for (const auto &g : table.word(two(rng))) {
                std::vector<uint32_t> qs;
                for (uint32_t local : g.qubits) {
                    qs.push_back(local == 0 ? a : b);
                }
                c.gates.push_back(Gate{g.name, qs, layer});
            }
        }
        add_singles(layer + 1);
    }
    return c;
}

/// N i.i.d. shallow-shadow circuits. Circuit i uses stream i of `seed`.
inline std::vector<Circuit> shallow_shadows_sample(uint32_t n, uint32_t d, uint64_t shots, uint64_t seed) {
    require(n >= 1, ErrorKind::domain, "need at least one qubit");
    std::vector<Circuit> out;
    out.reserve(shots);
    for (uint64_t i = 0; i < shots; i++) {
        auto rng = make_stream(seed, i);
        out.push_back(sample_shallow_circuit(n, d, rng));
    }
    return out;
}

/// Shots drawn from the depth-d shallow-shadow ensemble until every Pauli is
/// diagonalized at least `per_observable` times. Throws once `max_shots` is
/// reached.
inline uint64_t shallow_shadows_shots_until_covered(const WeightedPauliSet &paulis, uint32_t d,
                                                    uint64_t per_observable, uint64_t seed,
                                                    uint64_t max_shots = 50'000'000) {
    const uint32_t n = static_cast<uint32_t>(paulis.num_qubits());
    std::vector<uint64_t> hits(paulis.size(), 0);
    std::vector<size_t> open(paulis.size());
    for (size_t i = 0; i < open.size(); i++) {
        open[i] = i;
    }
    uint64_t shots = 0;
    while (!open.empty()) {
        require(shots < max_shots, ErrorKind::resource, "shallow-shadow coverage exceeded the shot cap");
        auto rng = make_stream(seed, shots);
        auto tableau = CliffordTableau::from_circuit(sample_shallow_circuit(n, d, rng));
        shots++;
        std::vector<size_t> still;
        for (size_t i : open) {
            if (!tableau.apply(paulis[i].pauli).has_x()) {
                hits[i]++;
            }
            if (hits[i] < per_observable) {
                still.push_back(i);
            }
        }
        open.swap(still);
    }
    return shots;
}

struct DepthScanResult {
    uint32_t best_depth = 0;
    std::vector<uint64_t> shots;  // indexed by depth
};

/// Coverage shot count of shallow shadows for each depth in [0, max_depth];
/// the smallest count wins (lowest depth on ties).
inline DepthScanResult scan_shallow_depth(const WeightedPauliSet &paulis, uint32_t max_depth, uint64_t per_observable,
                                          uint64_t seed) {
    DepthScanResult r;
    for (uint32_t d = 0; d <= max_depth; d++) {
        r.shots.push_back(shallow_shadows_shots_until_covered(paulis, d, per_observable, seed));
        if (r.shots.back() < r.shots[r.best_depth]) {
            r.best_depth = d;
        }
    }
    return r;
}

}  // namespace dshadow
