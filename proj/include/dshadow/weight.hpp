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
#include <vector>

#include "dshadow/ansatz.hpp"
#include "dshadow/clifford.hpp"
#include "dshadow/transfer.hpp"

namespace dshadow {

/// Brickwork network geometry with an even number of sites. Odd n gets a
/// phantom site n whose gates are all identities; it starts and stays at I,
/// so the idle qubit of each odd-n layer is reproduced exactly.
///
/// Slice k holds, for each layer l, the gate whose first leg sits on
/// (2k + d - l) mod n'. Layer l+1's second input is layer l's first output in
/// the same slice; its first input arrives from slice k-1.
struct StaircaseGeometry {
    uint32_t n = 0;
    uint32_t d = 0;
    uint32_t np = 0;
    uint32_t slices = 0;

    StaircaseGeometry() = default;
    StaircaseGeometry(uint32_t num_qubits, uint32_t depth)
        : n(num_qubits), d(depth), np(num_qubits + (num_qubits & 1)), slices(np / 2) {}

    uint32_t lo_site(uint32_t k, uint32_t layer) const { return (2 * k + d - layer) % np; }
    uint32_t hi_site(uint32_t k, uint32_t layer) const { return (lo_site(k, layer) + 1) % np; }
    bool is_phantom(uint32_t site) const { return site >= n; }

    /// Slice holding the layer-`layer` gate whose first leg is `site`.
    uint32_t slice_of_gate(uint32_t layer, uint32_t lo) const { return ((lo + layer + np * (d + 1) - d) % np) / 2; }

    /// Slice whose layer-`layer` gate touches `site` (either leg).
    uint32_t slice_touching(uint32_t layer, uint32_t site) const {
        uint32_t parity = (d - layer) % 2;
        uint32_t lo = (site % 2 == parity) ? site : (site + np - 1) % np;
        return slice_of_gate(layer, lo);
    }
};

/// Dense q^2 x q^2 gate tensor with the layer's single-qubit tensors folded
/// into its inputs: G * (S_lo (x) S_hi). Stored row-major.
struct SliceGate {
    std::vector<double> m;
};

/// Staircase contraction of one ensemble spec, prepared once per spec and
/// reused for every Pauli. Per slice it stores a D x D matrix (D = q^(d-1))
/// for each of the q^2 possible Pauli inputs on that slice's first-layer
/// sites; a weight is then the trace of a product of slice matrices.
class ContractionPlan {
   public:
    ContractionPlan() = default;
    ContractionPlan(const EnsembleSpec &spec, Basis basis);

    Basis basis() const { return basis_; }
    uint32_t q() const { return q_; }
    uint32_t bond_dim() const { return dim_; }
    uint32_t num_slices() const { return geo_.slices; }
    const StaircaseGeometry &geometry() const { return geo_; }

    double weight(const PauliString &p) const;

    /// Input index of the slice's first-layer sites for `p`.
    uint32_t combo(const PauliString &p, uint32_t k) const;
    uint32_t site_index(const PauliString &p, uint32_t site) const {
        if (geo_.is_phantom(site)) {
            return 0;
        }
        uint8_t c = p.get(site);
        return basis_ == Basis::pauli ? c : (c != 0);
    }

    /// Slice matrix for input `combo`, row-major [out * D + in].
    const double *slice_matrix(uint32_t k, uint32_t combo) const {
        return &mats_[(static_cast<size_t>(k) * q_ * q_ + combo) * dim_ * dim_];
    }
    /// d = 0 only: factor for site `s` given its Pauli index.
    double site_factor(uint32_t s, uint32_t idx) const { return rows_[s * q_ + idx]; }

    /// Recomputes slice `k` (or site `k` when d = 0) from `spec` into `out`,
    /// laid out like `slice_matrix` / `site_factor`.
    void build_slice(const EnsembleSpec &spec, uint32_t k, std::vector<double> &out) const;

    /// Replaces slice `k` with a buffer produced by `build_slice`.
    void install_slice(uint32_t k, const std::vector<double> &buf);

    /// Uniform view over the contraction's independent blocks: slices for
    /// d >= 1, sites for d = 0 (where every block is 1 x 1).
    uint32_t num_blocks() const { return geo_.d == 0 ? geo_.n : geo_.slices; }
    uint32_t block_input(const PauliString &p, uint32_t k) const {
        return geo_.d == 0 ? site_index(p, k) : combo(p, k);
    }
    const double *block(uint32_t k, uint32_t input) const {
        return geo_.d == 0 ? &rows_[static_cast<size_t>(k) * q_ + input] : slice_matrix(k, input);
    }

    size_t slice_stride() const { return geo_.d == 0 ? q_ : static_cast<size_t>(q_) * q_ * dim_ * dim_; }

   private:
    SliceGate gate(const EnsembleSpec &spec, uint32_t layer, uint32_t lo, uint32_t hi) const;
    std::vector<double> measure_row(const EnsembleSpec &spec, uint32_t site) const;
    const TransferTensor &single_tensor(const EnsembleSpec &spec, uint32_t layer, uint32_t site) const;

    Basis basis_ = Basis::pauli;
    uint32_t q_ = 4;
    uint32_t dim_ = 1;
    StaircaseGeometry geo_;
    std::vector<double> mats_;
    std::vector<double> rows_;
};

inline ContractionPlan::ContractionPlan(const EnsembleSpec &spec, Basis basis)
    : basis_(basis), q_(basis_size(basis)), geo_(spec.n, spec.d) {
    require(spec.t.size() == static_cast<size_t>(spec.d) * (spec.n / 2) &&
                spec.s.size() == static_cast<size_t>(spec.d + 1) * spec.n,
            ErrorKind::dimension, "ensemble spec vectors have the wrong length");
    if (basis == Basis::signature) {
        require(spec.all_singles_twirled(), ErrorKind::unsupported,
                "signature basis requires every single-qubit gate to be twirled");
    }
    dim_ = 1;
    for (uint32_t l = 1; l < spec.d; l++) {
        dim_ *= q_;
    }
    std::vector<double> buf;
    if (spec.d == 0) {
        rows_.assign(static_cast<size_t>(spec.n) * q_, 0.0);
        for (uint32_t s = 0; s < spec.n; s++) {
            build_slice(spec, s, buf);
            install_slice(s, buf);
        }
        return;
    }
    mats_.assign(geo_.slices * slice_stride(), 0.0);
    for (uint32_t k = 0; k < geo_.slices; k++) {
        build_slice(spec, k, buf);
        install_slice(k, buf);
    }
}

inline const TransferTensor &ContractionPlan::single_tensor(const EnsembleSpec &spec, uint32_t layer,
                                                             uint32_t site) const {
    const auto &cat = TensorCatalog::get();
    uint8_t code = geo_.is_phantom(site) ? SQ_IDENTITY : spec.single(layer, site);
    if (basis_ == Basis::signature) {
        return cat.single_signature;
    }
    return cat.single(Basis::pauli, code);
}

inline SliceGate ContractionPlan::gate(const EnsembleSpec &spec, uint32_t layer, uint32_t lo, uint32_t hi) const {
    const auto &cat = TensorCatalog::get();
    uint8_t code = TQ_IDENTITY;
    bool control_first = true;
    if (!geo_.is_phantom(lo) && !geo_.is_phantom(hi)) {
        uint32_t pos = (lo - spec.offset(layer)) / 2;
        code = spec.two(layer, pos);
        control_first = lo < hi;
    }
    const TransferTensor &g = cat.two(basis_, code, control_first);
    const TransferTensor &sa = single_tensor(spec, layer, lo);
    const TransferTensor &sb = single_tensor(spec, layer, hi);
    uint32_t qq = q_ * q_;
    SliceGate out;
    out.m.assign(static_cast<size_t>(qq) * qq, 0.0);
    // (S_lo (x) S_hi)[(a',b'),(a,b)] = sa(a',a) sb(b',b); fold into the input side.
    for (uint32_t o = 0; o < qq; o++) {
        for (uint32_t a = 0; a < q_; a++) {
            for (uint32_t b = 0; b < q_; b++) {
                double acc = 0;
                for (uint32_t a2 = 0; a2 < q_; a2++) {
                    double fa = sa(a2, a);
                    if (fa == 0) {
                        continue;
                    }
                    for (uint32_t b2 = 0; b2 < q_; b2++) {
                        acc += g(o, a2 * q_ + b2) * fa * sb(b2, b);
                    }
                }
                out.m[o * qq + a * q_ + b] = acc;
            }
        }
    }
    return out;
}

inline std::vector<double> ContractionPlan::measure_row(const EnsembleSpec &spec, uint32_t site) const {
    auto m = measurement_vector(basis_);
    const TransferTensor &s = single_tensor(spec, spec.d + 1, site);
    std::vector<double> row(q_, 0.0);
    for (uint32_t in = 0; in < q_; in++) {
        for (uint32_t out = 0; out < q_; out++) {
            row[in] += m[out] * s(out, in);
        }
    }
    return row;
}

inline void ContractionPlan::build_slice(const EnsembleSpec &spec, uint32_t k, std::vector<double> &out) const {
    const uint32_t q = q_;
    const uint32_t qq = q * q;
    const uint32_t d = spec.d;
    if (d == 0) {
        // One single-qubit layer, folded into the measurement row of site k.
        out = measure_row(spec, k);
        return;
    }
    std::vector<SliceGate> gates(d + 1);
    for (uint32_t l = 1; l <= d; l++) {
        gates[l] = gate(spec, l, geo_.lo_site(k, l), geo_.hi_site(k, l));
    }
    auto m_lo = measure_row(spec, geo_.lo_site(k, d));
    auto m_hi = measure_row(spec, geo_.hi_site(k, d));
    // Last layer contracted with the measurement: gd[(lo_in, hi_in)].
    std::vector<double> gd(qq, 0.0);
    for (uint32_t in = 0; in < qq; in++) {
        double acc = 0;
        for (uint32_t a = 0; a < q; a++) {
            for (uint32_t b = 0; b < q; b++) {
                acc += m_lo[a] * m_hi[b] * gates[d].m[(a * q + b) * qq + in];
            }
        }
        gd[in] = acc;
    }
    const size_t dd = static_cast<size_t>(dim_) * dim_;
    out.assign(qq * dd, 0.0);
    if (d == 1) {
        for (uint32_t c = 0; c < qq; c++) {
            out[c] = gd[c];
        }
        return;
    }
    std::vector<double> st, nx;
    for (uint32_t c = 0; c < qq; c++) {
        double *mat = &out[c * dd];
        for (uint32_t alpha = 0; alpha < dim_; alpha++) {
            // State over (beta prefix, carry) after layer 1: beta_1 = hi out, carry = lo out.
            st.assign(qq, 0.0);
            for (uint32_t lo_out = 0; lo_out < q; lo_out++) {
                for (uint32_t hi_out = 0; hi_out < q; hi_out++) {
                    st[hi_out * q + lo_out] = gates[1].m[(lo_out * q + hi_out) * qq + c];
                }
            }
            uint32_t prefix = q;  // number of beta-prefix values
            uint32_t digit = 1;   // q^(l-2) for extracting alpha_l
            for (uint32_t l = 2; l < d; l++) {
                uint32_t a_in = (alpha / digit) % q;
                nx.assign(static_cast<size_t>(prefix) * q * q, 0.0);
                const auto &g = gates[l].m;
                for (uint32_t b = 0; b < prefix; b++) {
                    for (uint32_t carry = 0; carry < q; carry++) {
                        double v = st[b * q + carry];
                        if (v == 0) {
                            continue;
                        }
                        uint32_t in = a_in * q + carry;
                        for (uint32_t lo_out = 0; lo_out < q; lo_out++) {
                            for (uint32_t hi_out = 0; hi_out < q; hi_out++) {
                                double gv = g[(lo_out * q + hi_out) * qq + in];
                                if (gv != 0) {
                                    nx[(b + prefix * hi_out) * q + lo_out] += gv * v;
                                }
                            }
                        }
                    }
                }
                st.swap(nx);
                prefix *= q;
                digit *= q;
            }
            uint32_t a_in = (alpha / digit) % q;
            for (uint32_t beta = 0; beta < dim_; beta++) {
                double acc = 0;
                for (uint32_t carry = 0; carry < q; carry++) {
                    acc += gd[a_in * q + carry] * st[beta * q + carry];
                }
                mat[beta * dim_ + alpha] = acc;
            }
        }
    }
}

inline void ContractionPlan::install_slice(uint32_t k, const std::vector<double> &buf) {
    if (geo_.d == 0) {
        std::copy(buf.begin(), buf.end(), rows_.begin() + static_cast<size_t>(k) * q_);
        return;
    }
    std::copy(buf.begin(), buf.end(), mats_.begin() + static_cast<size_t>(k) * slice_stride());
}

inline uint32_t ContractionPlan::combo(const PauliString &p, uint32_t k) const {
    uint32_t lo = geo_.lo_site(k, 1), hi = geo_.hi_site(k, 1);
    return site_index(p, lo) * q_ + site_index(p, hi);
}

namespace detail {

/// out = a * b for D x D row-major matrices.
inline void matmul(const double *a, const double *b, double *out, uint32_t dim) {
    for (uint32_t i = 0; i < dim; i++) {
        for (uint32_t j = 0; j < dim; j++) {
            out[i * dim + j] = 0;
        }
        for (uint32_t k = 0; k < dim; k++) {
            double v = a[i * dim + k];
            if (v == 0) {
                continue;
            }
            for (uint32_t j = 0; j < dim; j++) {
                out[i * dim + j] += v * b[k * dim + j];
            }
        }
    }
}

}  // namespace detail

inline double ContractionPlan::weight(const PauliString &p) const {
    require(p.n == geo_.n, ErrorKind::dimension,
            "Pauli has " + std::to_string(p.n) + " qubits, spec has " + std::to_string(geo_.n));
    if (geo_.d == 0) {
        double w = 1.0;
        for (uint32_t s = 0; s < geo_.n; s++) {
            w *= site_factor(s, site_index(p, s));
        }
        return w;
    }
    if (dim_ == 1) {
        double w = 1.0;
        for (uint32_t k = 0; k < geo_.slices; k++) {
            w *= *slice_matrix(k, combo(p, k));
        }
        return w;
    }
    const size_t dd = static_cast<size_t>(dim_) * dim_;
    std::vector<double> acc(slice_matrix(0, combo(p, 0)), slice_matrix(0, combo(p, 0)) + dd), tmp(dd);
    for (uint32_t k = 1; k < geo_.slices; k++) {
        detail::matmul(slice_matrix(k, combo(p, k)), acc.data(), tmp.data(), dim_);
        acc.swap(tmp);
    }
    double tr = 0;
    for (uint32_t i = 0; i < dim_; i++) {
        tr += acc[i * dim_ + i];
    }
    return tr;
}

/// Basis chosen automatically: signature when every single-qubit gate is
/// twirled, Pauli otherwise.
inline Basis preferred_basis(const EnsembleSpec &spec) {
    return spec.all_singles_twirled() ? Basis::signature : Basis::pauli;
}

/// Probability that a circuit drawn from `spec` diagonalizes `p`, by
/// staircase contraction in the requested basis.
inline double pauli_weight(const EnsembleSpec &spec, const PauliString &p, Basis basis) {
    require(spec.n == p.n, ErrorKind::dimension,
            "Pauli has " + std::to_string(p.n) + " qubits, spec has " + std::to_string(spec.n));
    return ContractionPlan(spec, basis).weight(p);
}

/// Pauli weight of `p` under `spec`. Deterministic specs are decided by exact
/// tableau conjugation and return exactly 0 or 1.
inline double pauli_weight(const EnsembleSpec &spec, const PauliString &p) {
    require(spec.n == p.n, ErrorKind::dimension,
            "Pauli has " + std::to_string(p.n) + " qubits, spec has " + std::to_string(spec.n));
    if (spec.is_deterministic()) {
        return diagonalizes(realize_fixed_circuit(spec), p) ? 1.0 : 0.0;
    }
    return pauli_weight(spec, p, preferred_basis(spec));
}

inline constexpr uint32_t kMaxDenseWeightQubits = 12;

/// Reference value by propagating the full 4^n doubled-Pauli distribution
/// through every gate in time order. Exponential; used as an oracle.
inline double pauli_weight_dense(const EnsembleSpec &spec, const PauliString &p) {
    require(spec.n == p.n, ErrorKind::dimension, "Pauli/spec size mismatch");
    require(spec.n <= kMaxDenseWeightQubits, ErrorKind::resource,
            "dense weight oracle limited to " + std::to_string(kMaxDenseWeightQubits) + " qubits");
    const uint32_t n = spec.n;
    const size_t size = size_t{1} << (2 * n);
    const auto &cat = TensorCatalog::get();
    std::vector<double> v(size, 0.0), w(size);
    size_t start = 0;
    for (uint32_t s = 0; s < n; s++) {
        start |= static_cast<size_t>(p.get(s)) << (2 * s);
    }
    v[start] = 1.0;

    auto apply_single = [&](const TransferTensor &t, uint32_t s) {
        std::fill(w.begin(), w.end(), 0.0);
        size_t shift = 2 * s;
        for (size_t idx = 0; idx < size; idx++) {
            if (v[idx] == 0) {
                continue;
            }
            uint32_t in = (idx >> shift) & 3;
            size_t base = idx & ~(size_t{3} << shift);
            for (uint32_t out = 0; out < 4; out++) {
                double f = t(out, in);
                if (f != 0) {
                    w[base | (static_cast<size_t>(out) << shift)] += f * v[idx];
                }
            }
        }
        v.swap(w);
    };
    auto apply_two = [&](const TransferTensor &t, uint32_t a, uint32_t b) {
        std::fill(w.begin(), w.end(), 0.0);
        size_t sa = 2 * a, sb = 2 * b;
        for (size_t idx = 0; idx < size; idx++) {
            if (v[idx] == 0) {
                continue;
            }
            uint32_t in = 4 * ((idx >> sa) & 3) + ((idx >> sb) & 3);
            size_t base = idx & ~(size_t{3} << sa) & ~(size_t{3} << sb);
            for (uint32_t out = 0; out < 16; out++) {
                double f = t(out, in);
                if (f != 0) {
                    w[base | (static_cast<size_t>(out / 4) << sa) | (static_cast<size_t>(out % 4) << sb)] += f * v[idx];
                }
            }
        }
        v.swap(w);
    };
    auto single_layer = [&](uint32_t layer) {
        for (uint32_t s = 0; s < n; s++) {
            apply_single(cat.single(Basis::pauli, spec.single(layer, s)), s);
        }
    };

    single_layer(1);
    for (uint32_t layer = 1; layer <= spec.d; layer++) {
        for (uint32_t k = 0; k < spec.pairs_per_layer(); k++) {
            auto [a, b] = spec.pair(layer, k);
            apply_two(cat.two(Basis::pauli, spec.two(layer, k), true), a, b);
        }
        single_layer(layer + 1);
    }
    auto m = measurement_vector(Basis::pauli);
    double total = 0;
    for (size_t idx = 0; idx < size; idx++) {
        if (v[idx] == 0) {
            continue;
        }
        double f = v[idx];
        for (uint32_t s = 0; s < n && f != 0; s++) {
            f *= m[(idx >> (2 * s)) & 3];
        }
        total += f;
    }
    return total;
}

}  // namespace dshadow
