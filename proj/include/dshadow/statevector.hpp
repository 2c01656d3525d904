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

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <bit>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dshadow/clifford.hpp"
#include "dshadow/pauli.hpp"

namespace dshadow {

using cplx = std::complex<double>;

inline constexpr uint32_t kMaxStateQubits = 14;

/// Dense state on n <= 14 qubits. Qubit k is bit k of the basis index.
struct StateVector {
    uint32_t n = 0;
    std::vector<cplx> amps;

    StateVector() = default;
    explicit StateVector(uint32_t num_qubits) : n(num_qubits) {
        require(num_qubits <= kMaxStateQubits, ErrorKind::resource,
                "statevector limited to " + std::to_string(kMaxStateQubits) + " qubits");
        amps.assign(size_t{1} << num_qubits, cplx{0, 0});
        amps[0] = 1;
    }

    double norm() const {
        double s = 0;
        for (const auto &a : amps) {
            s += std::norm(a);
        }
        return std::sqrt(s);
    }
    void normalize() {
        double s = norm();
        require(s > 0, ErrorKind::state, "zero state vector");
        for (auto &a : amps) {
            a /= s;
        }
    }
};

/// One shot: circuit index and measured bits (character k is qubit k).
struct MeasurementRecord {
    size_t circuit_index = 0;
    std::string bits;
};

using Mat2 = std::array<cplx, 4>;

namespace detail {

inline Mat2 mat_mul(const Mat2 &a, const Mat2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

}  // namespace detail

/// Row-major 2x2 unitary of a single-qubit gate op.
inline Mat2 gate_matrix(GateOp op) {
    const double r = 1 / std::sqrt(2.0);
    const cplx i{0, 1};
    const Mat2 h{r, r, r, -r};
    const Mat2 s{1, 0, 0, i};
    switch (op) {
        case GateOp::I:
            return {1, 0, 0, 1};
        case GateOp::X:
            return {0, 1, 1, 0};
        case GateOp::Y:
            return {0, -i, i, 0};
        case GateOp::Z:
            return {1, 0, 0, -1};
        case GateOp::H:
            return h;
        case GateOp::S:
            return s;
        case GateOp::SQRT_X:
            return detail::mat_mul(h, detail::mat_mul(s, h));
        case GateOp::C_XZY:
            return detail::mat_mul(s, h);
        case GateOp::C_XYZ:
            return detail::mat_mul(h, s);
        default:
            throw Error(ErrorKind::internal, "gate_matrix called on a two-qubit gate");
    }
}

inline void apply_single(StateVector &psi, uint32_t q, const Mat2 &m) {
    size_t bit = size_t{1} << q;
    for (size_t k = 0; k < psi.amps.size(); k++) {
        if (k & bit) {
            continue;
        }
        cplx a0 = psi.amps[k], a1 = psi.amps[k | bit];
        psi.amps[k] = m[0] * a0 + m[1] * a1;
        psi.amps[k | bit] = m[2] * a0 + m[3] * a1;
    }
}

inline void apply_gate(StateVector &psi, const CompiledGate &g) {
    switch (g.op) {
        case GateOp::I:
        case GateOp::II:
            return;
        case GateOp::CNOT: {
            size_t c = size_t{1} << g.a, t = size_t{1} << g.b;
            for (size_t k = 0; k < psi.amps.size(); k++) {
                if ((k & c) && !(k & t)) {
                    std::swap(psi.amps[k], psi.amps[k | t]);
                }
            }
            return;
        }
        case GateOp::SWAP: {
            size_t a = size_t{1} << g.a, b = size_t{1} << g.b;
            for (size_t k = 0; k < psi.amps.size(); k++) {
                if ((k & a) && !(k & b)) {
                    std::swap(psi.amps[k], psi.amps[(k & ~a) | b]);
                }
            }
            return;
        }
        default:
            apply_single(psi, g.a, gate_matrix(g.op));
    }
}

inline StateVector apply_circuit(const Circuit &c, StateVector psi) {
    require(c.n == psi.n, ErrorKind::dimension,
            "circuit has " + std::to_string(c.n) + " qubits, state has " + std::to_string(psi.n));
    for (const auto &g : compile_circuit(c)) {
        apply_gate(psi, g);
    }
    return psi;
}

/// Born probabilities of every computational basis index.
inline std::vector<double> probabilities(const StateVector &psi) {
    std::vector<double> p(psi.amps.size());
    for (size_t k = 0; k < p.size(); k++) {
        p[k] = std::norm(psi.amps[k]);
    }
    return p;
}

inline std::string index_to_bits(size_t index, uint32_t n) {
    std::string s(n, '0');
    for (uint32_t k = 0; k < n; k++) {
        if ((index >> k) & 1) {
            s[k] = '1';
        }
    }
    return s;
}

/// Independent generator for a (seed, stream) pair, so parallel or reordered
/// sampling reproduces the same shots.
inline std::mt19937_64 make_stream(uint64_t seed, uint64_t stream) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(stream),
                      static_cast<uint32_t>(stream >> 32), 0x5eedu};
    return std::mt19937_64(seq);
}

/// Cumulative Born distribution of a rotated state, for repeated draws.
class OutcomeSampler {
   public:
    explicit OutcomeSampler(const StateVector &rotated) : n_(rotated.n) {
        auto p = probabilities(rotated);
        cdf_.resize(p.size());
        double acc = 0;
        for (size_t k = 0; k < p.size(); k++) {
            acc += p[k];
            cdf_[k] = acc;
        }
    }

    template <typename Rng>
    size_t draw_index(Rng &rng) const {
        double u = std::uniform_real_distribution<double>(0.0, cdf_.back())(rng);
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        size_t k = static_cast<size_t>(it - cdf_.begin());
        return std::min(k, cdf_.size() - 1);
    }

    template <typename Rng>
    std::string draw(Rng &rng) const {
        return index_to_bits(draw_index(rng), n_);
    }

   private:
    uint32_t n_;
    std::vector<double> cdf_;
};

/// Draws one bitstring from |<b|U|psi>|^2.
inline MeasurementRecord sample_measurement(const Circuit &circuit, const StateVector &state, uint64_t seed,
                                            size_t circuit_index = 0) {
    OutcomeSampler sampler(apply_circuit(circuit, state));
    auto rng = make_stream(seed, circuit_index);
    return MeasurementRecord{circuit_index, sampler.draw(rng)};
}

/// <psi| P |psi>, real for Hermitian P.
inline double expectation(const StateVector &psi, const PauliString &p) {
    require(p.n == psi.n, ErrorKind::dimension, "Pauli/state size mismatch");
    uint64_t xm = 0, zm = 0;
    for (uint32_t k = 0; k < p.n; k++) {
        xm |= uint64_t(p.x(k)) << k;
        zm |= uint64_t(p.z(k)) << k;
    }
    // P|b> = i^(phase + |x&z|) (-1)^|z&b| |b ^ x>.
    const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    cplx base = ipow[(p.phase + std::popcount(xm & zm)) & 3];
    cplx acc = 0;
    for (size_t b = 0; b < psi.amps.size(); b++) {
        double sgn = (std::popcount(zm & b) & 1) ? -1.0 : 1.0;
        acc += std::conj(psi.amps[b ^ xm]) * psi.amps[b] * sgn;
    }
    return (acc * base).real();
}

/// Applies sum_P c_P P to a vector.
inline void apply_hamiltonian(const WeightedPauliSet &h, const std::vector<cplx> &in, std::vector<cplx> &out) {
    std::fill(out.begin(), out.end(), cplx{0, 0});
    const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    uint32_t n = static_cast<uint32_t>(h.num_qubits());
    for (const auto &t : h) {
        uint64_t xm = 0, zm = 0;
        for (uint32_t k = 0; k < n; k++) {
            xm |= uint64_t(t.pauli.x(k)) << k;
            zm |= uint64_t(t.pauli.z(k)) << k;
        }
        cplx base = ipow[(t.pauli.phase + std::popcount(xm & zm)) & 3] * t.coefficient;
        for (size_t b = 0; b < in.size(); b++) {
            double sgn = (std::popcount(zm & b) & 1) ? -1.0 : 1.0;
            out[b ^ xm] += base * sgn * in[b];
        }
    }
}

struct GroundState {
    StateVector state;
    double energy = 0;
    double gap = 0;
    bool degenerate = false;
};

inline constexpr uint32_t kDenseDiagonalizationQubits = 8;

namespace detail {

inline GroundState ground_state_dense(const WeightedPauliSet &h, uint32_t n) {
    size_t dim = size_t{1} << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    std::vector<cplx> e(dim), col(dim);
    for (size_t j = 0; j < dim; j++) {
        std::fill(e.begin(), e.end(), cplx{0, 0});
        e[j] = 1;
        apply_hamiltonian(h, e, col);
        for (size_t i = 0; i < dim; i++) {
            m(i, j) = col[i];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    require(solver.info() == Eigen::Success, ErrorKind::internal, "eigensolver failed");
    GroundState g;
    g.state = StateVector(n);
    for (size_t i = 0; i < dim; i++) {
        g.state.amps[i] = solver.eigenvectors()(i, 0);
    }
    g.energy = solver.eigenvalues()(0);
    g.gap = dim > 1 ? solver.eigenvalues()(1) - g.energy : 0;
    return g;
}

/// Lanczos with full reorthogonalization for sizes beyond the dense cutoff.
inline GroundState ground_state_lanczos(const WeightedPauliSet &h, uint32_t n) {
    size_t dim = size_t{1} << n;
    size_t m_max = std::min<size_t>(dim, 400);
    std::vector<std::vector<cplx>> basis;
    std::vector<double> alpha, beta;
    std::vector<cplx> v(dim), w(dim);
    auto rng = make_stream(0x1a2b3c4dULL, 0);
    std::normal_distribution<double> nd;
    for (auto &a : v) {
        a = cplx{nd(rng), nd(rng)};
    }
    auto normalize = [](std::vector<cplx> &x) {
        double s = 0;
        for (auto &a : x) {
            s += std::norm(a);
        }
        s = std::sqrt(s);
        for (auto &a : x) {
            a /= s;
        }
        return s;
    };
    normalize(v);
    Eigen::VectorXd evals;
    Eigen::MatrixXd evecs;
    double prev = 0;
    for (size_t it = 0; it < m_max; it++) {
        basis.push_back(v);
        apply_hamiltonian(h, v, w);
        cplx a = 0;
        for (size_t i = 0; i < dim; i++) {
            a += std::conj(v[i]) * w[i];
        }
        alpha.push_back(a.real());
        for (int pass = 0; pass < 2; pass++) {
            for (const auto &u : basis) {
                cplx c = 0;
                for (size_t i = 0; i < dim; i++) {
                    c += std::conj(u[i]) * w[i];
                }
                for (size_t i = 0; i < dim; i++) {
                    w[i] -= c * u[i];
                }
            }
        }
        size_t m = alpha.size();
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (size_t i = 0; i < m; i++) {
            t(i, i) = alpha[i];
            if (i + 1 < m) {
                t(i, i + 1) = t(i + 1, i) = beta[i];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);
        evals = solver.eigenvalues();
        evecs = solver.eigenvectors();
        double b = normalize(w);
        bool converged = it > 10 && std::abs(evals(0) - prev) < 1e-13 && std::abs(evecs(m - 1, 0)) * b < 1e-10;
        prev = evals(0);
        if (converged || b < 1e-12 || m == m_max) {
            break;
        }
        beta.push_back(b);
        v = w;
    }
    GroundState g;
    g.state = StateVector(n);
    std::fill(g.state.amps.begin(), g.state.amps.end(), cplx{0, 0});
    for (size_t j = 0; j < basis.size(); j++) {
        for (size_t i = 0; i < dim; i++) {
            g.state.amps[i] += evecs(j, 0) * basis[j][i];
        }
    }
    g.state.normalize();
    g.energy = evals(0);
    g.gap = evals.size() > 1 ? evals(1) - evals(0) : 0;
    return g;
}

}  // namespace detail

/// Lowest eigenpair of sum_P c_P P. Dense diagonalization up to 8 qubits,
/// Lanczos above. `degenerate` is set when the next level lies within 1e-9.
inline GroundState ground_state(const WeightedPauliSet &h) {
    uint32_t n = static_cast<uint32_t>(h.num_qubits());
    require(n >= 1 && n <= kMaxStateQubits, ErrorKind::resource,
            "ground_state supports 1.." + std::to_string(kMaxStateQubits) + " qubits");
    GroundState g = n <= kDenseDiagonalizationQubits ? detail::ground_state_dense(h, n) : detail::ground_state_lanczos(h, n);
    g.degenerate = g.gap < 1e-9;
    return g;
}

}  // namespace dshadow
