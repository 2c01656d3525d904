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

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dshadow/error.hpp"

namespace dshadow {

/// Single-site Pauli codes, also the row/column order of Pauli-basis transfer matrices.
enum : uint8_t { PAULI_I = 0, PAULI_X = 1, PAULI_Y = 2, PAULI_Z = 3 };

inline constexpr uint8_t pauli_code(bool x, bool z) { return x ? (z ? PAULI_Y : PAULI_X) : (z ? PAULI_Z : PAULI_I); }
inline constexpr bool code_x(uint8_t c) { return c == PAULI_X || c == PAULI_Y; }
inline constexpr bool code_z(uint8_t c) { return c == PAULI_Z || c == PAULI_Y; }
inline constexpr char code_char(uint8_t c) { return "IXYZ"[c & 3]; }

/// An n-qubit Pauli string in symplectic form, times a phase i^phase.
///
/// Site k carries (x, z) = (0,0) I, (1,0) X, (1,1) Y, (0,1) Z, where Y is the
/// Hermitian Y = i X Z. Site 0 is the leftmost character of the text form.
struct PauliString {
    size_t n = 0;
    std::vector<uint64_t> xs;
    std::vector<uint64_t> zs;
    uint8_t phase = 0;

    PauliString() = default;
    explicit PauliString(size_t num_qubits)
        : n(num_qubits), xs((num_qubits + 63) / 64, 0), zs((num_qubits + 63) / 64, 0) {}

    static PauliString from_str(std::string_view text);

    bool x(size_t k) const { return (xs[k >> 6] >> (k & 63)) & 1; }
    bool z(size_t k) const { return (zs[k >> 6] >> (k & 63)) & 1; }
    uint8_t get(size_t k) const { return pauli_code(x(k), z(k)); }
    void set(size_t k, uint8_t code) {
        uint64_t bit = uint64_t{1} << (k & 63);
        xs[k >> 6] = code_x(code) ? (xs[k >> 6] | bit) : (xs[k >> 6] & ~bit);
        zs[k >> 6] = code_z(code) ? (zs[k >> 6] | bit) : (zs[k >> 6] & ~bit);
    }

    /// +1, -1, +i or -i as i^phase.
    int real_sign() const { return phase == 0 ? 1 : (phase == 2 ? -1 : 0); }
    bool is_hermitian() const { return (phase & 1) == 0; }
    bool is_identity() const;
    bool has_x() const;

    std::string str() const;
    std::string str_with_sign() const;

    bool same_masks(const PauliString &o) const { return n == o.n && xs == o.xs && zs == o.zs; }
    bool operator==(const PauliString &o) const { return same_masks(o) && phase == o.phase; }
};

inline PauliString PauliString::from_str(std::string_view text) {
    require(!text.empty(), ErrorKind::parse, "empty Pauli string");
    PauliString p(text.size());
    for (size_t k = 0; k < text.size(); k++) {
        switch (text[k]) {
            case 'I':
            case '_':
                break;
            case 'X':
                p.set(k, PAULI_X);
                break;
            case 'Y':
                p.set(k, PAULI_Y);
                break;
            case 'Z':
                p.set(k, PAULI_Z);
                break;
            default:
                throw Error(ErrorKind::parse, "invalid Pauli character '" + std::string(1, text[k]) +
                                                  "' at position " + std::to_string(k + 1) + " in '" +
                                                  std::string(text) + "'");
        }
    }
    return p;
}

inline PauliString parse_pauli(std::string_view text) { return PauliString::from_str(text); }

inline bool PauliString::is_identity() const {
    for (size_t w = 0; w < xs.size(); w++) {
        if (xs[w] | zs[w]) {
            return false;
        }
    }
    return true;
}

inline bool PauliString::has_x() const {
    for (uint64_t w : xs) {
        if (w) {
            return true;
        }
    }
    return false;
}

inline std::string PauliString::str() const {
    std::string out(n, 'I');
    for (size_t k = 0; k < n; k++) {
        out[k] = code_char(get(k));
    }
    return out;
}

inline std::string PauliString::str_with_sign() const {
    static const char *prefixes[] = {"+", "+i", "-", "-i"};
    return prefixes[phase & 3] + str();
}

inline void check_same_size(const PauliString &a, const PauliString &b) {
    require(a.n == b.n, ErrorKind::dimension,
            "Pauli size mismatch: " + std::to_string(a.n) + " vs " + std::to_string(b.n));
}

/// a * b with exact phase.
inline PauliString multiply(const PauliString &a, const PauliString &b) {
    check_same_size(a, b);
    PauliString r(a.n);
    // Y = iXZ, so each string is i^(phase + |x&z|) X^x Z^z. Moving Z^z1 past X^x2
    // costs (-1)^|z1&x2|; the product's own Y sites absorb i^-|x&z|.
    int64_t k = a.phase + b.phase;
    for (size_t w = 0; w < a.xs.size(); w++) {
        uint64_t x = a.xs[w] ^ b.xs[w];
        uint64_t z = a.zs[w] ^ b.zs[w];
        k += std::popcount(a.xs[w] & a.zs[w]);
        k += std::popcount(b.xs[w] & b.zs[w]);
        k += 2 * std::popcount(a.zs[w] & b.xs[w]);
        k -= std::popcount(x & z);
        r.xs[w] = x;
        r.zs[w] = z;
    }
    r.phase = static_cast<uint8_t>(((k % 4) + 4) % 4);
    return r;
}

inline bool commutes(const PauliString &a, const PauliString &b) {
    check_same_size(a, b);
    uint64_t acc = 0;
    for (size_t w = 0; w < a.xs.size(); w++) {
        acc ^= (a.xs[w] & b.zs[w]) ^ (a.zs[w] & b.xs[w]);
    }
    return (std::popcount(acc) & 1) == 0;
}

inline size_t support_weight(const PauliString &p) {
    size_t total = 0;
    for (size_t w = 0; w < p.xs.size(); w++) {
        total += std::popcount(p.xs[w] | p.zs[w]);
    }
    return total;
}

/// Hash/equality on the masks only, ignoring the phase.
struct PauliMaskHash {
    size_t operator()(const PauliString &p) const noexcept {
        uint64_t h = 0x9e3779b97f4a7c15ULL ^ p.n;
        for (size_t w = 0; w < p.xs.size(); w++) {
            h ^= p.xs[w] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h ^= p.zs[w] + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
        }
        return static_cast<size_t>(h);
    }
};
struct PauliMaskEq {
    bool operator()(const PauliString &a, const PauliString &b) const noexcept { return a.same_masks(b); }
};

struct WeightedPauli {
    PauliString pauli;
    double coefficient = 1.0;
    double cost_weight = 1.0;
};

/// A set of Pauli terms with distinct masks. Inserting an existing mask adds
/// the coefficients; terms that cancel below `kDropTolerance` are removed.
class WeightedPauliSet {
   public:
    static constexpr double kDropTolerance = 1e-12;

    WeightedPauliSet() = default;
    explicit WeightedPauliSet(size_t n) : n_(n) {}

    size_t num_qubits() const { return n_; }
    size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    const std::vector<WeightedPauli> &terms() const { return terms_; }
    const WeightedPauli &operator[](size_t i) const { return terms_[i]; }
    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }

    /// Adds a term. The stored string always has phase 0; a real sign on `p`
    /// is folded into the coefficient.
    void add(const PauliString &p, double coefficient, double cost_weight = 1.0);

    /// Index of the term with the same masks, or -1.
    long find(const PauliString &p) const;

    void set_cost_weight(size_t i, double w) { terms_[i].cost_weight = w; }
    void use_abs_coefficient_weights() {
        for (auto &t : terms_) {
            t.cost_weight = std::abs(t.coefficient);
        }
    }
    void use_uniform_weights() {
        for (auto &t : terms_) {
            t.cost_weight = 1.0;
        }
    }

   private:
    size_t n_ = 0;
    std::vector<WeightedPauli> terms_;
    std::unordered_map<PauliString, size_t, PauliMaskHash, PauliMaskEq> index_;
};

inline void WeightedPauliSet::add(const PauliString &p, double coefficient, double cost_weight) {
    if (terms_.empty() && index_.empty() && n_ == 0) {
        n_ = p.n;
    }
    require(p.n == n_, ErrorKind::dimension,
            "term '" + p.str() + "' has " + std::to_string(p.n) + " qubits, set has " + std::to_string(n_));
    require(p.is_hermitian(), ErrorKind::domain, "term '" + p.str_with_sign() + "' has an imaginary phase");
    require(cost_weight >= 0, ErrorKind::domain, "negative cost weight");
    double c = coefficient * p.real_sign();
    PauliString key = p;
    key.phase = 0;
    auto it = index_.find(key);
    if (it == index_.end()) {
        if (std::abs(c) < kDropTolerance) {
            return;
        }
        index_.emplace(key, terms_.size());
        terms_.push_back(WeightedPauli{std::move(key), c, cost_weight});
        return;
    }
    size_t i = it->second;
    terms_[i].coefficient += c;
    if (std::abs(terms_[i].coefficient) < kDropTolerance) {
        size_t last = terms_.size() - 1;
        index_.erase(it);
        if (i != last) {
            terms_[i] = std::move(terms_[last]);
            index_[terms_[i].pauli] = i;
        }
        terms_.pop_back();
    }
}

inline long WeightedPauliSet::find(const PauliString &p) const {
    PauliString key = p;
    key.phase = 0;
    auto it = index_.find(key);
    return it == index_.end() ? -1 : static_cast<long>(it->second);
}

}  // namespace dshadow
