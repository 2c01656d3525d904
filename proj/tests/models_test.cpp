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

#include "dshadow/models.hpp"

#include <gtest/gtest.h>

#include <set>

#include "dshadow/pauli_io.hpp"
#include "dshadow/weight.hpp"
#include "test_util.hpp"

using namespace dshadow;

namespace {

Eigen::MatrixXcd dense_sum(const WeightedPauliSet &h) {
    size_t dim = size_t{1} << h.num_qubits();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto &t : h) {
        m += t.coefficient * test_util::dense_pauli(t.pauli);
    }
    return m;
}

}  // namespace

TEST(hubbard, term_counts) {
    const size_t h_terms[] = {11, 25, 39, 53};
    const size_t h2_terms[] = {32, 227, 618, 1205};
    for (uint32_t k = 0; k < 4; k++) {
        HubbardParams p;
        p.L = 2 + 2 * k;
        auto h = hubbard_hamiltonian(p);
        EXPECT_EQ(h.num_qubits(), 4 + 4 * k);
        EXPECT_EQ(h.size(), h_terms[k]);
        EXPECT_EQ(square_hamiltonian(h).size(), h2_terms[k]);
    }
}

TEST(hubbard, structure) {
    HubbardParams free;
    free.U = 0;
    auto hop = hubbard_hamiltonian(free);
    EXPECT_EQ(hop.size(), 4u);
    for (const auto &t : hop) {
        EXPECT_EQ(support_weight(t.pauli), 3u);
        EXPECT_DOUBLE_EQ(t.coefficient, -0.5);
    }

    HubbardParams atomic;
    atomic.L = 3;
    atomic.J = 0;
    for (const auto &t : hubbard_hamiltonian(atomic)) {
        EXPECT_FALSE(t.pauli.has_x()) << t.pauli.str();
    }
    HubbardParams bad;
    bad.L = 1;
    EXPECT_THROW(hubbard_hamiltonian(bad), Error);
}

TEST(hubbard, half_filled_cell_energy) {
    // A doubly occupied cell costs U, every other occupation 0.
    HubbardParams p;
    p.J = 0;
    p.U = 2.5;
    auto h = hubbard_hamiltonian(p);
    auto m = dense_sum(h);
    // Basis index bit (n-1-s) holds site s; site 0 is the leftmost character.
    EXPECT_NEAR(m(0, 0).real(), 0.0, 1e-12);
    EXPECT_NEAR(m(0b1100, 0b1100).real(), 2.5, 1e-12);
    EXPECT_NEAR(m(0b1111, 0b1111).real(), 5.0, 1e-12);
    EXPECT_NEAR(m(0b1010, 0b1010).real(), 0.0, 1e-12);
}

TEST(square_hamiltonian, examples_and_dense) {
    auto h = parse_pauli_list("1 X\n1 Z");
    auto h2 = square_hamiltonian(h);
    ASSERT_EQ(h2.size(), 1u);
    EXPECT_TRUE(h2[0].pauli.is_identity());
    EXPECT_DOUBLE_EQ(h2[0].coefficient, 2.0);

    HubbardParams p;
    p.U = 0.7;
    p.J = 1.3;
    auto hub = hubbard_hamiltonian(p);
    auto m = dense_sum(hub);
    EXPECT_TRUE(dense_sum(square_hamiltonian(hub)).isApprox(m * m, 1e-10));

    std::mt19937_64 rng(3);
    WeightedPauliSet r(3);
    for (int k = 0; k < 12; k++) {
        r.add(test_util::random_pauli(rng, 3), std::uniform_real_distribution<double>(-1, 1)(rng));
    }
    auto mr = dense_sum(r);
    EXPECT_TRUE(dense_sum(square_hamiltonian(r)).isApprox(mr * mr, 1e-10));
}

TEST(naive_grouping, count_and_errors) {
    for (uint32_t n : {4u, 6u, 8u, 12u, 16u}) {
        EXPECT_EQ(naive_grouping_bases(n).size(), 7 * n - 11) << n;
    }
    EXPECT_THROW(naive_grouping_bases(2), Error);
    EXPECT_THROW(naive_grouping_bases(7), Error);
}

TEST(naive_grouping, covers_hubbard_square) {
    for (uint32_t L : {2u, 3u, 4u, 5u, 6u}) {
        HubbardParams p;
        p.L = L;
        auto h2 = square_hamiltonian(hubbard_hamiltonian(p));
        auto bases = naive_grouping_bases(p.num_qubits());
        for (const auto &t : h2) {
            bool covered = false;
            for (const auto &b : bases) {
                covered = covered || basis_diagonalizes(b, t.pauli);
            }
            EXPECT_TRUE(covered) << "N=" << p.num_qubits() << " " << t.pauli.str();
        }
    }
}

TEST(naive_grouping, duplicates_only_at_four_qubits) {
    auto distinct = [](uint32_t n) {
        auto b = naive_grouping_bases(n);
        return std::set<std::string>(b.begin(), b.end()).size();
    };
    EXPECT_EQ(distinct(4), 13u);
    EXPECT_EQ(distinct(8), 45u);
    EXPECT_EQ(distinct(12), 73u);
}

TEST(product_basis, spec_diagonalizes_what_basis_covers) {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 200; rep++) {
        uint32_t n = 1 + rep % 6;
        std::string b;
        for (uint32_t s = 0; s < n; s++) {
            b.push_back("XYZ"[rng() % 3]);
        }
        auto circuit = realize_fixed_circuit(basis_spec(b));
        auto p = test_util::random_pauli(rng, n);
        EXPECT_EQ(diagonalizes(circuit, p), basis_diagonalizes(b, p)) << b << " " << p.str();
    }
    EXPECT_THROW(basis_spec("XQ"), Error);
}

TEST(direct_measurement, plan_shape) {
    auto set = parse_pauli_list("1 XIZ\n1 IYI");
    auto plan = direct_measurement_plan(set, 3);
    ASSERT_EQ(plan.size(), 6u);
    for (size_t k = 0; k < 3; k++) {
        EXPECT_TRUE(diagonalizes(realize_fixed_circuit(plan[k]), set[0].pauli));
        EXPECT_TRUE(diagonalizes(realize_fixed_circuit(plan[3 + k]), set[1].pauli));
        EXPECT_FALSE(diagonalizes(realize_fixed_circuit(plan[3 + k]), set[0].pauli));
    }
}

TEST(shallow_sampling, two_qubit_table) {
    const auto &table = detail::TwoQubitCliffordTable::get();
    ASSERT_EQ(table.size(), 720u);
    // Distinct words give distinct actions on the Pauli group (mod signs).
    std::set<std::string> images;
    for (size_t i = 0; i < table.size(); i++) {
        Circuit c;
        c.n = 2;
        c.gates = table.word(i);
        std::string key;
        for (const char *g : {"XI", "IX", "ZI", "IZ"}) {
            key += conjugate(c, parse_pauli(g)).str();
        }
        images.insert(key);
    }
    EXPECT_EQ(images.size(), 720u);
}

TEST(shallow_sampling, frequencies_match_contraction) {
    // Fraction of sampled circuits that diagonalize P against the exact
    // all-twirled weight, within 4 sigma.
    const uint64_t shots = 20000;
    for (uint32_t d : {0u, 1u, 2u}) {
        const uint32_t n = 6;
        auto circuits = shallow_shadows_sample(n, d, shots, 11 + d);
        EnsembleSpec twirl = init_ensemble(n, d);
        for (const char *s : {"ZIIIII", "XXIIII", "IZZIII", "XYZIII", "ZIIIIZ", "IIXYXI"}) {
            auto p = parse_pauli(s);
            double expect = pauli_weight(twirl, p);
            uint64_t hits = 0;
            for (const auto &c : circuits) {
                hits += diagonalizes(c, p);
            }
            double freq = double(hits) / shots;
            double sigma = std::sqrt(expect * (1 - expect) / shots);
            EXPECT_NEAR(freq, expect, 4 * sigma + 1e-12) << "d=" << d << " " << s;
        }
    }
}

TEST(shallow_sampling, deterministic_and_layout) {
    auto a = shallow_shadows_sample(5, 2, 4, 99);
    auto b = shallow_shadows_sample(5, 2, 4, 99);
    ASSERT_EQ(a.size(), 4u);
    for (size_t i = 0; i < a.size(); i++) {
        EXPECT_EQ(a[i].gates, b[i].gates);
        uint32_t last = 0;
        for (const auto &g : a[i].gates) {
            EXPECT_GE(g.layer, last);
            last = g.layer;
            EXPECT_LE(g.layer, 3u);
        }
    }
}

TEST(shallow_sampling, coverage_counts) {
    auto set = parse_pauli_list("1 ZI\n1 IZ\n1 ZZ");
    // Depth 0 hits Z on a site with probability 1/3, so coverage needs more
    // than N_O shots but not absurdly many.
    uint64_t shots = shallow_shadows_shots_until_covered(set, 0, 10, 5);
    EXPECT_GT(shots, 10u);
    EXPECT_LT(shots, 2000u);
    EXPECT_EQ(shots, shallow_shadows_shots_until_covered(set, 0, 10, 5));
    auto scan = scan_shallow_depth(set, 2, 5, 1);
    ASSERT_EQ(scan.shots.size(), 3u);
    EXPECT_EQ(scan.shots[scan.best_depth], *std::min_element(scan.shots.begin(), scan.shots.end()));
}
