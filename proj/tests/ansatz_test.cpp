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

#include "dshadow/ansatz.hpp"

#include <gtest/gtest.h>

#include <set>

#include "dshadow/clifford.hpp"

using namespace dshadow;

using Pairs = std::vector<std::pair<uint32_t, uint32_t>>;

TEST(ansatz, slot_counts) {
    auto spec = init_ensemble(8, 3);
    EXPECT_EQ(spec.t.size(), 12u);
    EXPECT_EQ(spec.s.size(), 32u);
    auto small = init_ensemble(2, 0);
    EXPECT_EQ(small.t.size(), 0u);
    EXPECT_EQ(small.s.size(), 2u);
    for (uint32_t n = 1; n <= 16; n++) {
        for (uint32_t d = 0; d <= 4; d++) {
            auto s = init_ensemble(n, d);
            EXPECT_EQ(s.t.size(), d * (n / 2));
            EXPECT_EQ(s.s.size(), (d + 1) * n);
            EXPECT_FALSE(s.is_deterministic());
        }
    }
    EXPECT_THROW(init_ensemble(0, 1), Error);
}

TEST(ansatz, coupling_map_geometry) {
    // 0-based pairs; (n,1) in 1-based text is (0, n-1) with control on qubit 0.
    auto s4 = init_ensemble(4, 2);
    EXPECT_EQ(coupling_map(s4, 2), (Pairs{{0, 1}, {2, 3}}));
    EXPECT_EQ(coupling_map(s4, 1), (Pairs{{1, 2}, {0, 3}}));

    auto s3 = init_ensemble(3, 1);
    EXPECT_EQ(coupling_map(s3, 1), (Pairs{{0, 1}}));

    auto s5 = init_ensemble(5, 2);
    EXPECT_EQ(coupling_map(s5, 2), (Pairs{{0, 1}, {2, 3}}));
    EXPECT_EQ(coupling_map(s5, 1), (Pairs{{1, 2}, {3, 4}}));

    EXPECT_THROW(coupling_map(s4, 0), Error);
    EXPECT_THROW(coupling_map(s4, 3), Error);
}

TEST(ansatz, layers_are_disjoint_and_alternate) {
    for (uint32_t n = 2; n <= 16; n++) {
        auto spec = init_ensemble(n, 4);
        for (uint32_t layer = 1; layer <= 4; layer++) {
            std::set<uint32_t> used;
            for (auto [a, b] : coupling_map(spec, layer)) {
                EXPECT_TRUE(used.insert(a).second);
                EXPECT_TRUE(used.insert(b).second);
                EXPECT_LT(a, b);
            }
            EXPECT_EQ(used.size(), 2 * (n / 2));
            // Measurement-adjacent layer starts at qubit 0, the previous one at
            // qubit 1; for n = 2 the offset pair wraps to (0, 1).
            uint32_t first = coupling_map(spec, layer)[0].first;
            EXPECT_EQ(first, n == 2 ? 0u : (4 - layer) % 2);
        }
    }
}

TEST(ansatz, assign_is_pure) {
    auto spec = init_ensemble(4, 2);
    auto a = assign(spec, {GateKind::two_qubit, 1, 0}, {GateKind::two_qubit, TQ_CNOT});
    EXPECT_EQ(a.two(1, 0), TQ_CNOT);
    EXPECT_EQ(spec.two(1, 0), TQ_TWIRL);
    auto b = assign(a, {GateKind::single_qubit, 3, 2}, {GateKind::single_qubit, SQ_XYZ});
    EXPECT_EQ(b.single(3, 2), SQ_XYZ);
    auto c = assign(b, {GateKind::single_qubit, 3, 2}, {GateKind::single_qubit, SQ_TWIRL});
    EXPECT_EQ(c.single(3, 2), SQ_TWIRL);

    // Idempotent and order-independent across distinct slots.
    EXPECT_EQ(assign(a, {GateKind::two_qubit, 1, 0}, {GateKind::two_qubit, TQ_CNOT}), a);
    auto x = assign(assign(spec, {GateKind::two_qubit, 2, 1}, {GateKind::two_qubit, 3}),
                    {GateKind::single_qubit, 1, 0}, {GateKind::single_qubit, 4});
    auto y = assign(assign(spec, {GateKind::single_qubit, 1, 0}, {GateKind::single_qubit, 4}),
                    {GateKind::two_qubit, 2, 1}, {GateKind::two_qubit, 3});
    EXPECT_EQ(x, y);

    EXPECT_THROW(assign(spec, {GateKind::two_qubit, 1, 0}, {GateKind::single_qubit, 1}), Error);
    EXPECT_THROW(assign(spec, {GateKind::two_qubit, 1, 0}, {GateKind::two_qubit, 4}), Error);
    EXPECT_THROW(assign(spec, {GateKind::single_qubit, 1, 0}, {GateKind::single_qubit, 7}), Error);
    EXPECT_THROW(assign(spec, {GateKind::two_qubit, 3, 0}, {GateKind::two_qubit, 1}), Error);
}

TEST(ansatz, default_slot_order) {
    auto order = default_slot_order(4, 2);
    ASSERT_EQ(order.size(), 4u + 12u);
    EXPECT_EQ(order[0], (SlotRef{GateKind::two_qubit, 2, 0}));
    EXPECT_EQ(order[1], (SlotRef{GateKind::two_qubit, 2, 1}));
    EXPECT_EQ(order[2], (SlotRef{GateKind::two_qubit, 1, 0}));
    EXPECT_EQ(order[4], (SlotRef{GateKind::single_qubit, 1, 0}));
    EXPECT_EQ(order.back(), (SlotRef{GateKind::single_qubit, 3, 3}));
    validate_slot_order(order, 4, 2);

    auto bad = order;
    std::swap(bad[3], bad[4]);
    EXPECT_THROW(validate_slot_order(bad, 4, 2), Error);
    bad = order;
    bad.pop_back();
    EXPECT_THROW(validate_slot_order(bad, 4, 2), Error);
}

TEST(ansatz, realize_requires_deterministic) {
    EXPECT_THROW(realize_fixed_circuit(init_ensemble(2, 1)), Error);
    auto spec = init_ensemble(3, 1);
    std::fill(spec.t.begin(), spec.t.end(), TQ_IDENTITY);
    std::fill(spec.s.begin(), spec.s.end(), SQ_IDENTITY);
    auto c = realize_fixed_circuit(spec);
    EXPECT_EQ(c.gates.size(), 3u + 1u + 3u);
    for (const auto &g : c.gates) {
        EXPECT_TRUE(g.name == "I" || g.name == "II");
    }
    EXPECT_TRUE(decompose_to_hs(c).gates.empty());
}

TEST(ansatz, realized_singles_match_catalog_permutation) {
    // Expected Pauli permutation of each code, from the gate catalog.
    const uint8_t perm[7][4] = {
        {0, 0, 0, 0},
        {PAULI_I, PAULI_X, PAULI_Y, PAULI_Z},
        {PAULI_I, PAULI_Z, PAULI_Y, PAULI_X},  // X<->Z
        {PAULI_I, PAULI_Y, PAULI_X, PAULI_Z},  // Y<->X
        {PAULI_I, PAULI_X, PAULI_Z, PAULI_Y},  // Z<->Y
        {PAULI_I, PAULI_Z, PAULI_X, PAULI_Y},  // X->Z->Y->X
        {PAULI_I, PAULI_Y, PAULI_Z, PAULI_X},  // X->Y->Z->X
    };
    for (uint8_t code = 1; code <= 6; code++) {
        auto spec = init_ensemble(1, 0);
        spec.s[0] = code;
        auto circuit = realize_fixed_circuit(spec);
        auto hs = decompose_to_hs(circuit);
        for (uint8_t p = 1; p <= 3; p++) {
            PauliString in(1);
            in.set(0, p);
            EXPECT_EQ(conjugate(circuit, in).get(0), perm[code][p]) << int(code) << " " << int(p);
            EXPECT_EQ(conjugate(hs, in), conjugate(circuit, in));
        }
    }
}
