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

#include "dshadow/pauli.hpp"

#include <gtest/gtest.h>

#include <random>

#include "dshadow/pauli_io.hpp"
#include "test_util.hpp"

using namespace dshadow;

TEST(pauli, parse_examples) {
    auto p = parse_pauli("ZIII");
    EXPECT_EQ(p.n, 4u);
    EXPECT_EQ(p.get(0), PAULI_Z);
    for (size_t k = 1; k < 4; k++) {
        EXPECT_EQ(p.get(k), PAULI_I);
    }
    EXPECT_EQ(p.phase, 0);

    auto id = parse_pauli("IIII");
    EXPECT_TRUE(id.is_identity());
    EXPECT_EQ(id.xs[0], 0u);
    EXPECT_EQ(id.zs[0], 0u);

    auto xy = parse_pauli("XY");
    EXPECT_EQ(xy.xs[0], 0b11u);
    EXPECT_EQ(xy.zs[0], 0b10u);  // site 1 (second character) carries Z.
}

TEST(pauli, parse_errors_name_position) {
    try {
        parse_pauli("XXQZ");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::parse);
        EXPECT_NE(std::string(e.what()).find("position 3"), std::string::npos);
    }
    EXPECT_THROW(parse_pauli(""), Error);
}

TEST(pauli, multiply_examples) {
    auto xz = multiply(parse_pauli("X"), parse_pauli("Z"));
    EXPECT_EQ(xz.str(), "Y");
    EXPECT_EQ(xz.phase, 3);  // -i

    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 50; rep++) {
        auto p = test_util::random_pauli(rng, 7);
        auto sq = multiply(p, p);
        EXPECT_TRUE(sq.is_identity());
        EXPECT_EQ(sq.phase, 0);
    }

    auto a = parse_pauli("XI");
    auto b = parse_pauli("ZZ");
    auto ab = multiply(a, b);
    Eigen::MatrixXcd expect = test_util::dense_pauli(a) * test_util::dense_pauli(b);
    EXPECT_TRUE(test_util::dense_pauli(ab).isApprox(expect, 1e-12));
    EXPECT_EQ(ab.str(), "YZ");
    EXPECT_EQ(ab.phase, 3);
}

TEST(pauli, multiply_matches_dense_matrices) {
    for (size_t n = 1; n <= 3; n++) {
        size_t count = size_t{1} << (2 * n);
        for (size_t ia = 0; ia < count; ia++) {
            for (size_t ib = 0; ib < count; ib++) {
                PauliString a(n), b(n);
                for (size_t k = 0; k < n; k++) {
                    a.set(k, (ia >> (2 * k)) & 3);
                    b.set(k, (ib >> (2 * k)) & 3);
                }
                a.phase = ia % 4;
                auto ab = multiply(a, b);
                Eigen::MatrixXcd expect = test_util::dense_pauli(a) * test_util::dense_pauli(b);
                ASSERT_TRUE(test_util::dense_pauli(ab).isApprox(expect, 1e-12)) << a.str() << " " << b.str();
            }
        }
    }
}

TEST(pauli, multiply_is_associative) {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 200; rep++) {
        size_t n = 1 + rep % 70;
        auto a = test_util::random_pauli(rng, n);
        auto b = test_util::random_pauli(rng, n);
        auto c = test_util::random_pauli(rng, n);
        EXPECT_EQ(multiply(multiply(a, b), c), multiply(a, multiply(b, c)));
    }
}

TEST(pauli, multiply_size_mismatch) {
    try {
        multiply(parse_pauli("XX"), parse_pauli("X"));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::dimension);
    }
    EXPECT_THROW(commutes(parse_pauli("XX"), parse_pauli("X")), Error);
}

TEST(pauli, commutes_examples_and_property) {
    EXPECT_TRUE(commutes(parse_pauli("ZIII"), parse_pauli("IZII")));
    EXPECT_FALSE(commutes(parse_pauli("X"), parse_pauli("Z")));
    EXPECT_FALSE(commutes(parse_pauli("ZIII"), parse_pauli("XXXX")));

    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 2000; rep++) {
        size_t n = 1 + rep % 130;
        auto a = test_util::random_pauli(rng, n);
        auto b = test_util::random_pauli(rng, n);
        auto ab = multiply(a, b);
        auto ba = multiply(b, a);
        EXPECT_EQ(commutes(a, b), ab == ba);
    }
}

TEST(pauli, support_weight) {
    EXPECT_EQ(support_weight(parse_pauli("IIII")), 0u);
    EXPECT_EQ(support_weight(parse_pauli("IIXZXII")), 3u);
    EXPECT_EQ(support_weight(parse_pauli("XYZZ")), 4u);
}

TEST(pauli, render_round_trip) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> len(1, 8), ch(0, 3);
    for (int rep = 0; rep < 10000; rep++) {
        std::string s(len(rng), 'I');
        for (auto &c : s) {
            c = "IXYZ"[ch(rng)];
        }
        ASSERT_EQ(parse_pauli(s).str(), s);
    }
    auto p = multiply(parse_pauli("X"), parse_pauli("Z"));
    EXPECT_EQ(p.str_with_sign(), "-iY");
}

TEST(weighted_set, merges_and_drops) {
    WeightedPauliSet set(2);
    set.add(parse_pauli("XX"), 0.5);
    set.add(parse_pauli("ZZ"), 1.0);
    set.add(parse_pauli("XX"), 0.25);
    ASSERT_EQ(set.size(), 2u);
    EXPECT_DOUBLE_EQ(set[set.find(parse_pauli("XX"))].coefficient, 0.75);
    set.add(parse_pauli("ZZ"), -1.0 + 1e-14);
    EXPECT_EQ(set.size(), 1u);
    EXPECT_EQ(set.find(parse_pauli("ZZ")), -1);
    EXPECT_EQ(set[0].pauli.str(), "XX");
    EXPECT_EQ(set[0].cost_weight, 1.0);

    auto neg = parse_pauli("YY");
    neg.phase = 2;
    set.add(neg, 2.0);
    EXPECT_DOUBLE_EQ(set[set.find(parse_pauli("YY"))].coefficient, -2.0);
    set.use_abs_coefficient_weights();
    EXPECT_DOUBLE_EQ(set[set.find(parse_pauli("YY"))].cost_weight, 2.0);
    EXPECT_THROW(set.add(parse_pauli("XXX"), 1.0), Error);
}

TEST(pauli_io, reads_format) {
    auto set = parse_pauli_list(
        "# header\n"
        "0.172183 ZIII\n"
        "  -0.225753 IZII   # trailing\n"
        "XXXX\n"
        "\n"
        "+1e-3 IIZZ\n");
    ASSERT_EQ(set.size(), 4u);
    EXPECT_EQ(set.num_qubits(), 4u);
    EXPECT_DOUBLE_EQ(set[0].coefficient, 0.172183);
    EXPECT_DOUBLE_EQ(set[1].coefficient, -0.225753);
    EXPECT_DOUBLE_EQ(set[2].coefficient, 1.0);
    EXPECT_DOUBLE_EQ(set[3].coefficient, 1e-3);

    std::ostringstream out;
    write_pauli_list(out, set);
    auto again = parse_pauli_list(out.str());
    ASSERT_EQ(again.size(), set.size());
    for (size_t i = 0; i < set.size(); i++) {
        EXPECT_EQ(again[i].pauli.str(), set[i].pauli.str());
        EXPECT_EQ(again[i].coefficient, set[i].coefficient);
    }
}

TEST(pauli_io, reports_line_numbers) {
    auto expect_parse_error = [](const std::string &text, const std::string &needle) {
        try {
            parse_pauli_list(text);
            FAIL() << text;
        } catch (const Error &e) {
            EXPECT_EQ(e.kind(), ErrorKind::parse);
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    expect_parse_error("1.0 XX\nabc ZZ\n", ":2:");
    expect_parse_error("1.0 XX\n1.0 ZQ\n", "position 2");
    expect_parse_error("1.0 XX\n1.0 ZZZ\n", "qubits");
    expect_parse_error("# nothing\n", "no Pauli terms");
    expect_parse_error("1 XX YY\n", "extra");
}
