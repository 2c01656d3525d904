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

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "dshadow/pauli.hpp"

namespace dshadow {

/// Reads the Pauli-list text format: one `[coefficient] PAULI` term per line,
/// `#` starts a comment, the coefficient defaults to 1.
inline WeightedPauliSet read_pauli_list(std::istream &in, const std::string &source = "<input>") {
    WeightedPauliSet out;
    std::string line;
    size_t line_no = 0;
    bool have_size = false;
    while (std::getline(in, line)) {
        line_no++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream ss(line);
        std::string a, b, extra;
        if (!(ss >> a)) {
            continue;
        }
        auto where = [&]() { return source + ":" + std::to_string(line_no) + ": "; };
        double coef = 1.0;
        std::string text = a;
        if (ss >> b) {
            require(!(ss >> extra), ErrorKind::parse, where() + "expected '<coefficient> <pauli>', got extra tokens");
            const char *first = a.data();
            const char *last = a.data() + a.size();
            if (*first == '+') {
                first++;
            }
            auto [ptr, ec] = std::from_chars(first, last, coef);
            require(ec == std::errc() && ptr == last, ErrorKind::parse, where() + "bad coefficient '" + a + "'");
            text = b;
        }
        PauliString p;
        try {
            p = PauliString::from_str(text);
        } catch (const Error &e) {
            throw Error(ErrorKind::parse, where() + e.what());
        }
        if (have_size) {
            require(p.n == out.num_qubits(), ErrorKind::parse,
                    where() + "term has " + std::to_string(p.n) + " qubits, earlier terms have " +
                        std::to_string(out.num_qubits()));
        } else {
            out = WeightedPauliSet(p.n);
            have_size = true;
        }
        out.add(p, coef);
    }
    require(have_size, ErrorKind::parse, source + ": no Pauli terms found");
    return out;
}

inline WeightedPauliSet read_pauli_list_file(const std::string &path) {
    std::ifstream f(path);
    require(f.good(), ErrorKind::parse, "cannot open Pauli list '" + path + "'");
    return read_pauli_list(f, path);
}

inline WeightedPauliSet parse_pauli_list(const std::string &text) {
    std::istringstream ss(text);
    return read_pauli_list(ss, "<string>");
}

inline void write_pauli_list(std::ostream &out, const WeightedPauliSet &set) {
    char buf[64];
    for (const auto &t : set) {
        std::snprintf(buf, sizeof(buf), "%.17g", t.coefficient);
        out << buf << ' ' << t.pauli.str() << '\n';
    }
}

}  // namespace dshadow
