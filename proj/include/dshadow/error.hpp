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

#include <stdexcept>
#include <string>

namespace dshadow {

enum class ErrorKind {
    parse,
    dimension,
    domain,
    state,
    unsupported,
    resource,
    internal,
};

/// Single exception type for the library. The kind drives CLI exit codes.
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

   private:
    ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string &msg) {
    if (!cond) {
        throw Error(kind, msg);
    }
}

}  // namespace dshadow
