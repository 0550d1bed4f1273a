// Copyright 2026 The qtpq Authors
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

#include "qtpq/error.hpp"

namespace qtpq {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument:
            return "invalid_argument";
        case ErrorKind::DimensionMismatch:
            return "dimension_mismatch";
        case ErrorKind::SizeLimit:
            return "size_limit";
        case ErrorKind::NotConverged:
            return "not_converged";
        case ErrorKind::Numerical:
            return "numerical";
        case ErrorKind::Domain:
            return "domain";
        case ErrorKind::Parse:
            return "parse";
        case ErrorKind::Io:
            return "io";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string &message) : std::runtime_error(message), kind_(kind) {
}

}  // namespace qtpq
