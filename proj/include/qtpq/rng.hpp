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

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace qtpq {

/// Name recorded in run metadata. Every piece of the pipeline below is fully
/// specified by the C++ standard or by this header, so streams are identical
/// across platforms and standard libraries (std::normal_distribution is not
/// used for that reason).
inline constexpr std::string_view kGeneratorName = "mt19937_64 seeded by splitmix64(seed); box-muller normals";

/// One step of SplitMix64.
std::uint64_t splitmix64_next(std::uint64_t &state);

/// Seed of stream `stream` derived from `base_seed`. Used to give every TPQ
/// sample its own independent generator: seed_i = stream_seed(base, i).
std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t stream);

class RandomSource {
   public:
    explicit RandomSource(std::uint64_t seed);

    /// Uniform on the open interval (0, 1), 53 random bits.
    double uniform();
    /// Uniform on [lo, hi].
    double uniform(double lo, double hi);
    /// Standard complex normal sample: real and imaginary parts are independent
    /// N(0, 1) draws from one Box-Muller pair.
    std::complex<double> complex_normal();

    std::mt19937_64 &engine() noexcept {
        return engine_;
    }

   private:
    std::mt19937_64 engine_;
};

}  // namespace qtpq
