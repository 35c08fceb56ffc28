// Copyright 2026 The SecureExam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SECUREXAM_CORE_RANDOM_HPP_
#define SECUREXAM_CORE_RANDOM_HPP_

#include <cstdint>
#include <span>

#include "securexam/core/bytes.hpp"
#include "securexam/core/error.hpp"

namespace securexam {

// Initializes libsodium once. Fails with RandomnessUnavailable when the
// library cannot reach a secure entropy source.
Status ensure_crypto_runtime();

// Source of unpredictable bytes for tokens, PINs and keys.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;

  // Uniform in [0, upper) by rejection sampling. upper must be > 0.
  std::uint32_t uniform(std::uint32_t upper);
  Bytes bytes(std::size_t n);
};

// The operating-system CSPRNG via libsodium.
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

// Process-wide SystemRandom.
RandomSource& system_random();

}  // namespace securexam

#endif  // SECUREXAM_CORE_RANDOM_HPP_
