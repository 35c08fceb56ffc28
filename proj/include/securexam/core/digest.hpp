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

#ifndef SECUREXAM_CORE_DIGEST_HPP_
#define SECUREXAM_CORE_DIGEST_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "securexam/core/bytes.hpp"

namespace securexam {

// A 256-bit SHA-256 value. Used for key ids, payload digests, package
// fingerprints, resource digests and presentation seeds.
struct Digest256 {
  std::array<std::uint8_t, 32> bytes{};

  std::string hex() const;
  static std::optional<Digest256> from_hex(std::string_view hex);
  ByteView view() const { return bytes; }

  friend auto operator<=>(const Digest256&, const Digest256&) = default;
};

Digest256 sha256(ByteView data);
inline Digest256 sha256(std::string_view data) { return sha256(as_bytes(data)); }

// Incremental SHA-256 for concatenated inputs.
class Sha256 {
 public:
  Sha256();
  Sha256& update(ByteView data);
  Sha256& update(std::string_view data) { return update(as_bytes(data)); }
  Digest256 finish();

 private:
  alignas(64) std::array<std::uint8_t, 128> state_{};
};

}  // namespace securexam

#endif  // SECUREXAM_CORE_DIGEST_HPP_
