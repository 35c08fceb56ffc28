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

#ifndef SECUREXAM_CRYPTO_KEYS_HPP_
#define SECUREXAM_CRYPTO_KEYS_HPP_

#include <cstdint>
#include <optional>
#include <string_view>

#include "securexam/core/bytes.hpp"
#include "securexam/core/digest.hpp"
#include "securexam/core/error.hpp"

namespace securexam {

enum class KeyRole : std::uint8_t { kLecturer = 0, kCenter = 1 };

std::string_view to_string(KeyRole r);
std::optional<KeyRole> key_role_from_string(std::string_view s);

// Ed25519 public key, 32 bytes. Centers receive content keys on its X25519
// image; lecturers sign with it.
struct PublicKey {
  KeyRole role = KeyRole::kLecturer;
  Bytes bytes;
  Digest256 key_id;  // SHA-256(bytes)

  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

class KeyPair {
 public:
  KeyRole role() const { return role_; }
  ByteView public_part() const { return public_; }
  const Digest256& key_id() const { return key_id_; }
  PublicKey public_key() const { return {role_, public_, key_id_}; }

  // 64-byte Ed25519 secret key. Stays inside the process that holds it.
  const SecretBytes& private_part() const { return private_; }

  friend Result<KeyPair> generate_keypair(KeyRole role);
  friend Result<KeyPair> make_keypair(KeyRole role, Bytes public_part, SecretBytes private_part);

 private:
  KeyPair() = default;
  KeyRole role_ = KeyRole::kLecturer;
  Bytes public_;
  SecretBytes private_;
  Digest256 key_id_;
};

Result<KeyPair> generate_keypair(KeyRole role);

// Rebuilds a keypair from stored parts; checks the halves belong together.
Result<KeyPair> make_keypair(KeyRole role, Bytes public_part, SecretBytes private_part);

Result<PublicKey> make_public_key(KeyRole role, Bytes public_part);

// Key file: role byte, u32-prefixed public part, u32-prefixed private part
// (length 0 in a public-only export). Little-endian.
Bytes export_keypair(const KeyPair& key);
Bytes export_public_key(const PublicKey& key);

struct KeyFile {
  PublicKey public_key;
  std::optional<KeyPair> keypair;  // present when the file held a private part
};

Result<KeyFile> import_key_file(ByteView data);

}  // namespace securexam

#endif  // SECUREXAM_CRYPTO_KEYS_HPP_
