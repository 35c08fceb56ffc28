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

#ifndef SECUREXAM_CRYPTO_PACKAGE_HPP_
#define SECUREXAM_CRYPTO_PACKAGE_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "securexam/core/bytes.hpp"
#include "securexam/core/digest.hpp"
#include "securexam/core/error.hpp"
#include "securexam/core/time.hpp"
#include "securexam/crypto/keys.hpp"
#include "securexam/exam/model.hpp"

namespace securexam {

inline constexpr std::string_view kPackageMagic{"SECUREXAM-PKG\0\0\0", 16};

inline constexpr std::string_view kSignatureScheme = "ed25519";
inline constexpr std::string_view kKemScheme = "x25519-sealedbox";
inline constexpr std::string_view kCipherScheme = "xchacha20poly1305-ietf";
inline constexpr std::string_view kDigestScheme = "sha256";

// Plaintext metadata; signed by the author.
struct Manifest {
  int format_version = 1;
  std::string exam_id;
  std::string course_code;
  Digest256 author_key_id;
  std::vector<Digest256> recipient_key_ids;
  Timestamp created_at;
  Digest256 payload_digest;  // SHA-256 of the canonical bundle
  std::string signature_scheme{kSignatureScheme};
  std::string kem_scheme{kKemScheme};
  std::string cipher_scheme{kCipherScheme};
  std::string digest_scheme{kDigestScheme};

  nlohmann::json to_json() const;
  // Canonical JSON: sorted keys, compact.
  std::string canonical() const { return to_json().dump(); }
  static Result<Manifest> from_json(const nlohmann::json& j);

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

// The content key sealed to one recipient.
struct EncapsulatedKey {
  Digest256 recipient_key_id;
  Bytes sealed;  // crypto_box_seal(content key) under the recipient's X25519 key

  friend bool operator==(const EncapsulatedKey&, const EncapsulatedKey&) = default;
};

struct ExamPackage {
  Manifest manifest;
  Bytes manifest_bytes;  // exactly the bytes that were signed
  Bytes signature;
  std::vector<EncapsulatedKey> encapsulated_keys;
  Bytes ciphertext;  // 24-byte nonce || AEAD ciphertext with tag

  friend bool operator==(const ExamPackage&, const ExamPackage&) = default;
};

// Sign-then-encrypt: canonical bundle -> digest -> manifest -> signature ->
// fresh content key encrypts the bundle (manifest bytes as associated data)
// -> content key sealed to each recipient.
Result<ExamPackage> seal_exam(const ValidatedExam& exam, const KeyPair& author,
                              std::span<const PublicKey> recipients, Timestamp created_at);

// Verifies the signature before touching the ciphertext. Nothing decrypted
// escapes unless every check passes.
Result<ValidatedExam> unseal_exam(const ExamPackage& pkg, const KeyPair& recipient,
                                  const PublicKey& author);

// Signature check only; used when accepting uploads.
Status verify_package_signature(const ExamPackage& pkg, const PublicKey& author);

Bytes serialize_package(const ExamPackage& pkg);
Result<ExamPackage> parse_package(ByteView data);

// SHA-256 over the serialized package bytes.
Digest256 package_fingerprint(const ExamPackage& pkg);
Digest256 package_fingerprint(ByteView package_bytes);

}  // namespace securexam

#endif  // SECUREXAM_CRYPTO_PACKAGE_HPP_
