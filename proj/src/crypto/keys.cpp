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

#include "securexam/crypto/keys.hpp"

#include <sodium.h>

#include "securexam/core/random.hpp"

namespace securexam {

std::string_view to_string(KeyRole r) {
  return r == KeyRole::kCenter ? "center" : "lecturer";
}

std::optional<KeyRole> key_role_from_string(std::string_view s) {
  if (s == "lecturer") return KeyRole::kLecturer;
  if (s == "center") return KeyRole::kCenter;
  return std::nullopt;
}

Result<KeyPair> generate_keypair(KeyRole role) {
  if (auto st = ensure_crypto_runtime(); !st) return st.error();
  Bytes pk(crypto_sign_PUBLICKEYBYTES);
  Bytes sk(crypto_sign_SECRETKEYBYTES);
  if (crypto_sign_keypair(pk.data(), sk.data()) != 0) {
    return Error(ErrorCode::kRandomnessUnavailable, "crypto_sign_keypair failed");
  }
  KeyPair kp;
  kp.role_ = role;
  kp.key_id_ = sha256(pk);
  kp.public_ = std::move(pk);
  kp.private_ = SecretBytes(std::move(sk));
  return kp;
}

Result<KeyPair> make_keypair(KeyRole role, Bytes public_part, SecretBytes private_part) {
  if (auto st = ensure_crypto_runtime(); !st) return st.error();
  if (public_part.size() != crypto_sign_PUBLICKEYBYTES ||
      private_part.size() != crypto_sign_SECRETKEYBYTES) {
    return Error(ErrorCode::kMalformedKey, "unexpected key lengths");
  }
  std::uint8_t derived[crypto_sign_PUBLICKEYBYTES];
  crypto_sign_ed25519_sk_to_pk(derived, private_part.data());
  if (sodium_memcmp(derived, public_part.data(), sizeof derived) != 0) {
    return Error(ErrorCode::kMalformedKey, "private part does not match public part");
  }
  KeyPair kp;
  kp.role_ = role;
  kp.key_id_ = sha256(public_part);
  kp.public_ = std::move(public_part);
  kp.private_ = std::move(private_part);
  return kp;
}

Result<PublicKey> make_public_key(KeyRole role, Bytes public_part) {
  if (auto st = ensure_crypto_runtime(); !st) return st.error();
  if (public_part.size() != crypto_sign_PUBLICKEYBYTES) {
    return Error(ErrorCode::kMalformedKey, "public key must be 32 bytes");
  }
  std::uint8_t curve[crypto_box_PUBLICKEYBYTES];
  if (crypto_sign_ed25519_pk_to_curve25519(curve, public_part.data()) != 0) {
    return Error(ErrorCode::kMalformedKey, "public key is not a valid Ed25519 point");
  }
  PublicKey out;
  out.role = role;
  out.key_id = sha256(public_part);
  out.bytes = std::move(public_part);
  return out;
}

Bytes export_keypair(const KeyPair& key) {
  ByteWriter w;
  w.put_u8(static_cast<std::uint8_t>(key.role()));
  w.put_prefixed(key.public_part());
  w.put_prefixed(key.private_part().view());
  return std::move(w).take();
}

Bytes export_public_key(const PublicKey& key) {
  ByteWriter w;
  w.put_u8(static_cast<std::uint8_t>(key.role));
  w.put_prefixed(key.bytes);
  w.put_u32(0);
  return std::move(w).take();
}

Result<KeyFile> import_key_file(ByteView data) {
  ByteReader r(data);
  auto role_byte = r.u8();
  auto pub = r.prefixed();
  auto priv = r.prefixed();
  if (!role_byte || !pub || !priv || !r.at_end()) {
    return Error(ErrorCode::kMalformedKey, "truncated or oversized key file");
  }
  if (*role_byte > 1) return Error(ErrorCode::kMalformedKey, "unknown role byte");
  const auto role = static_cast<KeyRole>(*role_byte);

  auto pk = make_public_key(role, Bytes(pub->begin(), pub->end()));
  if (!pk) return pk.error();
  KeyFile out{*pk, std::nullopt};
  if (!priv->empty()) {
    auto kp = make_keypair(role, Bytes(pub->begin(), pub->end()),
                           SecretBytes(Bytes(priv->begin(), priv->end())));
    if (!kp) return kp.error();
    out.keypair = std::move(*kp);
  }
  return out;
}

}  // namespace securexam
