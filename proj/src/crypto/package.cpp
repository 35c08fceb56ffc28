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

#include "securexam/crypto/package.hpp"

#include <sodium.h>

#include <set>

#include "securexam/core/random.hpp"

namespace securexam {

using nlohmann::json;

namespace {

constexpr std::size_t kContentKeyBytes = crypto_aead_xchacha20poly1305_ietf_KEYBYTES;
constexpr std::size_t kNonceBytes = crypto_aead_xchacha20poly1305_ietf_NPUBBYTES;
constexpr std::size_t kSealedKeyBytes = crypto_box_SEALBYTES + kContentKeyBytes;
constexpr std::uint32_t kMaxRecipients = 4096;

// Wipes the buffer it guards when leaving scope.
struct Wipe {
  std::span<std::uint8_t> data;
  ~Wipe() { secure_wipe(data); }
};

std::optional<Digest256> digest_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) return std::nullopt;
  return Digest256::from_hex(it->get<std::string>());
}

}  // namespace

json Manifest::to_json() const {
  json recipients = json::array();
  for (const auto& id : recipient_key_ids) recipients.push_back(id.hex());
  return {{"format_version", format_version},
          {"exam_id", exam_id},
          {"course_code", course_code},
          {"author_key_id", author_key_id.hex()},
          {"recipient_key_ids", std::move(recipients)},
          {"created_at", to_unix(created_at)},
          {"payload_digest", payload_digest.hex()},
          {"signature_scheme", signature_scheme},
          {"kem_scheme", kem_scheme},
          {"cipher_scheme", cipher_scheme},
          {"digest_scheme", digest_scheme}};
}

Result<Manifest> Manifest::from_json(const json& j) {
  auto bad = [](std::string what) { return Error(ErrorCode::kMalformedPackage, "manifest: " + what); };
  if (!j.is_object()) return bad("not an object");
  Manifest m;
  try {
    m.format_version = j.at("format_version").get<int>();
    m.exam_id = j.at("exam_id").get<std::string>();
    m.course_code = j.at("course_code").get<std::string>();
    m.created_at = from_unix(j.at("created_at").get<std::int64_t>());
    m.signature_scheme = j.at("signature_scheme").get<std::string>();
    m.kem_scheme = j.at("kem_scheme").get<std::string>();
    m.cipher_scheme = j.at("cipher_scheme").get<std::string>();
    m.digest_scheme = j.at("digest_scheme").get<std::string>();
  } catch (const json::exception& e) {
    return bad(e.what());
  }
  auto author = digest_field(j, "author_key_id");
  auto payload = digest_field(j, "payload_digest");
  if (!author || !payload) return bad("bad author_key_id or payload_digest");
  m.author_key_id = *author;
  m.payload_digest = *payload;
  auto rec = j.find("recipient_key_ids");
  if (rec == j.end() || !rec->is_array()) return bad("recipient_key_ids missing");
  for (const auto& r : *rec) {
    if (!r.is_string()) return bad("recipient id not a string");
    auto d = Digest256::from_hex(r.get<std::string>());
    if (!d) return bad("recipient id not 64 hex digits");
    m.recipient_key_ids.push_back(*d);
  }
  if (m.format_version != 1 || m.signature_scheme != kSignatureScheme ||
      m.kem_scheme != kKemScheme || m.cipher_scheme != kCipherScheme ||
      m.digest_scheme != kDigestScheme) {
    return bad("unsupported format version or scheme");
  }
  return m;
}

Result<ExamPackage> seal_exam(const ValidatedExam& exam, const KeyPair& author,
                              std::span<const PublicKey> recipients, Timestamp created_at) {
  if (auto st = ensure_crypto_runtime(); !st) return st.error();
  if (recipients.empty()) return Error(ErrorCode::kNoRecipients, "at least one recipient key is required");
  if (author.role() != KeyRole::kLecturer) {
    return Error(ErrorCode::kWrongKeyRole, "packages are signed with a lecturer key");
  }
  std::set<Digest256> seen;
  for (const auto& r : recipients) {
    if (r.role != KeyRole::kCenter) {
      return Error(ErrorCode::kWrongKeyRole, "recipients must be exam-center keys");
    }
    if (!seen.insert(r.key_id).second) {
      return Error(ErrorCode::kInvalidArgument, "recipient listed twice: " + r.key_id.hex());
    }
  }

  std::string bundle;
  try {
    bundle = canonical_bundle(exam);
  } catch (const json::exception& e) {
    return Error(ErrorCode::kSerializationFailure, e.what());
  }
  Wipe wipe_bundle{std::span<std::uint8_t>(reinterpret_cast<std::uint8_t*>(bundle.data()), bundle.size())};

  ExamPackage pkg;
  pkg.manifest.exam_id = exam.exam_id();
  pkg.manifest.course_code = exam.course_code();
  pkg.manifest.author_key_id = author.key_id();
  for (const auto& r : recipients) pkg.manifest.recipient_key_ids.push_back(r.key_id);
  pkg.manifest.created_at = created_at;
  pkg.manifest.payload_digest = sha256(bundle);
  pkg.manifest_bytes = to_bytes(pkg.manifest.canonical());

  pkg.signature.resize(crypto_sign_BYTES);
  crypto_sign_detached(pkg.signature.data(), nullptr, pkg.manifest_bytes.data(),
                       pkg.manifest_bytes.size(), author.private_part().data());

  std::uint8_t content_key[kContentKeyBytes];
  Wipe wipe_key{content_key};
  crypto_aead_xchacha20poly1305_ietf_keygen(content_key);

  pkg.ciphertext.resize(kNonceBytes + bundle.size() + crypto_aead_xchacha20poly1305_ietf_ABYTES);
  randombytes_buf(pkg.ciphertext.data(), kNonceBytes);
  unsigned long long clen = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(
      pkg.ciphertext.data() + kNonceBytes, &clen,
      reinterpret_cast<const std::uint8_t*>(bundle.data()), bundle.size(),
      pkg.manifest_bytes.data(), pkg.manifest_bytes.size(), nullptr, pkg.ciphertext.data(),
      content_key);
  pkg.ciphertext.resize(kNonceBytes + clen);

  for (const auto& r : recipients) {
    std::uint8_t curve_pk[crypto_box_PUBLICKEYBYTES];
    if (crypto_sign_ed25519_pk_to_curve25519(curve_pk, r.bytes.data()) != 0) {
      return Error(ErrorCode::kMalformedKey, "recipient key " + r.key_id.hex() + " is invalid");
    }
    EncapsulatedKey block{r.key_id, Bytes(kSealedKeyBytes)};
    crypto_box_seal(block.sealed.data(), content_key, sizeof content_key, curve_pk);
    pkg.encapsulated_keys.push_back(std::move(block));
  }
  return pkg;
}

Status verify_package_signature(const ExamPackage& pkg, const PublicKey& author) {
  if (auto st = ensure_crypto_runtime(); !st) return st.error();
  if (pkg.manifest.author_key_id != author.key_id) {
    return {ErrorCode::kBadSignature, "manifest names a different author key"};
  }
  if (pkg.signature.size() != crypto_sign_BYTES ||
      crypto_sign_verify_detached(pkg.signature.data(), pkg.manifest_bytes.data(),
                                  pkg.manifest_bytes.size(), author.bytes.data()) != 0) {
    return {ErrorCode::kBadSignature, "manifest signature does not verify"};
  }
  return {};
}

Result<ValidatedExam> unseal_exam(const ExamPackage& pkg, const KeyPair& recipient,
                                  const PublicKey& author) {
  if (auto st = verify_package_signature(pkg, author); !st) return st.error();

  const auto& listed = pkg.manifest.recipient_key_ids;
  if (pkg.encapsulated_keys.size() != listed.size()) {
    return Error(ErrorCode::kTampered, "encapsulation blocks do not match the signed recipient list");
  }
  const EncapsulatedKey* mine = nullptr;
  for (std::size_t i = 0; i < listed.size(); ++i) {
    if (pkg.encapsulated_keys[i].recipient_key_id != listed[i]) {
      return Error(ErrorCode::kTampered, "encapsulation blocks do not match the signed recipient list");
    }
    if (listed[i] == recipient.key_id()) mine = &pkg.encapsulated_keys[i];
  }
  if (mine == nullptr) {
    return Error(ErrorCode::kNotARecipient, "key " + recipient.key_id().hex() + " is not a recipient");
  }

  std::uint8_t curve_pk[crypto_box_PUBLICKEYBYTES];
  std::uint8_t curve_sk[crypto_box_SECRETKEYBYTES];
  Wipe wipe_sk{curve_sk};
  if (crypto_sign_ed25519_pk_to_curve25519(curve_pk, recipient.public_part().data()) != 0 ||
      crypto_sign_ed25519_sk_to_curve25519(curve_sk, recipient.private_part().data()) != 0) {
    return Error(ErrorCode::kMalformedKey, "recipient key cannot be converted for decryption");
  }
  std::uint8_t content_key[kContentKeyBytes];
  Wipe wipe_key{content_key};
  if (mine->sealed.size() != kSealedKeyBytes ||
      crypto_box_seal_open(content_key, mine->sealed.data(), mine->sealed.size(), curve_pk,
                           curve_sk) != 0) {
    return Error(ErrorCode::kTampered, "content key block does not open");
  }

  if (pkg.ciphertext.size() < kNonceBytes + crypto_aead_xchacha20poly1305_ietf_ABYTES) {
    return Error(ErrorCode::kTampered, "ciphertext too short");
  }
  Bytes plain(pkg.ciphertext.size() - kNonceBytes);
  Wipe wipe_plain{plain};
  unsigned long long plen = 0;
  if (crypto_aead_xchacha20poly1305_ietf_decrypt(
          plain.data(), &plen, nullptr, pkg.ciphertext.data() + kNonceBytes,
          pkg.ciphertext.size() - kNonceBytes, pkg.manifest_bytes.data(),
          pkg.manifest_bytes.size(), pkg.ciphertext.data(), content_key) != 0) {
    return Error(ErrorCode::kTampered, "authenticated decryption failed");
  }
  ByteView bundle(plain.data(), static_cast<std::size_t>(plen));
  if (sha256(bundle) != pkg.manifest.payload_digest) {
    return Error(ErrorCode::kTampered, "payload digest mismatch");
  }

  json draft = json::parse(bundle.begin(), bundle.end(), nullptr, /*allow_exceptions=*/false);
  if (draft.is_discarded()) return Error(ErrorCode::kInvalidPayload, "bundle is not JSON");
  auto exam = validate_exam(draft);
  if (!exam) {
    return Error(ErrorCode::kInvalidPayload, exam.error().describe()).with_cause(exam.error().code);
  }
  if (exam->exam_id() != pkg.manifest.exam_id || exam->course_code() != pkg.manifest.course_code) {
    return Error(ErrorCode::kInvalidPayload, "bundle does not match manifest exam_id/course_code");
  }
  return exam;
}

Bytes serialize_package(const ExamPackage& pkg) {
  ByteWriter w;
  w.put_raw(as_bytes(kPackageMagic));
  w.put_prefixed(pkg.manifest_bytes);
  w.put_prefixed(pkg.signature);
  w.put_u32(static_cast<std::uint32_t>(pkg.encapsulated_keys.size()));
  for (const auto& k : pkg.encapsulated_keys) {
    Bytes block(k.recipient_key_id.bytes.begin(), k.recipient_key_id.bytes.end());
    block.insert(block.end(), k.sealed.begin(), k.sealed.end());
    w.put_prefixed(block);
  }
  w.put_raw(pkg.ciphertext);
  return std::move(w).take();
}

Result<ExamPackage> parse_package(ByteView data) {
  auto bad = [](std::string what) { return Error(ErrorCode::kMalformedPackage, std::move(what)); };
  ByteReader r(data);
  auto magic = r.raw(kPackageMagic.size());
  if (!magic || !std::equal(magic->begin(), magic->end(), as_bytes(kPackageMagic).begin())) {
    return bad("missing SECUREXAM-PKG header");
  }
  ExamPackage pkg;
  auto manifest = r.prefixed();
  if (!manifest) return bad("truncated manifest");
  pkg.manifest_bytes.assign(manifest->begin(), manifest->end());
  auto sig = r.prefixed();
  if (!sig) return bad("truncated signature");
  pkg.signature.assign(sig->begin(), sig->end());
  auto count = r.u32();
  if (!count || *count > kMaxRecipients) return bad("bad encapsulation block count");
  for (std::uint32_t i = 0; i < *count; ++i) {
    auto block = r.prefixed();
    if (!block || block->size() < 32) return bad("truncated encapsulation block");
    EncapsulatedKey k;
    std::copy_n(block->begin(), 32, k.recipient_key_id.bytes.begin());
    k.sealed.assign(block->begin() + 32, block->end());
    pkg.encapsulated_keys.push_back(std::move(k));
  }
  ByteView ct = r.rest();
  pkg.ciphertext.assign(ct.begin(), ct.end());

  json mj = json::parse(pkg.manifest_bytes.begin(), pkg.manifest_bytes.end(), nullptr, false);
  if (mj.is_discarded()) return bad("manifest is not JSON");
  auto m = Manifest::from_json(mj);
  if (!m) return m.error();
  pkg.manifest = std::move(*m);
  return pkg;
}

Digest256 package_fingerprint(const ExamPackage& pkg) {
  return sha256(serialize_package(pkg));
}

Digest256 package_fingerprint(ByteView package_bytes) { return sha256(package_bytes); }

}  // namespace securexam
