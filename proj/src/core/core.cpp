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

#include <sodium.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <stdexcept>

#include "securexam/core/bytes.hpp"
#include "securexam/core/digest.hpp"
#include "securexam/core/random.hpp"
#include "securexam/core/time.hpp"

namespace securexam {

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

std::optional<Bytes> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

std::string to_base64(ByteView data) {
  const int variant = sodium_base64_VARIANT_ORIGINAL;
  std::string out(sodium_base64_encoded_len(data.size(), variant), '\0');
  sodium_bin2base64(out.data(), out.size(), data.data(), data.size(), variant);
  out.resize(std::strlen(out.c_str()));
  return out;
}

std::optional<Bytes> from_base64(std::string_view text) {
  Bytes out(text.size() / 4 * 3 + 3);
  std::size_t len = 0;
  const char* end = nullptr;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(),
                        nullptr, &len, &end,
                        sodium_base64_VARIANT_ORIGINAL) != 0 ||
      end != text.data() + text.size()) {
    return std::nullopt;
  }
  out.resize(len);
  return out;
}

void ByteWriter::put_u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::put_prefixed(ByteView data) {
  put_u32(static_cast<std::uint32_t>(data.size()));
  put_raw(data);
}

std::optional<std::uint8_t> ByteReader::u8() {
  auto b = raw(1);
  if (!b) return std::nullopt;
  return (*b)[0];
}

std::optional<std::uint32_t> ByteReader::u32() {
  auto b = raw(4);
  if (!b) return std::nullopt;
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | (*b)[i];
  return v;
}

std::optional<ByteView> ByteReader::raw(std::size_t n) {
  if (n > remaining()) {
    pos_ = data_.size();
    return std::nullopt;
  }
  ByteView out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::optional<ByteView> ByteReader::prefixed() {
  auto n = u32();
  if (!n) return std::nullopt;
  return raw(*n);
}

ByteView ByteReader::rest() {
  ByteView out = data_.subspan(pos_);
  pos_ = data_.size();
  return out;
}

void secure_wipe(std::span<std::uint8_t> data) {
  if (!data.empty()) sodium_memzero(data.data(), data.size());
}

// --- digest ---

static_assert(sizeof(crypto_hash_sha256_state) <= 128);

std::string Digest256::hex() const { return to_hex(bytes); }

std::optional<Digest256> Digest256::from_hex(std::string_view hex) {
  auto raw = securexam::from_hex(hex);
  if (!raw || raw->size() != 32) return std::nullopt;
  Digest256 d;
  std::memcpy(d.bytes.data(), raw->data(), 32);
  return d;
}

Digest256 sha256(ByteView data) {
  Digest256 d;
  crypto_hash_sha256(d.bytes.data(), data.data(), data.size());
  return d;
}

Sha256::Sha256() {
  crypto_hash_sha256_init(reinterpret_cast<crypto_hash_sha256_state*>(state_.data()));
}

Sha256& Sha256::update(ByteView data) {
  crypto_hash_sha256_update(
      reinterpret_cast<crypto_hash_sha256_state*>(state_.data()), data.data(),
      data.size());
  return *this;
}

Digest256 Sha256::finish() {
  Digest256 d;
  crypto_hash_sha256_final(
      reinterpret_cast<crypto_hash_sha256_state*>(state_.data()), d.bytes.data());
  return d;
}

// --- randomness ---

Status ensure_crypto_runtime() {
  static const int rc = sodium_init();
  if (rc < 0) return {ErrorCode::kRandomnessUnavailable, "libsodium failed to initialize"};
  return {};
}

std::uint32_t RandomSource::uniform(std::uint32_t upper) {
  const std::uint32_t limit = UINT32_MAX - (UINT32_MAX % upper);
  for (;;) {
    std::uint8_t raw[4];
    fill(raw);
    std::uint32_t v = raw[0] | (raw[1] << 8) | (raw[2] << 16) |
                      (static_cast<std::uint32_t>(raw[3]) << 24);
    if (v < limit) return v % upper;
  }
}

Bytes RandomSource::bytes(std::size_t n) {
  Bytes out(n);
  fill(out);
  return out;
}

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (!ensure_crypto_runtime().ok()) {
    throw std::runtime_error("RandomnessUnavailable");
  }
  randombytes_buf(out.data(), out.size());
}

RandomSource& system_random() {
  static SystemRandom instance;
  return instance;
}

// --- time ---

std::string to_iso8601(Timestamp t) {
  std::time_t tt = static_cast<std::time_t>(to_unix(t));
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  std::string t(text);
  if (!t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    if (t.size() > 18) return std::nullopt;
    return from_unix(std::stoll(t));
  }
  int y, mo, d, h, mi, se;
  char z = 0;
  int consumed = 0;
  if (std::sscanf(t.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c%n", &y, &mo, &d, &h, &mi, &se, &z,
                  &consumed) != 7 ||
      z != 'Z' || static_cast<std::size_t>(consumed) != t.size()) {
    return std::nullopt;
  }
  std::chrono::year_month_day ymd{std::chrono::year(y), std::chrono::month(static_cast<unsigned>(mo)),
                                  std::chrono::day(static_cast<unsigned>(d))};
  if (!ymd.ok() || h > 23 || mi > 59 || se > 59 || h < 0 || mi < 0 || se < 0) return std::nullopt;
  return Timestamp(std::chrono::sys_days(ymd)) + Hours(h) + Minutes(mi) + Seconds(se);
}

}  // namespace securexam
