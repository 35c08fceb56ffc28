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

#ifndef SECUREXAM_CORE_BYTES_HPP_
#define SECUREXAM_CORE_BYTES_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace securexam {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}
inline Bytes to_bytes(std::string_view s) {
  return Bytes(s.begin(), s.end());
}
inline std::string to_string(ByteView b) {
  return std::string(b.begin(), b.end());
}

// Lowercase hex.
std::string to_hex(ByteView data);
std::optional<Bytes> from_hex(std::string_view hex);

// Standard (padded) base64.
std::string to_base64(ByteView data);
std::optional<Bytes> from_base64(std::string_view text);

// Little-endian length-prefixed container encoding.
class ByteWriter {
 public:
  void put_u8(std::uint8_t v) { out_.push_back(v); }
  void put_u32(std::uint32_t v);
  void put_raw(ByteView data) { out_.insert(out_.end(), data.begin(), data.end()); }
  // u32 length followed by the bytes.
  void put_prefixed(ByteView data);

  const Bytes& bytes() const& { return out_; }
  Bytes take() && { return std::move(out_); }

 private:
  Bytes out_;
};

// Reads what ByteWriter writes. Every accessor returns nullopt on underrun
// and leaves the reader in a failed state.
class ByteReader {
 public:
  explicit ByteReader(ByteView data) : data_(data) {}

  std::optional<std::uint8_t> u8();
  std::optional<std::uint32_t> u32();
  std::optional<ByteView> raw(std::size_t n);
  std::optional<ByteView> prefixed();
  ByteView rest();

  std::size_t remaining() const { return data_.size() - pos_; }
  bool at_end() const { return pos_ == data_.size(); }

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

// Overwrites the buffer with zeros in a way the optimizer keeps.
void secure_wipe(std::span<std::uint8_t> data);

// Byte buffer for private key material; wiped on destruction.
class SecretBytes {
 public:
  SecretBytes() = default;
  explicit SecretBytes(Bytes b) : data_(std::move(b)) {}
  SecretBytes(const SecretBytes&) = default;
  SecretBytes& operator=(const SecretBytes&) = default;
  SecretBytes(SecretBytes&&) noexcept = default;
  SecretBytes& operator=(SecretBytes&&) noexcept = default;
  ~SecretBytes() { secure_wipe(data_); }

  ByteView view() const { return data_; }
  std::uint8_t* data() { return data_.data(); }
  const std::uint8_t* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  friend bool operator==(const SecretBytes& a, const SecretBytes& b) {
    return a.data_ == b.data_;
  }

 private:
  Bytes data_;
};

}  // namespace securexam

#endif  // SECUREXAM_CORE_BYTES_HPP_
