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


#include <utility>

#include "doctest.h"
#include "securexam/core/bytes.hpp"
#include "securexam/core/digest.hpp"
#include "securexam/core/error.hpp"
#include "securexam/core/random.hpp"
#include "securexam/core/time.hpp"

using namespace securexam;

TEST_CASE("sha256 matches published test vectors") {
  CHECK(sha256("").hex() == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256("abc").hex() == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  Digest256 inc = Sha256().update("a").update("bc").finish();
  CHECK(inc == sha256("abc"));
}

TEST_CASE("hex and base64 round trip") {
  Bytes data{0x00, 0x01, 0xfe, 0xff, 0x7f};
  CHECK(to_hex(data) == "0001feff7f");
  CHECK(from_hex("0001feff7f") == data);
  CHECK_FALSE(from_hex("0g").has_value());
  CHECK_FALSE(from_hex("abc").has_value());
  CHECK(from_base64(to_base64(data)) == data);
  CHECK(to_base64(as_bytes("Man")) == "TWFu");
  CHECK_FALSE(from_base64("***").has_value());
}

TEST_CASE("byte reader rejects truncation") {
  ByteWriter w;
  w.put_u32(7);
  w.put_prefixed(as_bytes("hello"));
  Bytes b = std::move(w).take();
  CHECK(b.size() == 4 + 4 + 5);
  ByteReader r(b);
  CHECK(r.u32() == 7u);
  auto s = r.prefixed();
  REQUIRE(s.has_value());
  CHECK(to_string(*s) == "hello");
  CHECK(r.at_end());

  Bytes cut(b.begin(), b.end() - 1);
  ByteReader r2(cut);
  r2.u32();
  CHECK_FALSE(r2.prefixed().has_value());
}

TEST_CASE("error codes round trip through their names") {
  int named = 0;
  for (int i = 0; i < 256; ++i) {
    auto code = static_cast<ErrorCode>(i);
    std::string_view name = to_string(code);
    if (name == "Internal" && code != ErrorCode::kInternal) break;
    CHECK(error_code_from_string(name) == code);
    ++named;
  }
  CHECK(named == 60);
  CHECK(to_string(ErrorCode::kPastDeadline) == "PastDeadline");
  CHECK_FALSE(error_code_from_string("NoSuchCode").has_value());
}

TEST_CASE("result carries either value or error") {
  Result<int> ok = 5;
  CHECK(ok.ok());
  CHECK(*ok == 5);
  Result<int> bad = Error(ErrorCode::kNotFound, "missing");
  CHECK_FALSE(bad.ok());
  CHECK(bad.code() == ErrorCode::kNotFound);
  Status st = Error(ErrorCode::kTampered, "x").with_cause(ErrorCode::kDigestMismatch);
  CHECK(st.error().cause == ErrorCode::kDigestMismatch);
}

TEST_CASE("timestamps parse and print in UTC") {
  auto t = parse_timestamp("2026-10-16T10:00:00Z");
  REQUIRE(t.has_value());
  CHECK(to_unix(*t) == 1792144800);
  CHECK(to_iso8601(*t) == "2026-10-16T10:00:00Z");
  CHECK(parse_timestamp("1792144800") == t);
  CHECK_FALSE(parse_timestamp("2026-13-01T00:00:00Z").has_value());
  CHECK_FALSE(parse_timestamp("2026-10-16 10:00:00").has_value());
}

TEST_CASE("uniform sampling stays in range") {
  REQUIRE(ensure_crypto_runtime().ok());
  auto& rng = system_random();
  for (int i = 0; i < 1000; ++i) CHECK(rng.uniform(7) < 7u);
  CHECK(rng.bytes(32).size() == 32);
  CHECK(rng.bytes(32) != rng.bytes(32));
}
