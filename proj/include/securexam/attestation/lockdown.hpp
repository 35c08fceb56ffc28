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

#ifndef SECUREXAM_ATTESTATION_LOCKDOWN_HPP_
#define SECUREXAM_ATTESTATION_LOCKDOWN_HPP_

#include <mutex>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "securexam/core/digest.hpp"
#include "securexam/core/error.hpp"
#include "securexam/core/time.hpp"

namespace securexam {

// What a candidate machine claims about its environment. A claim, verified
// against the sanctioned runtime digest; never trusted on its own.
struct LockdownReport {
  bool communications_disabled = false;
  bool external_storage_blocked = false;
  Digest256 environment_digest;
  Timestamp client_time;  // informational only

  static Result<LockdownReport> from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

inline constexpr std::string_view kViolationCommunications = "communications";
inline constexpr std::string_view kViolationExternalStorage = "external-storage";
inline constexpr std::string_view kViolationEnvironment = "environment-digest";

struct LockdownVerdict {
  bool passed = false;
  std::vector<std::string> violations;  // every failed measure, in fixed order
};

LockdownVerdict verify_lockdown(const LockdownReport& report, const Digest256& expected_digest);

// --- security image ---

inline constexpr int kGlyphCatalogSize = 64;

// Human name of glyph `index` in the shipped catalog.
std::string_view glyph_name(int index);

struct SecurityImage {
  std::string sitting_id;
  int image_index = 0;
  std::string confirm_code;  // 4 letters A-Z
  Digest256 derivation;      // SHA-256(package fingerprint || sitting_id)

  nlohmann::json to_json() const;
  friend bool operator==(const SecurityImage&, const SecurityImage&) = default;
};

SecurityImage derive_security_image(const Digest256& package_fingerprint,
                                    std::string_view sitting_id);

enum class Confirmation { kConfirmed, kMismatch };

struct ConfirmationEntry {
  std::uint64_t sequence = 0;
  std::string sitting_id;
  std::string invigilator_id;
  int observed_index = 0;
  std::string observed_code;
  Confirmation outcome = Confirmation::kMismatch;
  Timestamp at;
};

// Published security images per sitting plus the append-only record of
// invigilator checks against them.
class InvigilatorBoard {
 public:
  void publish(const SecurityImage& image);
  std::optional<SecurityImage> image(std::string_view sitting_id) const;

  Result<Confirmation> confirm(std::string_view sitting_id, int observed_index,
                               std::string_view observed_code, std::string_view invigilator_id,
                               Timestamp now);

  std::vector<ConfirmationEntry> audit_log() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, SecurityImage, std::less<>> images_;
  std::vector<ConfirmationEntry> log_;
};

}  // namespace securexam

#endif  // SECUREXAM_ATTESTATION_LOCKDOWN_HPP_
