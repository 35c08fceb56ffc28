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

#include "securexam/attestation/lockdown.hpp"

#include <array>

namespace securexam {

using nlohmann::json;

Result<LockdownReport> LockdownReport::from_json(const json& j) {
  if (!j.is_object()) return Error(ErrorCode::kMalformedRequest, "lockdown report must be an object");
  LockdownReport r;
  auto comm = j.find("communications_disabled");
  auto storage = j.find("external_storage_blocked");
  auto env = j.find("environment_digest");
  if (comm == j.end() || !comm->is_boolean() || storage == j.end() || !storage->is_boolean() ||
      env == j.end() || !env->is_string()) {
    return Error(ErrorCode::kMalformedRequest,
                 "lockdown report needs communications_disabled, external_storage_blocked, "
                 "environment_digest");
  }
  auto digest = Digest256::from_hex(env->get<std::string>());
  if (!digest) return Error(ErrorCode::kMalformedRequest, "environment_digest must be 64 hex digits");
  r.communications_disabled = comm->get<bool>();
  r.external_storage_blocked = storage->get<bool>();
  r.environment_digest = *digest;
  if (auto t = j.find("client_time"); t != j.end() && t->is_number_integer()) {
    r.client_time = from_unix(t->get<std::int64_t>());
  }
  return r;
}

json LockdownReport::to_json() const {
  return {{"communications_disabled", communications_disabled},
          {"external_storage_blocked", external_storage_blocked},
          {"environment_digest", environment_digest.hex()},
          {"client_time", to_unix(client_time)}};
}

LockdownVerdict verify_lockdown(const LockdownReport& report, const Digest256& expected_digest) {
  LockdownVerdict v;
  if (!report.communications_disabled) v.violations.emplace_back(kViolationCommunications);
  if (!report.external_storage_blocked) v.violations.emplace_back(kViolationExternalStorage);
  if (report.environment_digest != expected_digest) v.violations.emplace_back(kViolationEnvironment);
  v.passed = v.violations.empty();
  return v;
}

namespace {

constexpr std::array<std::string_view, kGlyphCatalogSize> kGlyphs = {
    "cat",      "dog",      "rabbit",   "hamster",  "goldfish", "parrot",   "tortoise", "horse",
    "pony",     "goat",     "sheep",    "cow",      "pig",      "duck",     "goose",    "hen",
    "rooster",  "canary",   "budgie",   "ferret",   "guinea-pig", "mouse",  "rat",      "chinchilla",
    "hedgehog", "lizard",   "gecko",    "snake",    "frog",     "toad",     "newt",     "turtle",
    "donkey",   "llama",    "alpaca",   "camel",    "owl",      "eagle",    "robin",    "swan",
    "peacock",  "penguin",  "seal",     "otter",    "beaver",   "squirrel", "fox",      "deer",
    "elephant", "giraffe",  "zebra",    "lion",     "tiger",    "bear",     "panda",    "koala",
    "kangaroo", "wombat",   "platypus", "dolphin",  "whale",    "octopus",  "crab",     "butterfly",
};

}  // namespace

std::string_view glyph_name(int index) {
  if (index < 0 || index >= kGlyphCatalogSize) return {};
  return kGlyphs[static_cast<std::size_t>(index)];
}

json SecurityImage::to_json() const {
  return {{"sitting_id", sitting_id},
          {"image_index", image_index},
          {"image_name", std::string(glyph_name(image_index))},
          {"confirm_code", confirm_code}};
}

SecurityImage derive_security_image(const Digest256& package_fingerprint,
                                    std::string_view sitting_id) {
  SecurityImage img;
  img.sitting_id = std::string(sitting_id);
  img.derivation = Sha256().update(package_fingerprint.view()).update(sitting_id).finish();
  img.image_index = img.derivation.bytes[0] % kGlyphCatalogSize;
  for (int i = 1; i <= 4; ++i) {
    img.confirm_code.push_back(static_cast<char>('A' + img.derivation.bytes[i] % 26));
  }
  return img;
}

void InvigilatorBoard::publish(const SecurityImage& image) {
  std::lock_guard lock(mu_);
  images_[image.sitting_id] = image;
}

std::optional<SecurityImage> InvigilatorBoard::image(std::string_view sitting_id) const {
  std::lock_guard lock(mu_);
  auto it = images_.find(sitting_id);
  if (it == images_.end()) return std::nullopt;
  return it->second;
}

Result<Confirmation> InvigilatorBoard::confirm(std::string_view sitting_id, int observed_index,
                                               std::string_view observed_code,
                                               std::string_view invigilator_id, Timestamp now) {
  std::lock_guard lock(mu_);
  auto it = images_.find(sitting_id);
  if (it == images_.end()) {
    return Error(ErrorCode::kUnknownSitting, "no security image for sitting " + std::string(sitting_id));
  }
  const bool match = it->second.image_index == observed_index && it->second.confirm_code == observed_code;
  ConfirmationEntry e;
  e.sequence = log_.size() + 1;
  e.sitting_id = std::string(sitting_id);
  e.invigilator_id = std::string(invigilator_id);
  e.observed_index = observed_index;
  e.observed_code = std::string(observed_code);
  e.outcome = match ? Confirmation::kConfirmed : Confirmation::kMismatch;
  e.at = now;
  log_.push_back(std::move(e));
  return log_.back().outcome;
}

std::vector<ConfirmationEntry> InvigilatorBoard::audit_log() const {
  std::lock_guard lock(mu_);
  return log_;
}

}  // namespace securexam
