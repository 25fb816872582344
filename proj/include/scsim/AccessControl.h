/*
 * Copyright (C) 2026 The scsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "scsim/Apdu.h"
#include "scsim/Bytes.h"

namespace scsim {

// A command matches iff (cla,ins,p1,p2) AND mask == header AND mask.
struct ApduFilter {
    std::array<uint8_t, 4> header{};
    std::array<uint8_t, 4> mask{};

    auto operator<=>(const ApduFilter&) const = default;
};

enum class RulePolicy { Allow, Deny, AllowFiltered };

// One access rule. Empty aidRef / hashRef mean wildcard.
struct AccessRule {
    std::optional<Bytes> aidRef;            // 5..16 bytes when specific
    std::optional<SignatureHash> hashRef;   // 20 bytes when specific
    RulePolicy policy = RulePolicy::Deny;
    std::vector<ApduFilter> filters;        // nonempty iff policy == AllowFiltered

    bool operator==(const AccessRule&) const = default;
};

struct AccessRuleDb {
    std::vector<AccessRule> rules;

    bool operator==(const AccessRuleDb&) const = default;
};

struct Decision {
    enum class Kind { Allowed, AllowedFiltered, Denied, DeniedNoDb };

    Kind kind = Kind::DeniedNoDb;
    std::vector<ApduFilter> filters;  // populated for AllowedFiltered

    bool allowed() const { return kind == Kind::Allowed || kind == Kind::AllowedFiltered; }

    bool operator==(const Decision&) const = default;
};

const char* decisionKindName(Decision::Kind kind);

// Rule-db data object tags. The subset follows GlobalPlatform SEAC naming:
// Response-ALL-AR-DO wraps REF-AR-DOs; each pairs a REF-DO (AID ref + hash
// ref) with an AR-DO carrying one APDU-AR-DO.
namespace aratag {
constexpr uint16_t kResponseAllArDo = 0xFF40;
constexpr uint16_t kRefArDo = 0xE2;
constexpr uint16_t kRefDo = 0xE1;
constexpr uint16_t kAidRefDo = 0x4F;
constexpr uint16_t kHashRefDo = 0xC1;
constexpr uint16_t kArDo = 0xE3;
constexpr uint16_t kApduArDo = 0xD0;
}  // namespace aratag

Bytes encodeRuleDb(const AccessRuleDb& db);
AccessRuleDb decodeRuleDb(BytesView raw);

// Selects the most specific matching rule:
//   (aid,hash) > (aid,*) > (*,hash) > (*,*)
// Among equally specific matches Deny > AllowFiltered > Allow; filters of
// tied AllowFiltered rules are merged. No match at all is a plain Denied;
// a missing database is DeniedNoDb.
Decision enforcerDecide(const std::optional<AccessRuleDb>& db, const SignatureHash& clientHash,
                        BytesView aid);

// Applies a verdict to one command. Precondition: decision.allowed().
bool filterApdu(const Decision& decision, const CommandApdu& cmd);

// Text form used by rule files, one rule per line:
//   aid=<hex|*> hash=<hex|*> policy=<allow|deny|filters:hex8(,hex8)*>
// where each filter element is 8 hex-encoded bytes: 4 header then 4 mask.
AccessRule parseRuleLine(const std::string& line);
AccessRuleDb loadRuleFile(const std::string& path);
std::string formatRuleLine(const AccessRule& rule);

}  // namespace scsim
