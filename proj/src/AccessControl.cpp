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

#include "scsim/AccessControl.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "scsim/BerTlv.h"
#include "scsim/Errors.h"

namespace scsim {

namespace {

const TlvNode* findChild(const TlvNode& parent, uint16_t tag) {
    for (const TlvNode& child : parent.children) {
        if (child.tag == tag) return &child;
    }
    return nullptr;
}

Bytes filtersToBytes(const std::vector<ApduFilter>& filters) {
    Bytes out;
    for (const ApduFilter& f : filters) {
        out.insert(out.end(), f.header.begin(), f.header.end());
        out.insert(out.end(), f.mask.begin(), f.mask.end());
    }
    return out;
}

std::vector<ApduFilter> filtersFromBytes(BytesView raw) {
    if (raw.empty() || raw.size() % 8 != 0) {
        throw Error(ErrorCode::MalformedRuleDb,
                    "APDU-AR-DO filter payload must be a nonempty multiple of 8 bytes");
    }
    std::vector<ApduFilter> out;
    for (size_t i = 0; i < raw.size(); i += 8) {
        ApduFilter f;
        std::copy_n(raw.begin() + i, 4, f.header.begin());
        std::copy_n(raw.begin() + i + 4, 4, f.mask.begin());
        out.push_back(f);
    }
    return out;
}

// Specificity classes for rule selection, higher wins.
int specificity(const AccessRule& rule) {
    int score = 0;
    if (rule.aidRef) score += 2;
    if (rule.hashRef) score += 1;
    return score;
}

}  // namespace

const char* decisionKindName(Decision::Kind kind) {
    switch (kind) {
        case Decision::Kind::Allowed: return "Allowed";
        case Decision::Kind::AllowedFiltered: return "AllowedFiltered";
        case Decision::Kind::Denied: return "Denied";
        case Decision::Kind::DeniedNoDb: return "DeniedNoDb";
    }
    return "?";
}

Bytes encodeRuleDb(const AccessRuleDb& db) {
    std::vector<TlvNode> refArDos;
    for (const AccessRule& rule : db.rules) {
        TlvNode aidRef = makePrimitive(aratag::kAidRefDo, rule.aidRef.value_or(Bytes{}));
        Bytes hashBytes;
        if (rule.hashRef) {
            hashBytes.assign(rule.hashRef->begin(), rule.hashRef->end());
        }
        TlvNode hashRef = makePrimitive(aratag::kHashRefDo, std::move(hashBytes));

        Bytes apduValue;
        switch (rule.policy) {
            case RulePolicy::Allow:
                apduValue = {0x01};
                break;
            case RulePolicy::Deny:
                apduValue = {0x00};
                break;
            case RulePolicy::AllowFiltered:
                if (rule.filters.empty()) {
                    throw Error(ErrorCode::MalformedRuleDb, "AllowFiltered rule without filters");
                }
                apduValue = filtersToBytes(rule.filters);
                break;
        }

        TlvNode refDo = makeConstructed(aratag::kRefDo, {std::move(aidRef), std::move(hashRef)});
        TlvNode arDo = makeConstructed(
            aratag::kArDo, {makePrimitive(aratag::kApduArDo, std::move(apduValue))});
        refArDos.push_back(makeConstructed(aratag::kRefArDo, {std::move(refDo), std::move(arDo)}));
    }
    return serializeBerTlv(makeConstructed(aratag::kResponseAllArDo, std::move(refArDos)));
}

AccessRuleDb decodeRuleDb(BytesView raw) {
    TlvNode root = parseSingleTlv(raw);
    if (root.tag != aratag::kResponseAllArDo) {
        throw Error(ErrorCode::MalformedRuleDb, "rule database must be a single Response-ALL-AR-DO");
    }

    AccessRuleDb db;
    for (const TlvNode& refAr : root.children) {
        if (refAr.tag != aratag::kRefArDo || refAr.children.size() != 2) {
            throw Error(ErrorCode::MalformedRuleDb, "REF-AR-DO must hold exactly REF-DO and AR-DO");
        }
        const TlvNode* refDo = findChild(refAr, aratag::kRefDo);
        const TlvNode* arDo = findChild(refAr, aratag::kArDo);
        if (!refDo || !arDo || refDo->children.size() != 2) {
            throw Error(ErrorCode::MalformedRuleDb, "REF-AR-DO children have wrong tags or arity");
        }
        const TlvNode* aidRef = findChild(*refDo, aratag::kAidRefDo);
        const TlvNode* hashRef = findChild(*refDo, aratag::kHashRefDo);
        if (!aidRef || !hashRef) {
            throw Error(ErrorCode::MalformedRuleDb, "REF-DO must hold AID-REF-DO and Hash-REF-DO");
        }

        AccessRule rule;
        if (!aidRef->value.empty()) {
            if (aidRef->value.size() < 5 || aidRef->value.size() > 16) {
                throw Error(ErrorCode::MalformedRuleDb, "AID-REF-DO must be empty or 5..16 bytes");
            }
            rule.aidRef = aidRef->value;
        }
        if (!hashRef->value.empty()) {
            if (hashRef->value.size() != 20) {
                throw Error(ErrorCode::MalformedRuleDb, "Hash-REF-DO must be empty or 20 bytes");
            }
            SignatureHash hash{};
            std::copy(hashRef->value.begin(), hashRef->value.end(), hash.begin());
            rule.hashRef = hash;
        }

        if (arDo->children.size() != 1 || arDo->children[0].tag != aratag::kApduArDo) {
            throw Error(ErrorCode::MalformedRuleDb, "AR-DO must hold exactly one APDU-AR-DO");
        }
        const Bytes& apduValue = arDo->children[0].value;
        if (apduValue == Bytes{0x01}) {
            rule.policy = RulePolicy::Allow;
        } else if (apduValue == Bytes{0x00}) {
            rule.policy = RulePolicy::Deny;
        } else {
            rule.policy = RulePolicy::AllowFiltered;
            rule.filters = filtersFromBytes(apduValue);
        }
        db.rules.push_back(std::move(rule));
    }
    return db;
}

Decision enforcerDecide(const std::optional<AccessRuleDb>& db, const SignatureHash& clientHash,
                        BytesView aid) {
    if (!db) {
        return Decision{Decision::Kind::DeniedNoDb, {}};
    }

    int bestSpecificity = -1;
    for (const AccessRule& rule : db->rules) {
        if (rule.aidRef && !std::equal(rule.aidRef->begin(), rule.aidRef->end(), aid.begin(), aid.end())) {
            continue;
        }
        if (rule.hashRef && *rule.hashRef != clientHash) {
            continue;
        }
        bestSpecificity = std::max(bestSpecificity, specificity(rule));
    }
    if (bestSpecificity < 0) {
        return Decision{Decision::Kind::Denied, {}};
    }

    // Resolve ties within the winning specificity class: Deny beats
    // AllowFiltered beats Allow; tied filter rules contribute the union of
    // their filters, kept sorted so rule order never shows through.
    bool anyDeny = false;
    bool anyFiltered = false;
    std::vector<ApduFilter> filters;
    for (const AccessRule& rule : db->rules) {
        if (specificity(rule) != bestSpecificity) continue;
        if (rule.aidRef && !std::equal(rule.aidRef->begin(), rule.aidRef->end(), aid.begin(), aid.end())) {
            continue;
        }
        if (rule.hashRef && *rule.hashRef != clientHash) {
            continue;
        }
        switch (rule.policy) {
            case RulePolicy::Deny:
                anyDeny = true;
                break;
            case RulePolicy::AllowFiltered:
                anyFiltered = true;
                filters.insert(filters.end(), rule.filters.begin(), rule.filters.end());
                break;
            case RulePolicy::Allow:
                break;
        }
    }
    if (anyDeny) {
        return Decision{Decision::Kind::Denied, {}};
    }
    if (anyFiltered) {
        std::sort(filters.begin(), filters.end());
        filters.erase(std::unique(filters.begin(), filters.end()), filters.end());
        return Decision{Decision::Kind::AllowedFiltered, std::move(filters)};
    }
    return Decision{Decision::Kind::Allowed, {}};
}

bool filterApdu(const Decision& decision, const CommandApdu& cmd) {
    if (decision.kind == Decision::Kind::Allowed) {
        return true;
    }
    if (decision.kind != Decision::Kind::AllowedFiltered) {
        return false;
    }
    const std::array<uint8_t, 4> header = {cmd.cla, cmd.ins, cmd.p1, cmd.p2};
    for (const ApduFilter& f : decision.filters) {
        bool match = true;
        for (int i = 0; i < 4; ++i) {
            if ((header[i] & f.mask[i]) != (f.header[i] & f.mask[i])) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

AccessRule parseRuleLine(const std::string& line) {
    std::istringstream in(line);
    std::string aidTok, hashTok, policyTok;
    if (!(in >> aidTok >> hashTok >> policyTok)) {
        throw Error(ErrorCode::BadRuleFile, "rule line needs aid=, hash= and policy= fields");
    }
    std::string rest;
    if (in >> rest) {
        throw Error(ErrorCode::BadRuleFile, "unexpected trailing field \"" + rest + "\"");
    }
    auto stripPrefix = [](const std::string& tok, const std::string& prefix) {
        if (tok.rfind(prefix, 0) != 0) {
            throw Error(ErrorCode::BadRuleFile, "expected \"" + prefix + "\" in \"" + tok + "\"");
        }
        return tok.substr(prefix.size());
    };

    AccessRule rule;
    std::string aidVal = stripPrefix(aidTok, "aid=");
    if (aidVal != "*") {
        Bytes aid = fromHex(aidVal);
        if (aid.size() < 5 || aid.size() > 16) {
            throw Error(ErrorCode::BadRuleFile, "aid must be 5..16 bytes");
        }
        rule.aidRef = std::move(aid);
    }
    std::string hashVal = stripPrefix(hashTok, "hash=");
    if (hashVal != "*") {
        rule.hashRef = hashFromHex(hashVal);
    }

    std::string policyVal = stripPrefix(policyTok, "policy=");
    if (policyVal == "allow") {
        rule.policy = RulePolicy::Allow;
    } else if (policyVal == "deny") {
        rule.policy = RulePolicy::Deny;
    } else if (policyVal.rfind("filters:", 0) == 0) {
        rule.policy = RulePolicy::AllowFiltered;
        std::istringstream filterIn(policyVal.substr(8));
        std::string elem;
        while (std::getline(filterIn, elem, ',')) {
            Bytes raw = fromHex(elem);
            if (raw.size() != 8) {
                throw Error(ErrorCode::BadRuleFile, "filter element must be 8 bytes (header+mask)");
            }
            ApduFilter f;
            std::copy_n(raw.begin(), 4, f.header.begin());
            std::copy_n(raw.begin() + 4, 4, f.mask.begin());
            rule.filters.push_back(f);
        }
        if (rule.filters.empty()) {
            throw Error(ErrorCode::BadRuleFile, "filters: list must not be empty");
        }
    } else {
        throw Error(ErrorCode::BadRuleFile, "unknown policy \"" + policyVal + "\"");
    }
    return rule;
}

AccessRuleDb loadRuleFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open rule file " + path);
    }
    AccessRuleDb db;
    std::string line;
    while (std::getline(in, line)) {
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        db.rules.push_back(parseRuleLine(line));
    }
    return db;
}

std::string formatRuleLine(const AccessRule& rule) {
    std::string out = "aid=";
    out += rule.aidRef ? toHex(*rule.aidRef) : "*";
    out += " hash=";
    out += rule.hashRef ? toHex(*rule.hashRef) : "*";
    out += " policy=";
    switch (rule.policy) {
        case RulePolicy::Allow:
            out += "allow";
            break;
        case RulePolicy::Deny:
            out += "deny";
            break;
        case RulePolicy::AllowFiltered: {
            out += "filters:";
            for (size_t i = 0; i < rule.filters.size(); ++i) {
                if (i) out += ",";
                Bytes raw(rule.filters[i].header.begin(), rule.filters[i].header.end());
                raw.insert(raw.end(), rule.filters[i].mask.begin(), rule.filters[i].mask.end());
                out += toHex(raw);
            }
            break;
        }
    }
    return out;
}

}  // namespace scsim
