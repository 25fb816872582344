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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace scsim {

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

// 20-byte package signature digest, the client identity the access control
// enforcer matches rules against.
using SignatureHash = std::array<uint8_t, 20>;

// Uppercase hex, no separators ("DEADBEEF"). This rendering is shared by the
// CLI, golden report files and the rule-db text format.
std::string toHex(BytesView data);
Bytes fromHex(const std::string& hex);

std::string toHex(const SignatureHash& hash);
SignatureHash hashFromHex(const std::string& hex);

}  // namespace scsim
