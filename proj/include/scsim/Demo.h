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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scsim/Bytes.h"
#include "scsim/Discovery.h"

namespace scsim {

struct DemoOptions {
    LoaderMode mode = LoaderMode::Legacy;
    std::string profile = "nexus6";
    std::string workdir;    // created under /tmp when empty
    std::string reportOut;  // overrides the report sink (legacy mode)
    std::optional<std::vector<SignatureHash>> allowlist;
    bool includeMockSe = false;  // also provision the benign MOCKSE01 bundle
};

struct DemoOutcome {
    std::string verdict;  // CONFIRMED | CONTAINED | DISABLED | BLOCKED | UNEXPECTED
    bool expectedHeld = false;
    std::vector<std::string> readers;
    int addonCount = 0;
    std::string reportPath;
    std::string workdir;
    // Ordered machine-readable lines, ready for `key: value` printing.
    std::vector<std::pair<std::string, std::string>> lines;
};

// Provisions a scratch sandbox (profile packages + exploit bundle), boots
// the service in the requested loader mode, collects the probe report and
// judges it against the mode's expected containment property.
DemoOutcome runExploitDemo(const DemoOptions& options);

// Writes the canonical bundle manifests used by demos and tests.
void writeExploitBundle(const std::string& bundleDir);
void writeMockSeBundle(const std::string& bundleDir);

// The exploit bundle's signature hash (manifest constant).
SignatureHash exploitBundleSignature();
SignatureHash mockSeBundleSignature();

}  // namespace scsim
