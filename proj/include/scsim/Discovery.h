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

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "scsim/Bytes.h"
#include "scsim/Sandbox.h"
#include "scsim/ServiceContext.h"
#include "scsim/Terminal.h"

namespace scsim {

enum class LoaderMode { None, Legacy, Hardened };

LoaderMode loaderModeFromString(const std::string& text);
const char* loaderModeName(LoaderMode mode);

// On-disk add-on bundle: a directory holding a `manifest` key=value file.
struct PluginManifest {
    std::string packageName;
    std::vector<std::string> entries;
    std::vector<std::string> requestedPermissions;
    bool enforceBindTerminal = false;
    SignatureHash signatureHash{};
    std::string executable;  // terminal host binary, hardened mode only
};

struct PluginBundle {
    std::string dir;
    PluginManifest manifest;
};

PluginManifest parseManifest(const std::string& path);

// All bundles under pluginRoot, sorted by directory name. Directories
// without a manifest are skipped.
std::vector<PluginBundle> scanBundles(const std::string& pluginRoot);

// Discovery predicate of the add-on loader: package name prefixes. The CTS
// prefix carries no trailing dot.
bool packageNameMatches(const std::string& packageName, bool vendorPrefixes);

// Package names of matching bundles under pluginRoot, in bundle scan order.
std::vector<std::string> scanPackages(const std::string& pluginRoot, bool vendorPrefixes = false);

// Entry names ending in "Terminal".
std::vector<std::string> enumerateEntries(const PluginBundle& bundle);

bool verifySignatureAllowlist(const PluginBundle& bundle,
                              const std::vector<SignatureHash>& allowlist);

// Build-time stand-in for dynamic class loading: entry names map to terminal
// factories. The security-relevant semantics of the legacy regime -- foreign
// logic constructed under the service identity with a live service handle --
// are preserved; the artifact just does not ship a real code loader.
class EntryRegistry {
public:
    using Factory =
        std::function<std::shared_ptr<Terminal>(ServiceContext&, const PluginBundle&)>;

    void registerEntry(const std::string& name, Factory factory);
    bool has(const std::string& name) const;
    std::shared_ptr<Terminal> construct(const std::string& name, ServiceContext& context,
                                        const PluginBundle& bundle) const;

private:
    std::map<std::string, Factory> factories_;
};

// Process-wide registry with the stock entries (ExploitTerminal,
// VirtualSeTerminal) pre-registered.
EntryRegistry& builtinEntryRegistry();

// Constructs `entry` in-process under the service identity, passing the live
// service context. Performs no signature or permission check whatsoever.
std::shared_ptr<Terminal> legacyLoad(const PluginBundle& bundle, const std::string& entry,
                                     ServiceContext& context);

// Installs package records for every bundle under pluginRoot, assigning uids
// from the profile's add-on range in scan order. Already-installed packages
// are left alone, so daemon and plugin host provision identically.
void provisionBundles(Sandbox& sandbox, const std::string& pluginRoot,
                      const DeviceProfile& profile);

}  // namespace scsim
