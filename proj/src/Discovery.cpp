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

#include "scsim/Discovery.h"

#include <algorithm>
#include <filesystem>
#include <mutex>

#include "scsim/Config.h"
#include "scsim/Errors.h"

namespace scsim {

namespace fs = std::filesystem;

namespace {

// The CTS prefix deliberately has no trailing dot; the discovery code this
// models matches it as a bare prefix, so e.g. "…openmobileapi.ctsx" counts.
const char* kStandardPrefixes[] = {
    "org.simalliance.openmobileapi.service.terminals.",
    "org.simalliance.openmobileapi.cts",
};

const char* kVendorPrefixes[] = {
    "com.nxp.nfceeapi.service.terminals.",
    "com.nxp.nfceeapi.cts",
};

bool startsWith(const std::string& s, const std::string& prefix) {
    return s.rfind(prefix, 0) == 0;
}

}  // namespace

LoaderMode loaderModeFromString(const std::string& text) {
    if (text == "none") return LoaderMode::None;
    if (text == "legacy") return LoaderMode::Legacy;
    if (text == "hardened") return LoaderMode::Hardened;
    throw Error(ErrorCode::BadConfig, "loader_mode must be none, legacy or hardened: " + text);
}

const char* loaderModeName(LoaderMode mode) {
    switch (mode) {
        case LoaderMode::None: return "none";
        case LoaderMode::Legacy: return "legacy";
        case LoaderMode::Hardened: return "hardened";
    }
    return "?";
}

PluginManifest parseManifest(const std::string& path) {
    KeyValueFile file = KeyValueFile::load(path);

    PluginManifest manifest;
    manifest.packageName = file.get("package_name");
    manifest.entries = file.getList("entries");
    if (manifest.entries.empty()) {
        throw Error(ErrorCode::BadConfig, "manifest without entries: " + path);
    }
    manifest.requestedPermissions = file.getList("requested_permissions");
    manifest.enforceBindTerminal = file.getBool("enforce_bind_terminal", false);
    manifest.signatureHash = hashFromHex(file.get("signature_hash"));
    manifest.executable = file.getOr("executable", "");
    return manifest;
}

std::vector<PluginBundle> scanBundles(const std::string& pluginRoot) {
    std::error_code ec;
    fs::directory_iterator it(pluginRoot, ec);
    if (ec) {
        throw Error(ErrorCode::IoError, "cannot read plugin root " + pluginRoot + ": " + ec.message());
    }

    std::vector<std::string> dirs;
    for (const fs::directory_entry& entry : it) {
        if (entry.is_directory() && fs::exists(entry.path() / "manifest")) {
            dirs.push_back(entry.path().string());
        }
    }
    std::sort(dirs.begin(), dirs.end());

    std::vector<PluginBundle> bundles;
    for (const std::string& dir : dirs) {
        bundles.push_back(PluginBundle{dir, parseManifest(dir + "/manifest")});
    }
    return bundles;
}

bool packageNameMatches(const std::string& packageName, bool vendorPrefixes) {
    for (const char* prefix : kStandardPrefixes) {
        if (startsWith(packageName, prefix)) return true;
    }
    if (vendorPrefixes) {
        for (const char* prefix : kVendorPrefixes) {
            if (startsWith(packageName, prefix)) return true;
        }
    }
    return false;
}

std::vector<std::string> scanPackages(const std::string& pluginRoot, bool vendorPrefixes) {
    std::vector<std::string> names;
    for (const PluginBundle& bundle : scanBundles(pluginRoot)) {
        if (packageNameMatches(bundle.manifest.packageName, vendorPrefixes)) {
            names.push_back(bundle.manifest.packageName);
        }
    }
    return names;
}

std::vector<std::string> enumerateEntries(const PluginBundle& bundle) {
    static const std::string suffix = "Terminal";
    std::vector<std::string> out;
    for (const std::string& entry : bundle.manifest.entries) {
        if (entry.size() >= suffix.size() &&
            entry.compare(entry.size() - suffix.size(), suffix.size(), suffix) == 0) {
            out.push_back(entry);
        }
    }
    return out;
}

bool verifySignatureAllowlist(const PluginBundle& bundle,
                              const std::vector<SignatureHash>& allowlist) {
    return std::find(allowlist.begin(), allowlist.end(), bundle.manifest.signatureHash) !=
           allowlist.end();
}

void EntryRegistry::registerEntry(const std::string& name, Factory factory) {
    factories_[name] = std::move(factory);
}

bool EntryRegistry::has(const std::string& name) const { return factories_.count(name) > 0; }

std::shared_ptr<Terminal> EntryRegistry::construct(const std::string& name,
                                                   ServiceContext& context,
                                                   const PluginBundle& bundle) const {
    auto it = factories_.find(name);
    if (it == factories_.end()) {
        throw Error(ErrorCode::EntryNotFound, "no loadable entry named " + name);
    }
    return it->second(context, bundle);
}

std::shared_ptr<Terminal> legacyLoad(const PluginBundle& bundle, const std::string& entry,
                                     ServiceContext& context) {
    EntryRegistry& registry = builtinEntryRegistry();
    if (!registry.has(entry)) {
        throw Error(ErrorCode::EntryNotFound, "no loadable entry named " + entry);
    }
    if (context.audit) {
        context.audit->log("loader", "mode=legacy entry=" + entry +
                                         " package=" + bundle.manifest.packageName);
    }
    try {
        // The constructor runs inside the service process, under the service
        // identity, with the live context handle. Nothing is checked first.
        return runAs(context.serviceIdentity,
                     [&] { return registry.construct(entry, context, bundle); });
    } catch (const Error& e) {
        if (e.code() == ErrorCode::EntryNotFound) throw;
        throw Error(ErrorCode::ConstructionFailure,
                    "entry " + entry + " failed to construct: " + e.what());
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ConstructionFailure,
                    "entry " + entry + " failed to construct: " + e.what());
    } catch (...) {
        throw Error(ErrorCode::ConstructionFailure, "entry " + entry + " failed to construct");
    }
}

void provisionBundles(Sandbox& sandbox, const std::string& pluginRoot,
                      const DeviceProfile& profile) {
    int nextUid = profile.addonUid;
    for (const PluginBundle& bundle : scanBundles(pluginRoot)) {
        int uid = nextUid++;
        if (sandbox.findPackage(bundle.manifest.packageName)) {
            continue;
        }
        PackageRecord record;
        record.name = bundle.manifest.packageName;
        record.uid = uid;
        record.signatureHash = bundle.manifest.signatureHash;
        for (const std::string& permission : bundle.manifest.requestedPermissions) {
            // Normal permissions are granted at install time; anything outside
            // the vocabulary is ignored rather than granted.
            if (permissionVocabulary().count(permission)) {
                record.grantedPermissions.insert(permission);
            }
        }
        sandbox.installPackage(std::move(record));
    }
}

}  // namespace scsim
