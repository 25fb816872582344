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

#include <doctest.h>

#include <filesystem>

#include "scsim/Config.h"
#include "scsim/Sandbox.h"
#include "scsim/Service.h"

using namespace scsim;
namespace fs = std::filesystem;

TEST_CASE("key=value files: parsing, comments, rendering") {
    KeyValueFile file = KeyValueFile::parse(
        "# a comment\n"
        "profile = nexus6\n"
        "loader_mode=legacy\n"
        "\n"
        "  allowlist = AA , BB \n");
    CHECK(file.get("profile") == "nexus6");
    CHECK(file.get("loader_mode") == "legacy");
    CHECK(file.getList("allowlist") == std::vector<std::string>{"AA", "BB"});
    CHECK(file.getOr("socket", "default.sock") == "default.sock");
    CHECK_FALSE(file.has("socket"));
    CHECK_THROWS_AS(file.get("socket"), Error);

    file.set("socket", "run.sock");
    KeyValueFile reparsed = KeyValueFile::parse(file.render());
    CHECK(reparsed.get("socket") == "run.sock");
    CHECK(reparsed.get("profile") == "nexus6");

    CHECK_THROWS_AS(KeyValueFile::parse("just a line\n"), Error);
    CHECK_THROWS_AS(KeyValueFile::parse("= value\n"), Error);
    CHECK_THROWS_AS(file.getBool("profile", false), Error);
}

TEST_CASE("service config loads with resolved paths and parsed allowlist") {
    fs::path dir = fs::temp_directory_path() / "scsim-test-config";
    fs::create_directories(dir);
    writeTextFile((dir / "service.conf").string(),
                  "profile = oppo\n"
                  "loader_mode = hardened\n"
                  "plugin_root = plugins\n"
                  "socket = run/service.sock\n"
                  "report_sink = run/report.txt\n"
                  "audit_log = run/audit.log\n"
                  "allowlist = " +
                      toHex(wellknown::clientSignature()) + "\n" +
                      "vendor_prefixes = true\n"
                      "session_limit = 4\n");

    ServiceConfig config = loadServiceConfig((dir / "service.conf").string());
    CHECK(config.profile == "oppo");
    CHECK(config.loaderMode == LoaderMode::Hardened);
    CHECK(config.pluginRoot == (dir / "plugins").string());
    CHECK(config.socketPath == (dir / "run/service.sock").string());
    CHECK(config.vendorPrefixes);
    CHECK(config.sessionLimit == 4);
    REQUIRE(config.allowlist.has_value());
    REQUIRE(config.allowlist->size() == 1);
    CHECK((*config.allowlist)[0] == wellknown::clientSignature());

    // No allowlist key at all: allowlist mode disabled.
    writeTextFile((dir / "minimal.conf").string(), "profile = nexus6\n");
    ServiceConfig minimal = loadServiceConfig((dir / "minimal.conf").string());
    CHECK_FALSE(minimal.allowlist.has_value());
    CHECK(minimal.loaderMode == LoaderMode::None);

    fs::remove_all(dir);
}

TEST_CASE("loader mode parsing") {
    CHECK(loaderModeFromString("none") == LoaderMode::None);
    CHECK(loaderModeFromString("legacy") == LoaderMode::Legacy);
    CHECK(loaderModeFromString("hardened") == LoaderMode::Hardened);
    CHECK_THROWS_AS(loaderModeFromString("binder"), Error);
}
