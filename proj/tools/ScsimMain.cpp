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

#include <signal.h>

#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "scsim/Client.h"
#include "scsim/Config.h"
#include "scsim/Daemon.h"
#include "scsim/Demo.h"
#include "scsim/Exploit.h"
#include "scsim/Service.h"

namespace {

using namespace scsim;

volatile std::sig_atomic_t shutdownRequested = 0;

void onSignal(int) { shutdownRequested = 1; }

std::optional<std::vector<SignatureHash>> parseAllowlist(const std::string& csv) {
    if (csv.empty()) return std::nullopt;
    std::vector<SignatureHash> hashes;
    std::istringstream in(csv);
    std::string elem;
    while (std::getline(in, elem, ',')) {
        if (!elem.empty()) hashes.push_back(hashFromHex(elem));
    }
    return hashes;
}

int cmdServe(const std::string& configPath) {
    ServiceConfig config = loadServiceConfig(configPath);
    DeviceProfile profile = profileByName(config.profile);

    Sandbox sandbox;
    provisionProfile(sandbox, profile);
    if (!config.pluginRoot.empty()) {
        provisionBundles(sandbox, config.pluginRoot, profile);
    }

    AuditLog audit;
    ServiceModel model(config, sandbox, audit);
    setBaseIdentity(model.identity());

    Daemon daemon(model);
    daemon.start();
    model.createTerminals();

    for (const std::string& name : model.readerNames()) {
        std::cout << "reader: " << name << "\n";
    }
    std::cout << "socket: " << config.socketPath << "\n" << std::flush;
    std::cerr << "serving; send SIGINT or SIGTERM to stop\n";

    std::signal(SIGINT, onSignal);
    std::signal(SIGTERM, onSignal);
    while (!shutdownRequested) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }

    daemon.stop();
    model.shutdown();
    return 0;
}

int cmdReaders(const std::string& socket, const std::string& package) {
    ServiceClient client = ServiceClient::connect(socket, package);
    for (const std::string& name : client.listReaders()) {
        std::cout << "reader: " << name << "\n";
    }
    return 0;
}

int cmdTransmit(const std::string& socket, const std::string& package, const std::string& reader,
                const std::string& aidHex, const std::string& apduHex) {
    ServiceClient client = ServiceClient::connect(socket, package);
    uint32_t session = client.openSession(reader);
    auto channel = client.openChannel(session, fromHex(aidHex));
    std::cout << "select_response: " << toHex(channel.selectResponse) << "\n";
    Bytes response = client.transmit(channel.channelId, fromHex(apduHex));
    std::cout << "response: " << toHex(response) << "\n";
    client.closeChannel(channel.channelId);
    client.closeSession(session);
    return 0;
}

int cmdDemoExploit(const std::string& mode, const std::string& profile, const std::string& workdir,
                   const std::string& reportOut, const std::string& allowlistCsv) {
    DemoOptions options;
    options.mode = loaderModeFromString(mode);
    options.profile = profile;
    options.workdir = workdir;
    options.reportOut = reportOut;
    options.allowlist = parseAllowlist(allowlistCsv);

    DemoOutcome outcome = runExploitDemo(options);
    for (const auto& [key, value] : outcome.lines) {
        std::cout << key << ": " << value << "\n";
    }
    std::cerr << "workdir: " << outcome.workdir << "\n";
    return outcome.expectedHeld ? 0 : 1;
}

int cmdAra(const std::string& configPath, const std::string& action, const std::string& rulesPath) {
    KeyValueFile service = KeyValueFile::load(configPath);
    std::string elementPath = service.has("element_config")
                                  ? resolveRelativeTo(configPath, service.get("element_config"))
                                  : resolveRelativeTo(configPath, "element.conf");

    KeyValueFile element;
    try {
        element = KeyValueFile::load(elementPath);
    } catch (const Error&) {
        element.set("applets", "echo");
    }

    if (action == "load") {
        if (rulesPath.empty()) {
            throw Error(ErrorCode::BadConfig, "ara load needs --rules");
        }
        // Validate before committing the path.
        AccessRuleDb db = loadRuleFile(rulesPath);
        element.set("ara_rules", std::filesystem::absolute(rulesPath).string());
        element.store(elementPath);
        if (!service.has("element_config")) {
            service.set("element_config", elementPath);
            service.store(configPath);
        }
        std::cout << "ara: installed\n";
        std::cout << "rules: " << db.rules.size() << "\n";
    } else if (action == "clear") {
        element.erase("ara_rules");
        element.store(elementPath);
        std::cout << "ara: cleared\n";
    } else {
        throw Error(ErrorCode::BadConfig, "ara action must be load or clear");
    }
    std::cout << "element_config: " << elementPath << "\n";
    std::cerr << "takes effect the next time the daemon starts\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"smartcard middleware simulator"};
    app.require_subcommand(1);

    std::string configPath;
    std::string socket;
    std::string package = wellknown::kClientPackage;
    std::string reader = UiccTerminal::kName;
    std::string aidHex;
    std::string apduHex;
    std::string mode = "legacy";
    std::string profile = "nexus6";
    std::string workdir;
    std::string reportOut;
    std::string allowlistCsv;
    std::string rulesPath;
    std::string araAction;

    CLI::App* serve = app.add_subcommand("serve", "run the service daemon");
    serve->add_option("--config", configPath, "service config file")->required();

    CLI::App* readers = app.add_subcommand("readers", "list readers through the client API");
    readers->add_option("--socket", socket, "service socket path")->required();
    readers->add_option("--package", package, "client package name");

    CLI::App* transmit = app.add_subcommand("transmit", "open a channel and send one APDU");
    transmit->add_option("--socket", socket, "service socket path")->required();
    transmit->add_option("--package", package, "client package name");
    transmit->add_option("--reader", reader, "reader name");
    transmit->add_option("--aid", aidHex, "applet AID (hex)")->required();
    transmit->add_option("--apdu", apduHex, "command APDU (hex)")->required();

    CLI::App* demo = app.add_subcommand("demo_exploit", "run the add-on terminal demo");
    demo->alias("demo-exploit");
    demo->add_option("--mode", mode, "loader mode: none|legacy|hardened");
    demo->add_option("--profile", profile, "device profile: nexus6|oppo");
    demo->add_option("--workdir", workdir, "work directory (default: fresh tmp dir)");
    demo->add_option("--report-out", reportOut, "copy the probe report here");
    demo->add_option("--allowlist", allowlistCsv, "comma-separated signature hashes");

    CLI::App* ara = app.add_subcommand("ara", "install or remove the access rule applet");
    ara->add_option("action", araAction, "load | clear")->required();
    ara->add_option("--config", configPath, "service config file")->required();
    ara->add_option("--rules", rulesPath, "rule file (one rule per line)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (serve->parsed()) return cmdServe(configPath);
        if (readers->parsed()) return cmdReaders(socket, package);
        if (transmit->parsed()) return cmdTransmit(socket, package, reader, aidHex, apduHex);
        if (demo->parsed()) return cmdDemoExploit(mode, profile, workdir, reportOut, allowlistCsv);
        if (ara->parsed()) return cmdAra(configPath, araAction, rulesPath);
    } catch (const scsim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
