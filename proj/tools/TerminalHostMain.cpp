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

#include <iostream>

#include <CLI11.hpp>

#include "scsim/RemoteTerminal.h"

int main(int argc, char** argv) {
    CLI::App app{"out-of-process terminal module host"};

    scsim::TerminalHostOptions options;
    app.add_option("--socket", options.socketPath, "socket to serve the terminal on")->required();
    app.add_option("--bundle", options.bundleDir, "plugin bundle directory")->required();
    app.add_option("--entry", options.entry, "terminal entry to construct")->required();
    app.add_option("--expect-token", options.expectTokenHex, "bind token to require (hex)")
        ->required();
    app.add_option("--profile", options.profileName, "device profile")->required();
    app.add_option("--plugin-root", options.pluginRoot, "plugin root for sandbox provisioning");
    app.add_option("--service-socket", options.serviceSocket, "daemon client socket");
    app.add_option("--report-sink", options.reportSink, "where probe reports go");

    CLI11_PARSE(app, argc, argv);

    try {
        return scsim::runTerminalHost(options);
    } catch (const scsim::Error& e) {
        std::cerr << "terminal host error: " << e.what() << "\n";
        return 2;
    }
}
