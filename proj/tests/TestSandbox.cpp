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

#include <set>

#include "scsim/Sandbox.h"

using namespace scsim;

namespace {

struct Fixture {
    Sandbox sandbox;
    DeviceProfile profile;

    explicit Fixture(const std::string& name) : profile(profileByName(name)) {
        provisionProfile(sandbox, profile);
    }

    IdentityContext service() const { return serviceIdentity(sandbox); }
};

}  // namespace

TEST_CASE("profile fidelity: nexus6") {
    Fixture fx("nexus6");
    auto service = fx.sandbox.findPackage(wellknown::kServicePackage);
    REQUIRE(service.has_value());
    CHECK(service->uid == 10023);
    CHECK(service->grantedPermissions ==
          std::set<std::string>{perm::kModifyPhoneState, perm::kNfc, perm::kReceiveBootCompleted,
                                perm::kWriteSecureSettings});

    IdentityContext id = fx.service();
    CHECK(id.packageName == "org.simalliance.openmobileapi.service");
    CHECK(id.processName == "org.simalliance.openmobileapi.service:remote");
    CHECK(id.userName == "org.simalliance.uid.openmobileapi:10023");
}

TEST_CASE("profile fidelity: oppo") {
    Fixture fx("oppo");
    auto service = fx.sandbox.findPackage(wellknown::kServicePackage);
    REQUIRE(service.has_value());
    CHECK(service->uid == 1032);
    CHECK(service->grantedPermissions ==
          std::set<std::string>{perm::kNfc, perm::kReadExternalStorage,
                                perm::kReceiveBootCompleted, perm::kWriteSecureSettings});
    CHECK(fx.service().userName == "org.simalliance.uid.openmobileapi:1032");

    CHECK_THROWS_AS(profileByName("pixel"), Error);
}

TEST_CASE("package installation rejects duplicates and unknown permissions") {
    Sandbox sandbox;
    PackageRecord a{"com.example.a", 200, {}, {perm::kInternet}, std::nullopt};
    sandbox.installPackage(a);
    CHECK_THROWS_AS(sandbox.installPackage(a), Error);

    PackageRecord sameUid{"com.example.b", 200, {}, {}, std::nullopt};
    CHECK_THROWS_AS(sandbox.installPackage(sameUid), Error);

    PackageRecord weird{"com.example.c", 201, {}, {"android.permission.TELEPORT"}, std::nullopt};
    CHECK_THROWS_AS(sandbox.installPackage(weird), Error);

    CHECK(sandbox.installedPackages().size() == 1);
    CHECK(sandbox.installedPackages()[0].name == "com.example.a");
}

TEST_CASE("check_permission consults the granted set of the uid") {
    Fixture fx("nexus6");
    int serviceUid = fx.profile.serviceUid;
    CHECK(fx.sandbox.checkPermission(perm::kModifyPhoneState, 1, serviceUid) ==
          PermissionCheck::Granted);
    CHECK(fx.sandbox.checkPermission(perm::kWriteSettings, 1, serviceUid) ==
          PermissionCheck::Denied);
    // Outside the vocabulary: always denied.
    CHECK(fx.sandbox.checkPermission("android.permission.FLY", 1, serviceUid) ==
          PermissionCheck::Denied);
    CHECK_THROWS_AS(fx.sandbox.checkPermission(perm::kNfc, 1, 424242), Error);
}

TEST_CASE("oppo service lacks MODIFY_PHONE_STATE") {
    Fixture fx("oppo");
    CHECK(fx.sandbox.checkPermission(perm::kModifyPhoneState, 1, 1032) ==
          PermissionCheck::Denied);
}

TEST_CASE("run_as is scoped, nested and exception-safe") {
    Fixture fx("nexus6");
    IdentityContext service = fx.service();
    IdentityContext client = fx.sandbox.identityFor(wellknown::kClientPackage);

    CHECK(runAs(service, [] { return currentIdentity().uid; }) == service.uid);

    runAs(service, [&] {
        CHECK(currentIdentity().uid == service.uid);
        runAs(client, [&] { CHECK(currentIdentity().uid == client.uid); });
        CHECK(currentIdentity().uid == service.uid);
        return 0;
    });

    try {
        runAs(client, []() -> int { throw std::runtime_error("task failed"); });
    } catch (const std::runtime_error&) {
    }
    CHECK(currentIdentity().uid != client.uid);
}

TEST_CASE("gateway permission matrix: no gateway succeeds without its permission") {
    for (const char* profileName : {"nexus6", "oppo"}) {
        Fixture fx(profileName);
        AuditLog audit;
        CapabilityGateways gateways(fx.sandbox, &audit);

        for (const PackageRecord& pkg : fx.sandbox.installedPackages()) {
            IdentityContext id = fx.sandbox.identityFor(pkg.name);
            bool wss = pkg.grantedPermissions.count(perm::kWriteSecureSettings) > 0;
            bool ws = pkg.grantedPermissions.count(perm::kWriteSettings) > 0;
            bool mps = pkg.grantedPermissions.count(perm::kModifyPhoneState) > 0;

            CHECK(gateways.toggleNfc(id).ok == wss);
            CHECK(gateways.writeSecureSetting(id, "adb_enabled", "1").ok == (wss && ws));
            CHECK(gateways.answerRingingCall(id).ok == mps);
            // No UICC attached, a granted icc exchange still fails harmlessly.
            CHECK(gateways.iccExchangeApdu(id, fromHex("00B00000")).ok == false);
        }
    }
}

TEST_CASE("denial messages name the blocking permission") {
    Fixture nexus("nexus6");
    AuditLog audit;
    CapabilityGateways gateways(nexus.sandbox, &audit);
    IdentityContext service = nexus.service();

    CHECK(gateways.toggleNfc(service).ok);
    GatewayResult setting = gateways.writeSecureSetting(service, "adb_enabled", "1");
    CHECK_FALSE(setting.ok);
    CHECK(setting.message ==
          "Permission denial: writing to settings requires android.permission.WRITE_SETTINGS");
    CHECK(gateways.answerRingingCall(service).ok);

    Fixture oppo("oppo");
    CapabilityGateways oppoGateways(oppo.sandbox, &audit);
    GatewayResult call = oppoGateways.answerRingingCall(oppo.service());
    CHECK_FALSE(call.ok);
    CHECK(call.message ==
          "Permission denial: answering calls requires android.permission.MODIFY_PHONE_STATE");
}

TEST_CASE("icc exchange forwards to the attached element when authorized") {
    Fixture fx("nexus6");
    AuditLog audit;
    CapabilityGateways gateways(fx.sandbox, &audit);

    auto element = makeDefaultElement();
    std::mutex lock;
    gateways.attachUicc(element.get(), &lock);

    GatewayResult result = gateways.iccExchangeApdu(fx.service(), fromHex("0070000001"));
    CHECK(result.ok);
    CHECK(result.response.size() == 3);  // channel number + 9000

    IdentityContext client = fx.sandbox.identityFor(wellknown::kClientPackage);
    CHECK_FALSE(gateways.iccExchangeApdu(client, fromHex("0070000001")).ok);
}

TEST_CASE("tokens: constant per sandbox, constant-time comparison") {
    Sandbox sandbox;
    Token bind = sandbox.bindToken();
    CHECK(sandbox.checkBindToken(bind));
    Token tweaked = bind;
    tweaked[7] ^= 0x01;
    CHECK_FALSE(sandbox.checkBindToken(tweaked));

    CHECK(tokenFromHex(tokenToHex(bind)) == bind);
    CHECK_THROWS_AS(tokenFromHex("AABB"), Error);

    // Two sandboxes never share tokens.
    Sandbox other;
    CHECK_FALSE(other.checkBindToken(bind));
}

TEST_CASE("permission vocabulary is the fixed ten-name set") {
    const auto& vocab = permissionVocabulary();
    CHECK(vocab.size() == 10);
    CHECK(vocab.count(perm::kSmartcard));
    CHECK(vocab.count(perm::kBindTerminal));
    CHECK_FALSE(vocab.count("android.permission.CAMERA"));
}
