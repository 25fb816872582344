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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scsim/AccessControl.h"
#include "scsim/Apdu.h"
#include "scsim/BerTlv.h"
#include "scsim/Bytes.h"
#include "scsim/Sandbox.h"
#include "scsim/VirtualSe.h"
#include "scsim/Wire.h"

namespace py = pybind11;

namespace {

scsim::Bytes fromPy(const py::bytes& data) {
    std::string s = data;
    return scsim::Bytes(s.begin(), s.end());
}

py::bytes toPy(const scsim::Bytes& data) {
    return py::bytes(reinterpret_cast<const char*>(data.data()), data.size());
}

scsim::SignatureHash hashFromPy(const py::bytes& data) {
    scsim::Bytes raw = fromPy(data);
    if (raw.size() != 20) {
        throw scsim::Error(scsim::ErrorCode::BadHex, "signature hash must be 20 bytes");
    }
    scsim::SignatureHash hash{};
    std::copy(raw.begin(), raw.end(), hash.begin());
    return hash;
}

}  // namespace

PYBIND11_MODULE(_scsim, m) {
    m.doc() = "smartcard middleware simulator core";

    static py::exception<scsim::Error> exc(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const scsim::Error& e) {
            exc(e.what());
        }
    });

    m.def("to_hex", [](const py::bytes& data) { return scsim::toHex(fromPy(data)); });
    m.def("from_hex", [](const std::string& hex) { return toPy(scsim::fromHex(hex)); });

    // --- APDU codec ---
    py::class_<scsim::CommandApdu>(m, "CommandApdu")
        .def(py::init([](uint8_t cla, uint8_t ins, uint8_t p1, uint8_t p2, const py::bytes& data,
                         std::optional<uint16_t> le) {
                 scsim::CommandApdu cmd;
                 cmd.cla = cla;
                 cmd.ins = ins;
                 cmd.p1 = p1;
                 cmd.p2 = p2;
                 cmd.data = fromPy(data);
                 cmd.le = le;
                 return cmd;
             }),
             py::arg("cla"), py::arg("ins"), py::arg("p1"), py::arg("p2"),
             py::arg("data") = py::bytes(), py::arg("le") = std::nullopt)
        .def_readwrite("cla", &scsim::CommandApdu::cla)
        .def_readwrite("ins", &scsim::CommandApdu::ins)
        .def_readwrite("p1", &scsim::CommandApdu::p1)
        .def_readwrite("p2", &scsim::CommandApdu::p2)
        .def_property(
            "data", [](const scsim::CommandApdu& c) { return toPy(c.data); },
            [](scsim::CommandApdu& c, const py::bytes& data) { c.data = fromPy(data); })
        .def_readwrite("le", &scsim::CommandApdu::le)
        .def("__eq__", [](const scsim::CommandApdu& a, const scsim::CommandApdu& b) { return a == b; });

    py::class_<scsim::ResponseApdu>(m, "ResponseApdu")
        .def(py::init([](const py::bytes& data, uint8_t sw1, uint8_t sw2) {
                 return scsim::ResponseApdu{fromPy(data), sw1, sw2};
             }),
             py::arg("data") = py::bytes(), py::arg("sw1") = 0x90, py::arg("sw2") = 0x00)
        .def_property_readonly("data", [](const scsim::ResponseApdu& r) { return toPy(r.data); })
        .def_readwrite("sw1", &scsim::ResponseApdu::sw1)
        .def_readwrite("sw2", &scsim::ResponseApdu::sw2)
        .def_property_readonly("sw", &scsim::ResponseApdu::sw);

    m.def("parse_command", [](const py::bytes& raw) { return scsim::parseCommand(fromPy(raw)); });
    m.def("serialize_command",
          [](const scsim::CommandApdu& cmd) { return toPy(scsim::serializeCommand(cmd)); });
    m.def("parse_response", [](const py::bytes& raw) { return scsim::parseResponse(fromPy(raw)); });
    m.def("serialize_response",
          [](const scsim::ResponseApdu& resp) { return toPy(scsim::serializeResponse(resp)); });
    m.def("set_channel", &scsim::setChannel, py::arg("cmd"), py::arg("channel"));
    m.def("get_channel", &scsim::getChannel);
    m.def("build_select", [](const py::bytes& aid) { return scsim::buildSelect(fromPy(aid)); });
    m.def("build_manage_channel_open", &scsim::buildManageChannelOpen);
    m.def("build_manage_channel_close", &scsim::buildManageChannelClose, py::arg("channel"));

    // --- BER-TLV ---
    py::class_<scsim::TlvNode>(m, "TlvNode")
        .def_readonly("tag", &scsim::TlvNode::tag)
        .def_property_readonly("value", [](const scsim::TlvNode& n) { return toPy(n.value); })
        .def_readonly("children", &scsim::TlvNode::children)
        .def_property_readonly("constructed", &scsim::TlvNode::constructed)
        .def("__eq__", [](const scsim::TlvNode& a, const scsim::TlvNode& b) { return a == b; });

    m.def("make_primitive", [](uint16_t tag, const py::bytes& value) {
        return scsim::makePrimitive(tag, fromPy(value));
    });
    m.def("make_constructed", &scsim::makeConstructed);
    m.def("parse_ber_tlv", [](const py::bytes& raw) { return scsim::parseBerTlv(fromPy(raw)); });
    m.def("serialize_ber_tlv", [](const std::vector<scsim::TlvNode>& nodes) {
        return toPy(scsim::serializeBerTlv(nodes));
    });

    // --- access control ---
    py::enum_<scsim::RulePolicy>(m, "RulePolicy")
        .value("ALLOW", scsim::RulePolicy::Allow)
        .value("DENY", scsim::RulePolicy::Deny)
        .value("ALLOW_FILTERED", scsim::RulePolicy::AllowFiltered);

    py::class_<scsim::ApduFilter>(m, "ApduFilter")
        .def(py::init([](const py::bytes& header, const py::bytes& mask) {
            scsim::Bytes h = fromPy(header), k = fromPy(mask);
            if (h.size() != 4 || k.size() != 4) {
                throw scsim::Error(scsim::ErrorCode::BadHex, "filter needs 4-byte header and mask");
            }
            scsim::ApduFilter f;
            std::copy(h.begin(), h.end(), f.header.begin());
            std::copy(k.begin(), k.end(), f.mask.begin());
            return f;
        }))
        .def("__eq__",
             [](const scsim::ApduFilter& a, const scsim::ApduFilter& b) { return a == b; });

    py::class_<scsim::AccessRule>(m, "AccessRule")
        .def(py::init([](std::optional<py::bytes> aid, std::optional<py::bytes> hash,
                         scsim::RulePolicy policy, std::vector<scsim::ApduFilter> filters) {
                 scsim::AccessRule rule;
                 if (aid) rule.aidRef = fromPy(*aid);
                 if (hash) rule.hashRef = hashFromPy(*hash);
                 rule.policy = policy;
                 rule.filters = std::move(filters);
                 return rule;
             }),
             py::arg("aid") = std::nullopt, py::arg("hash") = std::nullopt,
             py::arg("policy") = scsim::RulePolicy::Deny,
             py::arg("filters") = std::vector<scsim::ApduFilter>{})
        .def("__eq__",
             [](const scsim::AccessRule& a, const scsim::AccessRule& b) { return a == b; });

    py::class_<scsim::AccessRuleDb>(m, "AccessRuleDb")
        .def(py::init<>())
        .def(py::init([](std::vector<scsim::AccessRule> rules) {
            return scsim::AccessRuleDb{std::move(rules)};
        }))
        .def_readwrite("rules", &scsim::AccessRuleDb::rules);

    py::enum_<scsim::Decision::Kind>(m, "DecisionKind")
        .value("ALLOWED", scsim::Decision::Kind::Allowed)
        .value("ALLOWED_FILTERED", scsim::Decision::Kind::AllowedFiltered)
        .value("DENIED", scsim::Decision::Kind::Denied)
        .value("DENIED_NO_DB", scsim::Decision::Kind::DeniedNoDb);

    py::class_<scsim::Decision>(m, "Decision")
        .def_readonly("kind", &scsim::Decision::kind)
        .def_readonly("filters", &scsim::Decision::filters)
        .def_property_readonly("allowed", &scsim::Decision::allowed)
        .def("__eq__", [](const scsim::Decision& a, const scsim::Decision& b) { return a == b; });

    m.def("encode_rule_db", [](const scsim::AccessRuleDb& db) { return toPy(scsim::encodeRuleDb(db)); });
    m.def("decode_rule_db", [](const py::bytes& raw) { return scsim::decodeRuleDb(fromPy(raw)); });
    m.def(
        "enforcer_decide",
        [](std::optional<scsim::AccessRuleDb> db, const py::bytes& clientHash, const py::bytes& aid) {
            return scsim::enforcerDecide(db, hashFromPy(clientHash), fromPy(aid));
        },
        py::arg("db"), py::arg("client_hash"), py::arg("aid"));
    m.def("filter_apdu", &scsim::filterApdu, py::arg("decision"), py::arg("cmd"));
    m.def("parse_rule_line", &scsim::parseRuleLine);

    // --- virtual secure element ---
    py::class_<scsim::VirtualSecureElement>(m, "VirtualSecureElement")
        .def(py::init([](std::optional<py::bytes> atr) {
                 return atr ? std::make_unique<scsim::VirtualSecureElement>(fromPy(*atr))
                            : std::make_unique<scsim::VirtualSecureElement>();
             }),
             py::arg("atr") = std::nullopt)
        .def("reset", [](scsim::VirtualSecureElement& se) { return toPy(se.reset()); })
        .def("process",
             [](scsim::VirtualSecureElement& se, const py::bytes& raw) {
                 return toPy(se.process(fromPy(raw)));
             })
        .def("install_echo_applet",
             [](scsim::VirtualSecureElement& se) {
                 se.installApplet(std::make_shared<scsim::EchoApplet>());
             })
        .def("install_ara_applet",
             [](scsim::VirtualSecureElement& se, const scsim::AccessRuleDb& db) {
                 se.installApplet(std::make_shared<scsim::AraApplet>(db));
             })
        .def("remove_applet",
             [](scsim::VirtualSecureElement& se, const py::bytes& aid) {
                 se.removeApplet(fromPy(aid));
             })
        .def_property_readonly("atr",
                               [](const scsim::VirtualSecureElement& se) { return toPy(se.atr()); })
        .def_property_readonly("open_logical_channels",
                               &scsim::VirtualSecureElement::openLogicalChannels);

    m.attr("ECHO_AID") = toPy(scsim::EchoApplet::defaultAid());
    m.attr("ARA_AID") = toPy(scsim::AraApplet::defaultAid());

    // --- wire framing ---
    m.def("encode_frame", [](const py::bytes& payload) { return toPy(scsim::encodeFrame(fromPy(payload))); });
    m.def("decode_frame", [](const py::bytes& stream) {
        scsim::DecodedFrame frame = scsim::decodeFrame(fromPy(stream));
        return py::make_tuple(toPy(frame.payload), frame.consumed);
    });

    // --- sandbox profiles ---
    py::class_<scsim::DeviceProfile>(m, "DeviceProfile")
        .def_readonly("name", &scsim::DeviceProfile::name)
        .def_readonly("service_uid", &scsim::DeviceProfile::serviceUid)
        .def_readonly("service_permissions", &scsim::DeviceProfile::servicePermissions);

    m.def("profile_by_name", &scsim::profileByName);
    m.def("permission_vocabulary", [] { return scsim::permissionVocabulary(); });
}
