# Copyright (C) 2026 The scsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import pytest

import scsim


def test_hex_roundtrip():
    assert scsim.to_hex(b"\xde\xad\xbe\xef") == "DEADBEEF"
    assert scsim.from_hex("DEADBEEF") == b"\xde\xad\xbe\xef"
    with pytest.raises(scsim.Error):
        scsim.from_hex("XYZ")


def test_apdu_roundtrip_and_channels():
    cmd = scsim.parse_command(scsim.from_hex("00A40400023F00"))
    assert cmd.ins == 0xA4
    assert cmd.data == b"\x3f\x00"
    assert cmd.le is None
    assert scsim.serialize_command(cmd) == scsim.from_hex("00A40400023F00")

    moved = scsim.set_channel(cmd, 2)
    assert moved.cla == 0x02
    assert scsim.get_channel(moved) == 2

    select = scsim.build_select(scsim.ARA_AID)
    assert scsim.to_hex(scsim.serialize_command(select)) == "00A4040009A00000015141434C0000"

    with pytest.raises(scsim.Error):
        scsim.parse_command(b"\x00\xa4\x04")


def test_response_codec():
    resp = scsim.parse_response(scsim.from_hex("6F00"))
    assert resp.sw == 0x6F00
    assert resp.data == b""


def test_ber_tlv():
    nodes = scsim.parse_ber_tlv(scsim.from_hex("E203D001FF"))
    assert len(nodes) == 1
    assert nodes[0].tag == 0xE2
    assert nodes[0].constructed
    assert nodes[0].children[0].tag == 0xD0
    assert scsim.serialize_ber_tlv(nodes) == scsim.from_hex("E203D001FF")


def test_rule_db_and_enforcer():
    db = scsim.AccessRuleDb()
    assert scsim.to_hex(scsim.encode_rule_db(db)) == "FF4000"

    client = bytes([0x11]) * 20
    other = bytes([0x22]) * 20
    rule = scsim.AccessRule(aid=None, hash=client, policy=scsim.RulePolicy.ALLOW)
    db = scsim.AccessRuleDb([rule])
    assert scsim.decode_rule_db(scsim.encode_rule_db(db)).rules == db.rules

    decision = scsim.enforcer_decide(db, client, scsim.ECHO_AID)
    assert decision.kind == scsim.DecisionKind.ALLOWED
    assert scsim.enforcer_decide(db, other, scsim.ECHO_AID).kind == scsim.DecisionKind.DENIED
    assert scsim.enforcer_decide(None, client, scsim.ECHO_AID).kind == scsim.DecisionKind.DENIED_NO_DB


def test_virtual_secure_element_flow():
    se = scsim.VirtualSecureElement()
    se.install_echo_applet()
    assert scsim.to_hex(se.reset()) == "3B9F96803FC7828031E073FE211B6407689A00829000"

    opened = se.process(scsim.from_hex("0070000001"))
    assert opened == scsim.from_hex("019000")

    select = scsim.set_channel(scsim.build_select(scsim.ECHO_AID), 1)
    resp = se.process(scsim.serialize_command(select))
    assert resp.endswith(scsim.from_hex("9000"))

    echo = se.process(scsim.from_hex("01B0000002AB12"))
    assert echo == scsim.from_hex("AB129000")

    # Unknown applet: status word, never an exception.
    missing = se.process(scsim.from_hex("00A4040005A1A2A3A4A5"))
    assert missing == scsim.from_hex("6A82")


def test_frame_codec():
    framed = scsim.encode_frame(b"\x02")
    assert framed == scsim.from_hex("0000000102")
    payload, consumed = scsim.decode_frame(framed + b"junk")
    assert payload == b"\x02"
    assert consumed == 5
    with pytest.raises(scsim.Error):
        scsim.encode_frame(b"")


def test_profiles():
    nexus6 = scsim.profile_by_name("nexus6")
    assert nexus6.service_uid == 10023
    assert nexus6.service_permissions == {
        "android.permission.MODIFY_PHONE_STATE",
        "android.permission.NFC",
        "android.permission.RECEIVE_BOOT_COMPLETED",
        "android.permission.WRITE_SECURE_SETTINGS",
    }
    oppo = scsim.profile_by_name("oppo")
    assert oppo.service_uid == 1032
    assert len(scsim.permission_vocabulary()) == 10
