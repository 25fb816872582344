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

#include <stdexcept>
#include <string>

namespace scsim {

enum class ErrorCode {
    // APDU codec
    TooShort,
    LengthMismatch,
    ExtendedNotSupported,
    ChannelOutOfRange,
    ProprietaryClass,
    BadAidLength,
    CannotCloseBasicChannel,

    // BER-TLV / rule database
    Truncated,
    IndefiniteLength,
    TrailingGarbage,
    BadTag,
    BadLength,
    MalformedRuleDb,
    BadRuleFile,

    // Virtual secure element
    DuplicateAid,
    UnknownAid,

    // Sandbox
    DuplicatePackage,
    UnknownUid,
    UnknownPackage,

    // Terminals
    NotConnected,
    NoChannelAvailable,
    AppletNotFound,
    NoResourceAvailable,
    TerminalFailure,

    // Discovery / loading
    EntryNotFound,
    ConstructionFailure,
    BindTerminalNotEnforced,
    HandshakeFailure,
    SpawnFailure,

    // Wire protocol
    FrameTooLarge,
    ZeroLengthFrame,
    UnknownType,
    MalformedBody,
    AuthFailed,

    // Service
    PermissionDenied,
    AccessDenied,
    UnknownReader,
    UnknownSession,
    UnknownChannel,
    FilteredOut,
    ChannelEscapeAttempt,
    SessionLimit,
    ChannelLimit,

    // Plumbing
    IoError,
    BadConfig,
    BadHex,
};

const char* errorCodeName(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(errorCodeName(code)) + ": " + message),
          code_(code),
          message_(message) {}

    ErrorCode code() const { return code_; }

    // The bare message, without the code-name prefix what() carries.
    const std::string& message() const { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

}  // namespace scsim
