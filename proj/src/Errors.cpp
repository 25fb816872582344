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

#include "scsim/Errors.h"

namespace scsim {

const char* errorCodeName(ErrorCode code) {
    switch (code) {
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::ExtendedNotSupported: return "ExtendedNotSupported";
        case ErrorCode::ChannelOutOfRange: return "ChannelOutOfRange";
        case ErrorCode::ProprietaryClass: return "ProprietaryClass";
        case ErrorCode::BadAidLength: return "BadAidLength";
        case ErrorCode::CannotCloseBasicChannel: return "CannotCloseBasicChannel";
        case ErrorCode::Truncated: return "Truncated";
        case ErrorCode::IndefiniteLength: return "IndefiniteLength";
        case ErrorCode::TrailingGarbage: return "TrailingGarbage";
        case ErrorCode::BadTag: return "BadTag";
        case ErrorCode::BadLength: return "BadLength";
        case ErrorCode::MalformedRuleDb: return "MalformedRuleDb";
        case ErrorCode::BadRuleFile: return "BadRuleFile";
        case ErrorCode::DuplicateAid: return "DuplicateAid";
        case ErrorCode::UnknownAid: return "UnknownAid";
        case ErrorCode::DuplicatePackage: return "DuplicatePackage";
        case ErrorCode::UnknownUid: return "UnknownUid";
        case ErrorCode::UnknownPackage: return "UnknownPackage";
        case ErrorCode::NotConnected: return "NotConnected";
        case ErrorCode::NoChannelAvailable: return "NoChannelAvailable";
        case ErrorCode::AppletNotFound: return "AppletNotFound";
        case ErrorCode::NoResourceAvailable: return "NoResourceAvailable";
        case ErrorCode::TerminalFailure: return "TerminalFailure";
        case ErrorCode::EntryNotFound: return "EntryNotFound";
        case ErrorCode::ConstructionFailure: return "ConstructionFailure";
        case ErrorCode::BindTerminalNotEnforced: return "BindTerminalNotEnforced";
        case ErrorCode::HandshakeFailure: return "HandshakeFailure";
        case ErrorCode::SpawnFailure: return "SpawnFailure";
        case ErrorCode::FrameTooLarge: return "FrameTooLarge";
        case ErrorCode::ZeroLengthFrame: return "ZeroLengthFrame";
        case ErrorCode::UnknownType: return "UnknownType";
        case ErrorCode::MalformedBody: return "MalformedBody";
        case ErrorCode::AuthFailed: return "AuthFailed";
        case ErrorCode::PermissionDenied: return "PermissionDenied";
        case ErrorCode::AccessDenied: return "AccessDenied";
        case ErrorCode::UnknownReader: return "UnknownReader";
        case ErrorCode::UnknownSession: return "UnknownSession";
        case ErrorCode::UnknownChannel: return "UnknownChannel";
        case ErrorCode::FilteredOut: return "FilteredOut";
        case ErrorCode::ChannelEscapeAttempt: return "ChannelEscapeAttempt";
        case ErrorCode::SessionLimit: return "SessionLimit";
        case ErrorCode::ChannelLimit: return "ChannelLimit";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::BadConfig: return "BadConfig";
        case ErrorCode::BadHex: return "BadHex";
    }
    return "UnknownError";
}

}  // namespace scsim
