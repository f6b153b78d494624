//------------------------------------------------------------------------------
// errors.hpp
// Error hierarchy shared by all pipeline stages
//
// SPDX-License-Identifier: Apache-2.0
//------------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace hyperflow {

struct SourceSite {
    std::string file;
    uint32_t line = 1;
    uint32_t col = 1;

    std::string str() const {
        return file + ":" + std::to_string(line) + ":" + std::to_string(col);
    }
    bool operator==(const SourceSite&) const = default;
};

// Stable error classes; the CLI maps each one to a distinct exit code.
enum class ErrorCode : int {
    Internal = 1,
    Usage = 2,
    Syntax = 10,
    UnsupportedConstruct = 11,
    UnresolvedIdentifier = 12,
    Elaboration = 13,
    DanglingEndpoint = 14,
    DriveConflict = 15,
    NonConvergence = 16,
    VcdSyntax = 17,
    WidthMismatch = 18,
    UnknownVcdId = 19,
    TimebaseMismatch = 20,
    AssetConfig = 21,
    EmptySinkSet = 22,
    UnknownSignal = 23,
    TimeOutOfRange = 24,
    ZeroWindow = 25,
    GraphFormat = 26,
    Io = 27,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}
    Error(ErrorCode code, const std::string& message, const SourceSite& site)
        : std::runtime_error(site.str() + ": " + message), code_(code), site_(site) {}

    ErrorCode code() const { return code_; }
    const std::optional<SourceSite>& site() const { return site_; }

private:
    ErrorCode code_;
    std::optional<SourceSite> site_;
};

struct SyntaxError : Error {
    SyntaxError(const std::string& m, const SourceSite& s) : Error(ErrorCode::Syntax, m, s) {}
};
struct UnsupportedConstruct : Error {
    UnsupportedConstruct(const std::string& m, const SourceSite& s)
        : Error(ErrorCode::UnsupportedConstruct, m, s) {}
};
struct UnresolvedIdentifier : Error {
    UnresolvedIdentifier(const std::string& m, const SourceSite& s)
        : Error(ErrorCode::UnresolvedIdentifier, m, s) {}
};
struct ElaborationError : Error {
    explicit ElaborationError(const std::string& m) : Error(ErrorCode::Elaboration, m) {}
    ElaborationError(const std::string& m, const SourceSite& s)
        : Error(ErrorCode::Elaboration, m, s) {}
};
struct DanglingEndpoint : Error {
    explicit DanglingEndpoint(const std::string& m) : Error(ErrorCode::DanglingEndpoint, m) {}
    DanglingEndpoint(const std::string& m, const SourceSite& s)
        : Error(ErrorCode::DanglingEndpoint, m, s) {}
};
struct DriveConflict : Error {
    explicit DriveConflict(const std::string& m) : Error(ErrorCode::DriveConflict, m) {}
    DriveConflict(const std::string& m, const SourceSite& s)
        : Error(ErrorCode::DriveConflict, m, s) {}
};
struct NonConvergence : Error {
    explicit NonConvergence(const std::string& m) : Error(ErrorCode::NonConvergence, m) {}
};
struct VcdSyntaxError : Error {
    VcdSyntaxError(const std::string& file, uint32_t line, const std::string& m)
        : Error(ErrorCode::VcdSyntax, m, SourceSite{file, line, 1}) {}
};
struct WidthMismatch : Error {
    explicit WidthMismatch(const std::string& m) : Error(ErrorCode::WidthMismatch, m) {}
    WidthMismatch(const std::string& m, const SourceSite& s)
        : Error(ErrorCode::WidthMismatch, m, s) {}
};
struct UnknownVcdId : Error {
    UnknownVcdId(const std::string& file, uint32_t line, const std::string& id)
        : Error(ErrorCode::UnknownVcdId, "unknown VCD id `" + id + "`",
                SourceSite{file, line, 1}) {}
};
struct TimebaseMismatch : Error {
    explicit TimebaseMismatch(const std::string& m) : Error(ErrorCode::TimebaseMismatch, m) {}
};
struct AssetConfigError : Error {
    AssetConfigError(const std::string& m, const SourceSite& s)
        : Error(ErrorCode::AssetConfig, m, s) {}
};
struct EmptySinkSet : Error {
    explicit EmptySinkSet(const std::string& m) : Error(ErrorCode::EmptySinkSet, m) {}
    EmptySinkSet(const std::string& m, const SourceSite& s)
        : Error(ErrorCode::EmptySinkSet, m, s) {}
};
struct UnknownSignal : Error {
    explicit UnknownSignal(const std::string& name)
        : Error(ErrorCode::UnknownSignal, "unknown signal `" + name + "`") {}
    UnknownSignal(const std::string& m, const SourceSite& s)
        : Error(ErrorCode::UnknownSignal, m, s) {}
};
struct TimeOutOfRange : Error {
    explicit TimeOutOfRange(const std::string& m) : Error(ErrorCode::TimeOutOfRange, m) {}
    TimeOutOfRange(const std::string& m, const SourceSite& s)
        : Error(ErrorCode::TimeOutOfRange, m, s) {}
};
struct ZeroWindow : Error {
    explicit ZeroWindow(const std::string& m) : Error(ErrorCode::ZeroWindow, m) {}
};
struct GraphFormatError : Error {
    GraphFormatError(const std::string& file, uint32_t line, const std::string& m)
        : Error(ErrorCode::GraphFormat, m, SourceSite{file, line, 1}) {}
};
struct IoError : Error {
    explicit IoError(const std::string& m) : Error(ErrorCode::Io, m) {}
};

} // namespace hyperflow
