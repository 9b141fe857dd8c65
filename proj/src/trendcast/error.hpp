// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace trendcast {

enum class ErrorKind {
    InvalidArgument,
    MissingInput,
    Validation,
    Parse,
    Io,
    Numeric,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid_argument";
        case ErrorKind::MissingInput: return "missing_input";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Io: return "io";
        case ErrorKind::Numeric: return "numeric";
    }
    return "unknown";
}

}  // namespace trendcast
