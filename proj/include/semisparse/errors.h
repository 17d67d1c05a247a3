/*
 * Copyright 2026 The semisparse Authors. All rights reserved.
 * This file is licensed to you under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software distributed under
 * the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR REPRESENTATIONS
 * OF ANY KIND, either express or implied. See the License for the specific language
 * governing permissions and limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace semisparse {

/// Broad failure class, used by the command line tool to pick an exit code.
enum class ErrorKind {
    Usage,     ///< bad arguments or missing paths
    Data,      ///< malformed or unsupported input
    Numerical, ///< solver breakdown, non-finite iterates
};

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what)
        , m_kind(kind)
    {}

    ErrorKind kind() const noexcept { return m_kind; }

private:
    ErrorKind m_kind;
};

#define SEMISPARSE_DATA_ERROR(Name)                                          \
    class Name : public Error                                                \
    {                                                                        \
    public:                                                                  \
        explicit Name(const std::string& what)                               \
            : Error(ErrorKind::Data, #Name ": " + what)                      \
        {}                                                                   \
    }

SEMISPARSE_DATA_ERROR(DegenerateFace);
SEMISPARSE_DATA_ERROR(NonManifoldEdge);
SEMISPARSE_DATA_ERROR(InconsistentOrientation);
SEMISPARSE_DATA_ERROR(DegenerateStencil);
SEMISPARSE_DATA_ERROR(IndexOutOfRange);
SEMISPARSE_DATA_ERROR(SizeMismatch);
SEMISPARSE_DATA_ERROR(UnsupportedFace);
SEMISPARSE_DATA_ERROR(ConnectivityMismatch);
SEMISPARSE_DATA_ERROR(IoError);

#undef SEMISPARSE_DATA_ERROR

class InvalidParameter : public Error
{
public:
    explicit InvalidParameter(const std::string& what)
        : Error(ErrorKind::Usage, "InvalidParameter: " + what)
    {}
};

class ParseError : public Error
{
public:
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : Error(ErrorKind::Data, "ParseError: " + path + ":" + std::to_string(line) + ": " + what)
        , m_line(line)
    {}

    std::size_t line() const noexcept { return m_line; }

private:
    std::size_t m_line;
};

class LinearSolveFailure : public Error
{
public:
    explicit LinearSolveFailure(const std::string& what)
        : Error(ErrorKind::Numerical, "LinearSolveFailure: " + what)
    {}
};

class NonFinite : public Error
{
public:
    explicit NonFinite(const std::string& what)
        : Error(ErrorKind::Numerical, "NonFinite: " + what)
    {}
};

} // namespace semisparse
