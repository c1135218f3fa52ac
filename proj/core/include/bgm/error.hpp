#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bgm {

enum class ErrorKind {
    DimensionMismatch,
    ConstantColumn,
    InvalidArgument,
    InvalidKappa,
    InvalidThreshold,
    InvalidSpec,
    NotPsd,
    SolverFailure,
    ParseError,
    RaggedRows,
    BadResponseValues,
    IndexOutOfRange,
    Config,
    Io,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries the module it came from so the
// CLI can map it onto an exit code and print a useful tag.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string module, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& module() const noexcept { return module_; }

private:
    ErrorKind kind_;
    std::string module_;
};

} // namespace bgm
