#include "bgm/error.hpp"

namespace bgm {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ConstantColumn: return "ConstantColumn";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidKappa: return "InvalidKappa";
    case ErrorKind::InvalidThreshold: return "InvalidThreshold";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::NotPsd: return "NotPSD";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::RaggedRows: return "RaggedRows";
    case ErrorKind::BadResponseValues: return "BadResponseValues";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Io: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, std::string module, const std::string& message)
    : std::runtime_error("[" + module + "] " + std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      module_(std::move(module))
{
}

} // namespace bgm
