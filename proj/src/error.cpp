#include "diffgeo/error.hpp"

namespace diffgeo {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Format: return "format error";
        case ErrorKind::Parse: return "parse error";
        case ErrorKind::EmptyInput: return "empty input";
        case ErrorKind::Domain: return "domain error";
        case ErrorKind::Shape: return "shape error";
        case ErrorKind::Rank: return "rank error";
        case ErrorKind::Unsupported: return "unsupported";
        case ErrorKind::MissingOracle: return "missing oracle";
        case ErrorKind::Selection: return "selection error";
        case ErrorKind::IsolatedPoint: return "isolated point";
        case ErrorKind::Calibration: return "calibration error";
        case ErrorKind::DegenerateInput: return "degenerate input";
    }
    return "error";
}

bool is_input_error(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Selection:
        case ErrorKind::IsolatedPoint:
        case ErrorKind::Calibration:
        case ErrorKind::DegenerateInput:
            return false;
        default:
            return true;
    }
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace diffgeo
