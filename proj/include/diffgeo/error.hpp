#pragma once

#include <stdexcept>
#include <string>

namespace diffgeo {

enum class ErrorKind {
    // input errors (CLI exit code 2)
    Format,
    Parse,
    EmptyInput,
    Domain,
    Shape,
    Rank,
    Unsupported,
    MissingOracle,
    // numerical failures (CLI exit code 3)
    Selection,
    IsolatedPoint,
    Calibration,
    DegenerateInput,
};

const char* to_string(ErrorKind kind) noexcept;

/// True for kinds caused by bad input rather than a numerical breakdown.
bool is_input_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace diffgeo
