#pragma once

#include <stdexcept>
#include <string>

namespace qdnls {

// Exit-code mapping used by the CLI: 0 ok, 1 numerical, 2 invalid input,
// 3 assumption violation.

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidInputError : std::runtime_error {
    explicit InvalidInputError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// |s11| (or |sA11|) fell below the zero tolerance: data is not soliton-free
// as far as the numerics can tell.
struct SolitonAssumptionError : std::runtime_error {
    explicit SolitonAssumptionError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace qdnls
