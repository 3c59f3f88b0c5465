#pragma once

#include <stdexcept>
#include <string>

namespace ricci {

// Precondition / input-validation failure (CLI maps these to exit 2).
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Failure of a numerical contract at run time (CLI maps these to exit 3).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

}  // namespace ricci
