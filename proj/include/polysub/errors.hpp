#pragma once

#include <stdexcept>
#include <string>

namespace polysub {

// Raised when a computation fails for numerical reasons (rank mismatch,
// failed divisibility, singular whitening reference, ...) as opposed to a
// violated precondition, which raises std::invalid_argument.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace polysub
