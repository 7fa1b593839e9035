#pragma once

#include <stdexcept>
#include <string>

namespace spectrakit {

// precondition violations throw std::invalid_argument; this one is for
// computations that ran but could not deliver the promised accuracy
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spectrakit
