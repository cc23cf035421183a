#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dpbandit {

// A user arrival: one point in the context hypercube [0,1]^d.
using ContextVector = std::vector<double>;

inline void validate_context(const ContextVector& x, int d) {
    if (static_cast<int>(x.size()) != d) {
        throw std::invalid_argument("context dimension mismatch: got " +
                                    std::to_string(x.size()) + ", expected " +
                                    std::to_string(d));
    }
    for (double c : x) {
        if (!(c >= 0.0 && c <= 1.0)) {
            throw std::invalid_argument("context coordinate outside [0,1]");
        }
    }
}

}  // namespace dpbandit
