#pragma once

#include <stdexcept>
#include <string>

namespace tweezerdet {

// Thrown when an iterative numeric routine fails to reach its tolerance
// (quadrature subdivision limit, root bracket failure, overflow guard).
// Validation problems use std::invalid_argument, math-domain problems
// std::domain_error, and failed lookups std::out_of_range.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tweezerdet
