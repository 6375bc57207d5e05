#pragma once

#include <stdexcept>
#include <string>

namespace film {

// Parameters or fields outside the hypotheses of an operation.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// NaN/Inf samples, failed quadratures, grids too large to allocate.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace film
