#pragma once

#include <stdexcept>
#include <string>

namespace pricecast {

// Each category maps onto one CLI exit code (see tools/pricecast.cpp).

/// Bad configuration or command-line usage.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data that cannot be ingested or that violates a precondition
/// (missing column, too few rows, empty split, ...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure: non-convergence, divergence, singular systems.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File-system failure while writing artifacts.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pricecast
