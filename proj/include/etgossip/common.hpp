#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace etg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid graph construction or an infeasible topology request.
class TopologyError : public Error {
public:
    using Error::Error;
};

// A theoretical assumption does not hold (delta >= 1, Gamma <= 0, ...).
class AssumptionViolation : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace etg
