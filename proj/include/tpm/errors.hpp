#ifndef TPM_ERRORS_HPP
#define TPM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tpm {

/// Geometry that violates the unit-cell constraints (obstacle touching the
/// cell boundary, disconnected fluid region, bad resolution).
class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Problem setup with no solution (e.g. a fully periodic momentum balance
/// that cannot absorb a net force).
class IncompatibleGeometryError : public std::runtime_error {
public:
    explicit IncompatibleGeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative solver failed to reach the requested tolerance.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual(residual), iterations(iterations) {}
    double residual;
    int iterations;
};

/// Request outside the validity range of the asymptotic model
/// (scale-back with gamma > gamma_c, C(delta) evaluated past the cap).
class ValidityError : public std::runtime_error {
public:
    explicit ValidityError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or schema-violating configuration input.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tpm

#endif
