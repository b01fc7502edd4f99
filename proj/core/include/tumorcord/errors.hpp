#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tumorcord {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a constitutive function or solver.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid parameter record or configuration value.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// The product beta*w violates the existence/uniqueness gate.
class AdmissibilityError : public Error {
public:
    AdmissibilityError(double beta_w, const std::string& message)
        : Error(message), beta_w_(beta_w) {}

    double beta_w() const noexcept { return beta_w_; }

private:
    double beta_w_;
};

/// Iterative solver failed to reach its tolerance. Carries the last iterate.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& message, std::vector<double> last_iterate,
                     int iterations, double last_update)
        : Error(message),
          last_iterate_(std::move(last_iterate)),
          iterations_(iterations),
          last_update_(last_update) {}

    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
    int iterations() const noexcept { return iterations_; }
    double last_update() const noexcept { return last_update_; }

private:
    std::vector<double> last_iterate_;
    int iterations_;
    double last_update_;
};

/// Quadrature or linear algebra breakdown.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Root scan found no sign change. Carries the (w, C(w)) pairs visited.
class NoRootError : public Error {
public:
    NoRootError(const std::string& message, std::vector<std::pair<double, double>> scanned)
        : Error(message), scanned_(std::move(scanned)) {}

    const std::vector<std::pair<double, double>>& scanned() const noexcept { return scanned_; }

private:
    std::vector<std::pair<double, double>> scanned_;
};

/// Time step repeatedly rejected down to the minimum step size.
class StabilityError : public Error {
public:
    using Error::Error;
};

/// A field measurement could not be taken (empty cord, bad window).
class MeasurementError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace tumorcord
