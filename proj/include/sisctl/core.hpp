#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sisctl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class ErrorKind {
    NonSquare,
    NegativeEntry,
    NonFiniteEntry,
    ConnectivityFailure,
    DimensionMismatch,
    AssumptionViolation,
    NoConvergence,
    Reducible,
    NonPositiveR0,
    NonPositiveRate,
    SpectralRadiusExceedsOne,
    SearchExhausted,
    ConfigParse,
    IoFailure,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` identifies the failure.
/// `index()` carries a trial or row number when the failure came from one
/// element of a batch.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> index = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> index_;
};

/// Infection rate, healing rate and sampling period of the discretized model.
struct EpidemicParams {
    double beta = 0.0;
    double gamma = 0.0;
    double dt = 0.0;

    double r0() const { return beta / gamma; }

    /// Throws NonPositiveRate unless beta, gamma, dt are finite and > 0.
    void validate() const;
};

void require_same_size(Eigen::Index expected, Eigen::Index actual, std::string_view what);

}  // namespace sisctl
