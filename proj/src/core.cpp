#include "sisctl/core.hpp"

#include <cmath>

namespace sisctl {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorKind::ConnectivityFailure: return "ConnectivityFailure";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::AssumptionViolation: return "AssumptionViolation";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::Reducible: return "Reducible";
    case ErrorKind::NonPositiveR0: return "NonPositiveR0";
    case ErrorKind::NonPositiveRate: return "NonPositiveRate";
    case ErrorKind::SpectralRadiusExceedsOne: return "SpectralRadiusExceedsOne";
    case ErrorKind::SearchExhausted: return "SearchExhausted";
    case ErrorKind::ConfigParse: return "ConfigParse";
    case ErrorKind::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), index_(index)
{
}

void EpidemicParams::validate() const
{
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(beta))
        throw Error(ErrorKind::NonPositiveRate, "beta must be finite and > 0, got " + std::to_string(beta));
    if (!positive(gamma))
        throw Error(ErrorKind::NonPositiveRate, "gamma must be finite and > 0, got " + std::to_string(gamma));
    if (!positive(dt))
        throw Error(ErrorKind::NonPositiveRate, "dt must be finite and > 0, got " + std::to_string(dt));
}

void require_same_size(Eigen::Index expected, Eigen::Index actual, std::string_view what)
{
    if (expected != actual)
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + ": expected size " + std::to_string(expected) + ", got " +
                        std::to_string(actual));
}

}  // namespace sisctl
