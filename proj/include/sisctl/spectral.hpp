#pragma once

#include "sisctl/core.hpp"
#include "sisctl/graph.hpp"

#include <optional>
#include <string_view>

namespace sisctl {

inline constexpr double kSpectralTolerance = 1e-12;
inline constexpr int kSpectralMaxIterations = 100000;
/// rho(M) within this distance of 1 counts as the disease-free boundary.
inline constexpr double kRegimeTieTolerance = 1e-9;

/// Spectral radius of a nonnegative square matrix.
///
/// The matrix is split into strongly connected components; the radius is the
/// largest radius over the irreducible diagonal blocks. Each block is handled
/// by power iteration on the shifted block (B + I) / 2, which is primitive even
/// when B is periodic, starting from the all-ones vector. Iteration stops once
/// the Collatz-Wielandt bounds min_i (Sx)_i / x_i <= rho(S) <= max_i (Sx)_i / x_i
/// are within `tol` (relative to max(1, rho)) of each other, and the result is
/// mapped back as 2 rho(S) - 1.
///
/// Throws NegativeEntry, NonFiniteEntry, NonSquare, or NoConvergence after
/// `max_iter` iterations on a block.
double spectral_radius(const Matrix& matrix, double tol = kSpectralTolerance, int max_iter = kSpectralMaxIterations);

struct PerronPair {
    double rho = 0.0;
    Vector left;   ///< left^T A = rho left^T, positive, unit sum
    Vector right;  ///< A right = rho right, positive, unit sum
};

/// Left and right Perron vectors of an irreducible nonnegative matrix.
/// Throws Reducible when the matrix graph is not strongly connected.
PerronPair perron_vectors(const Matrix& matrix, double tol = kSpectralTolerance);

/// 1 + dt (beta - gamma); valid when A is irreducible and row-stochastic.
double rho_M_closed_form(const EpidemicParams& params);

enum class Regime { DiseaseFree, Endemic };

std::string_view to_string(Regime regime);

struct RegimeReport {
    double rho_a = 0.0;
    double rho_m = 0.0;
    std::optional<double> rho_m_closed;  ///< present when A is row-stochastic with strong diagonal
    double r0 = 0.0;
    Regime regime = Regime::DiseaseFree;
    /// 0 for the disease-free regime, the homogeneous endemic level otherwise.
    /// Absent when the network is endemic but r0 <= 1, where the closed form
    /// does not apply.
    std::optional<double> predicted_equilibrium;
};

/// Endemic iff rho(M) > 1 + tie_tol. Throws Reducible for a reducible network.
RegimeReport classify_regime(const EpidemicNetwork& network, const EpidemicParams& params,
                             double tie_tol = kRegimeTieTolerance);

}  // namespace sisctl
