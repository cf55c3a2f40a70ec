#include "sisctl/equilibrium.hpp"

#include "sisctl/random.hpp"

#include <array>
#include <cmath>

namespace sisctl {

namespace {

constexpr std::array<double, 3> kDampingLadder{1.0, 0.5, 0.25};
constexpr int kOscillationStreak = 3;
constexpr double kStartMargin = 1e-6;

void check_fixed_point_inputs(const EpidemicNetwork& network, double r0, const Vector& x_init)
{
    require_same_size(network.size(), x_init.size(), "initial guess");
    if (!network.irreducible())
        throw Error(ErrorKind::AssumptionViolation, "network must be strongly connected");
    if (!network.row_stochastic_strong_diagonal())
        throw Error(ErrorKind::AssumptionViolation, "network must be row-stochastic with a_ii > 1/2");
    if (!std::isfinite(r0) || !(r0 > 1.0))
        throw Error(ErrorKind::AssumptionViolation,
                    "endemic fixed point needs r0 > 1, got " + std::to_string(r0));
    if (!((x_init.array() > 0.0).all() && (x_init.array() < 0.5).all()))
        throw Error(ErrorKind::AssumptionViolation, "initial guess must lie in (0, 1/2)^n");
}

}  // namespace

ClosedFormEquilibrium endemic_closed_form(double r0)
{
    if (!std::isfinite(r0) || !(r0 > 0.0))
        throw Error(ErrorKind::NonPositiveR0, "r0 must be finite and > 0, got " + std::to_string(r0));
    ClosedFormEquilibrium out;
    out.value = 2.0 * (r0 - 1.0) / (3.0 * r0 + std::sqrt(r0 * r0 + 8.0 * r0));
    out.regime_mismatch = r0 <= 1.0;
    return out;
}

std::string_view to_string(EquilibriumMethod method)
{
    return method == EquilibriumMethod::ClosedForm ? "closed_form" : "fixed_point";
}

Vector h_diagonal(const EpidemicNetwork& network, double r0, const Vector& x)
{
    require_same_size(network.size(), x.size(), "state");
    const Vector ax = network.weights() * x;
    return (1.0 + 3.0 * r0 * ax.array() - 2.0 * r0 * ax.array() * x.array()).matrix();
}

Vector fixed_point_map(const EpidemicNetwork& network, double r0, const Vector& x)
{
    require_same_size(network.size(), x.size(), "state");
    const Vector ax = network.weights() * x;
    const auto h = 1.0 + 3.0 * r0 * ax.array() - 2.0 * r0 * ax.array() * x.array();
    return (r0 * ax.array() / h).matrix();
}

double fixed_point_residual(const EpidemicNetwork& network, double r0, const Vector& x)
{
    return (x - fixed_point_map(network, r0, x)).cwiseAbs().maxCoeff();
}

EquilibriumResult endemic_fixed_point(const EpidemicNetwork& network, double r0, const Vector& x_init,
                                      const FixedPointOptions& options)
{
    check_fixed_point_inputs(network, r0, x_init);
    if (!(options.damping > 0.0 && options.damping <= 1.0))
        throw Error(ErrorKind::AssumptionViolation, "damping must lie in (0, 1]");

    double damping = options.damping;
    Vector x = x_init;
    Vector previous_step = Vector::Zero(x.size());
    int streak = 0;

    for (int iter = 1; iter <= options.max_iter; ++iter) {
        const Vector step = damping * (fixed_point_map(network, r0, x) - x);
        x += step;
        if (step.cwiseAbs().maxCoeff() < options.tol) {
            EquilibriumResult out;
            out.vector_form = x;
            out.x_bar = x.mean();
            out.method = EquilibriumMethod::FixedPoint;
            out.iterations = iter;
            out.residual = fixed_point_residual(network, r0, x);
            out.damping = damping;
            return out;
        }
        streak = step.dot(previous_step) < 0.0 ? streak + 1 : 0;
        if (streak >= kOscillationStreak) {
            for (double d : kDampingLadder) {
                if (d < damping) {
                    damping = d;
                    break;
                }
            }
            streak = 0;
        }
        previous_step = step;
    }
    throw Error(ErrorKind::NoConvergence,
                "fixed-point iteration did not converge within " + std::to_string(options.max_iter) + " iterations");
}

ProbeReport uniqueness_probe(const EpidemicNetwork& network, double r0, std::size_t trials, std::uint64_t seed,
                             const FixedPointOptions& options)
{
    if (trials < 2)
        throw Error(ErrorKind::AssumptionViolation, "uniqueness probe needs at least two trials");

    Rng rng(seed, Stream::Probe);
    ProbeReport report;
    report.trials = trials;
    report.limits.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        Vector start(network.size());
        for (Eigen::Index i = 0; i < start.size(); ++i)
            start(i) = rng.uniform(kStartMargin, 0.5 - kStartMargin);
        try {
            report.limits.push_back(endemic_fixed_point(network, r0, start, options).vector_form);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::NoConvergence)
                throw Error(ErrorKind::NoConvergence, "trial " + std::to_string(t) + ": " + e.what(), t);
            throw;
        }
    }

    for (std::size_t a = 0; a < trials; ++a)
        for (std::size_t b = a + 1; b < trials; ++b)
            report.max_pairwise_distance = std::max(report.max_pairwise_distance,
                                                    (report.limits[a] - report.limits[b]).cwiseAbs().maxCoeff());
    report.agreed = report.max_pairwise_distance < kProbeAgreement;
    report.limit = report.limits.front();
    return report;
}

}  // namespace sisctl
