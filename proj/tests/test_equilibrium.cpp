#include "expect_error.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include "sisctl/equilibrium.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace sisctl;

TEST(ClosedForm, Examples)
{
    EXPECT_EQ(endemic_closed_form(1.0).value, 0.0);
    EXPECT_TRUE(endemic_closed_form(1.0).regime_mismatch);
    EXPECT_NEAR(endemic_closed_form(2.0).value, (6.0 - std::sqrt(20.0)) / 8.0, 1e-15);
    EXPECT_NEAR(endemic_closed_form(2.0).value, 0.1909830, 1e-7);
    EXPECT_NEAR(endemic_closed_form(5.0).value, (15.0 - std::sqrt(65.0)) / 20.0, 1e-15);
    EXPECT_NEAR(endemic_closed_form(5.0).value, 0.3468871, 1e-7);
    EXPECT_FALSE(endemic_closed_form(5.0).regime_mismatch);
}

TEST(ClosedForm, SubThresholdIsFlagged)
{
    const auto out = endemic_closed_form(0.5);
    EXPECT_TRUE(out.regime_mismatch);
    EXPECT_LT(out.value, 0.0);
}

TEST(ClosedForm, RejectsNonPositive)
{
    EXPECT_SISCTL_ERROR(endemic_closed_form(0.0), ErrorKind::NonPositiveR0);
    EXPECT_SISCTL_ERROR(endemic_closed_form(-1.0), ErrorKind::NonPositiveR0);
    EXPECT_SISCTL_ERROR(endemic_closed_form(std::nan("")), ErrorKind::NonPositiveR0);
}

TEST(ClosedForm, MatchesScalarBisection)
{
    for (double r0 : {1.01, 1.5, 2.0, 3.0, 5.0, 8.0, 100.0, 1e6}) {
        EXPECT_NEAR(endemic_closed_form(r0).value, oracle::endemic_level_by_bisection(r0), 1e-14) << r0;
    }
}

TEST(ClosedForm, RangeMonotonicityAndLimit)
{
    double previous = 0.0;
    for (double r0 = 1.0 + 1e-9; r0 <= 1e6; r0 *= 1.05) {
        const double x = endemic_closed_form(r0).value;
        ASSERT_GT(x, 0.0) << r0;
        ASSERT_LT(x, 0.5) << r0;
        ASSERT_GT(x, previous) << r0;
        previous = x;
    }
    EXPECT_GT(previous, 0.4999);
}

TEST(ClosedForm, SatisfiesEquilibriumCondition)
{
    for (double r0 = 1.0; r0 <= 1e4; r0 *= 1.3) {
        const double x = endemic_closed_form(r0).value;
        const double gamma = 1.0;
        const double beta = r0 * gamma;
        EXPECT_NEAR(beta * (1.0 - 2.0 * x) * (1.0 - x), gamma, 1e-10 * std::max(1.0, beta)) << r0;
    }
}

TEST(FixedPoint, ExperimentNetworkMatchesClosedForm)
{
    const auto net = generate_geometric_network(100, 50.0, 100.0, 7);
    gen::Source src(1);
    const auto result = endemic_fixed_point(net, 2.0, gen::uniform_vector(100, src, 1e-6, 0.5 - 1e-6));
    EXPECT_LE((result.vector_form.array() - endemic_closed_form(2.0).value).abs().maxCoeff(), 1e-8);
    EXPECT_LE(result.residual, 1e-10);
    EXPECT_EQ(result.method, EquilibriumMethod::FixedPoint);
    EXPECT_NEAR(result.x_bar, result.vector_form.mean(), 0.0);
}

TEST(FixedPoint, ScalarAgainstBisection)
{
    const auto net = build_network(Matrix::Ones(1, 1));
    const auto result = endemic_fixed_point(net, 5.0, Vector::Constant(1, 0.1));
    EXPECT_NEAR(result.vector_form(0), oracle::endemic_level_by_bisection(5.0), 1e-10);
    EXPECT_NEAR(result.vector_form(0), 0.3468871, 1e-7);
}

TEST(FixedPoint, StartAtSolutionConvergesImmediately)
{
    const auto net = generate_geometric_network(30, 50.0, 100.0, 4);
    const double x_bar = endemic_closed_form(3.0).value;
    const auto result = endemic_fixed_point(net, 3.0, Vector::Constant(30, x_bar));
    EXPECT_LE(result.iterations, 2);
    EXPECT_LT(result.residual, 1e-12);
}

TEST(FixedPoint, DampingKeepsTheFixedPoint)
{
    const auto net = generate_geometric_network(30, 50.0, 100.0, 4);
    const Vector start = Vector::Constant(30, 0.05);
    const auto plain = endemic_fixed_point(net, 2.5, start);
    const auto damped = endemic_fixed_point(net, 2.5, start, {0.5, 1e-12, 100000});
    EXPECT_LE((plain.vector_form - damped.vector_form).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_GE(damped.iterations, plain.iterations);
    EXPECT_EQ(damped.damping, 0.5);
}

TEST(FixedPoint, IterationBudget)
{
    const auto net = generate_geometric_network(30, 50.0, 100.0, 4);
    EXPECT_SISCTL_ERROR(endemic_fixed_point(net, 2.0, Vector::Constant(30, 0.01), {1.0, 1e-15, 3}),
                        ErrorKind::NoConvergence);
}

TEST(FixedPoint, RejectsInvalidInputs)
{
    const auto net = generate_geometric_network(5, 200.0, 100.0, 1);
    const Vector ok = Vector::Constant(5, 0.2);
    EXPECT_SISCTL_ERROR(endemic_fixed_point(net, 1.0, ok), ErrorKind::AssumptionViolation);
    EXPECT_SISCTL_ERROR(endemic_fixed_point(net, 0.5, ok), ErrorKind::AssumptionViolation);
    EXPECT_SISCTL_ERROR(endemic_fixed_point(net, 2.0, Vector::Constant(5, 0.5)), ErrorKind::AssumptionViolation);
    EXPECT_SISCTL_ERROR(endemic_fixed_point(net, 2.0, Vector::Zero(5)), ErrorKind::AssumptionViolation);
    EXPECT_SISCTL_ERROR(endemic_fixed_point(net, 2.0, ok, {0.0, 1e-12, 100}), ErrorKind::AssumptionViolation);
    EXPECT_SISCTL_ERROR(endemic_fixed_point(net, 2.0, Vector::Constant(4, 0.2)), ErrorKind::DimensionMismatch);
    Matrix weak(2, 2);
    weak << 0.4, 0.6, 0.6, 0.4;
    EXPECT_SISCTL_ERROR(endemic_fixed_point(build_network(weak), 2.0, Vector::Constant(2, 0.2)),
                        ErrorKind::AssumptionViolation);
}

TEST(FixedPoint, HDiagonalAtLeastOne)
{
    gen::Source src(31);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = src.integer(1, 20);
        const auto net = build_network(gen::assumption4_network(n, src));
        const Vector x = gen::uniform_vector(n, src, 0.0, 0.5);
        EXPECT_GE(h_diagonal(net, src.uniform(0.1, 10.0), x).minCoeff(), 1.0);
    }
}

TEST(UniquenessProbe, ExperimentNetworkAgrees)
{
    const auto net = generate_geometric_network(100, 50.0, 100.0, 7);
    const auto report = uniqueness_probe(net, 2.0, 50, 2024);
    EXPECT_EQ(report.trials, 50u);
    EXPECT_LT(report.max_pairwise_distance, 1e-7);
    EXPECT_TRUE(report.agreed);
}

TEST(UniquenessProbe, TwoDistinctStartsSameLimit)
{
    const auto net = generate_geometric_network(20, 50.0, 100.0, 8);
    const auto report = uniqueness_probe(net, 3.0, 2, 5);
    ASSERT_EQ(report.limits.size(), 2u);
    EXPECT_LT((report.limits[0] - report.limits[1]).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(UniquenessProbe, HighR0LimitsMatchClosedForm)
{
    const auto net = generate_geometric_network(100, 50.0, 100.0, 7);
    const auto report = uniqueness_probe(net, 5.0, 50, 17);
    for (const auto& limit : report.limits)
        EXPECT_LE((limit.array() - 0.3468871).abs().maxCoeff(), 1e-7);
}

TEST(UniquenessProbe, PropagatesTrialIndex)
{
    const auto net = generate_geometric_network(20, 50.0, 100.0, 8);
    try {
        uniqueness_probe(net, 2.0, 3, 1, {1.0, 1e-15, 2});
        FAIL() << "expected NoConvergence";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoConvergence);
        ASSERT_TRUE(e.index().has_value());
        EXPECT_EQ(*e.index(), 0u);
    }
    EXPECT_SISCTL_ERROR(uniqueness_probe(net, 2.0, 1, 1), ErrorKind::AssumptionViolation);
}
