#include "auxmean/verify.hpp"

#include <cmath>

#include "doctest.h"
#include "auxmean/adversary.hpp"
#include "test_helpers.hpp"

using namespace auxmean;
using testutil::rel_gap;

TEST_CASE("golden_section_min on known scalar problems") {
    SUBCASE("smooth quadratic") {
        const auto result = golden_section_min(
            [](double x) { return (x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-10);
        CHECK(std::abs(result.argmin - 0.3) < 1e-9);
        CHECK(result.min < 1e-18);
    }
    SUBCASE("nonsmooth unimodal") {
        const auto result =
            golden_section_min([](double x) { return std::abs(x - 0.5); }, 0.0, 1.0, 1e-8);
        CHECK(std::abs(result.argmin - 0.5) < 1e-7);
    }
    SUBCASE("invalid bracket") {
        CHECK_THROWS_AS(golden_section_min([](double x) { return x; }, 1.0, 0.0, 1e-8),
                        std::invalid_argument);
        CHECK_THROWS_AS(golden_section_min([](double x) { return x; }, 1.0, 1.0, 1e-8),
                        std::invalid_argument);
    }
    SUBCASE("scalarized objective: the oracle for the closed-form weight") {
        ProblemSpec spec;
        spec.n = 20;
        spec.N = 1000;
        spec.d = 200;
        spec.eps = 1.0;
        spec.delta_sq = 1.0;
        spec.mode = NormMode::Frobenius;
        const auto result = golden_section_min(
            [&spec](double s) { return scalar_objective(spec, s); }, 0.0, 1.0, 1e-10);
        CHECK(std::abs(result.argmin - optimal_weight(spec)) < 1e-7);
    }
}

TEST_CASE("check_scalar_optimum passes on random specs in every mode") {
    for (NormMode mode : {NormMode::Frobenius, NormMode::Trace, NormMode::Operator}) {
        for (std::uint64_t i = 0; i < 200; ++i) {
            const OracleReport report = check_scalar_optimum(random_spec(mode, 424242, i));
            CAPTURE(report.quantity);
            CHECK(report.passed);
        }
    }
}

TEST_CASE("check_scalar_optimum: modes are indistinguishable at d = 1") {
    ProblemSpec spec;
    spec.n = 12;
    spec.N = 240;
    spec.d = 1;
    spec.eps = 0.4;
    spec.delta_sq = 1.3;

    spec.mode = NormMode::Frobenius;
    const OracleReport frob = check_scalar_optimum(spec);
    spec.mode = NormMode::Trace;
    const OracleReport trace = check_scalar_optimum(spec);
    spec.mode = NormMode::Operator;
    const OracleReport op = check_scalar_optimum(spec);

    CHECK(frob.closed_form == trace.closed_form);
    CHECK(trace.closed_form == op.closed_form);
    CHECK(frob.oracle_value == trace.oracle_value);
    CHECK(trace.oracle_value == op.oracle_value);
    CHECK(frob.passed);
    CHECK(trace.passed);
    CHECK(op.passed);
}

TEST_CASE("check_scalar_optimum: zero radius recovers the pooled weight") {
    ProblemSpec spec;
    spec.n = 20;
    spec.N = 1000;
    spec.d = 50;
    spec.eps = 0.0;
    spec.delta_sq = 1.0;
    spec.mode = NormMode::Frobenius;

    const auto oracle = golden_section_min(
        [&spec](double s) { return scalar_objective(spec, s); }, 0.0, 1.0, 1e-10);
    CHECK(std::abs(oracle.argmin - 20.0 / 1020.0) < 1e-7);
    CHECK(check_scalar_optimum(spec).passed);
}

TEST_CASE("check_matrix_optimum: the scaled identity is a local minimum") {
    ProblemSpec spec;
    spec.n = 20;
    spec.N = 1000;
    spec.d = 3;
    spec.eps = 1.0;
    spec.delta_sq = 1.0;
    spec.mode = NormMode::Frobenius;

    const OracleReport report = check_matrix_optimum(spec, 1000, 0.1, 7);
    CHECK(report.passed);
    CHECK(rel_gap(report.closed_form, minmax_risk(spec).risk_star) < 1e-12);
    CHECK(report.oracle_value >= report.closed_form - 1e-9);

    // Raising one singular value toward 1 strictly increases the objective.
    const double s_star = optimal_weight(spec);
    Eigen::MatrixXd bumped = s_star * Eigen::MatrixXd::Identity(3, 3);
    bumped(0, 0) += 0.05;
    CHECK(matrix_objective(spec, bumped) > report.closed_form + 1e-8);
}

TEST_CASE("check_matrix_optimum is deterministic in the seed") {
    ProblemSpec spec;
    spec.n = 10;
    spec.N = 100;
    spec.d = 2;
    spec.eps = 0.5;
    spec.delta_sq = 1.0;
    spec.mode = NormMode::Operator;

    const OracleReport a = check_matrix_optimum(spec, 200, 0.1, 99);
    const OracleReport b = check_matrix_optimum(spec, 200, 0.1, 99);
    CHECK(a.oracle_value == b.oracle_value);
    CHECK(a.abs_gap == b.abs_gap);
    CHECK(a.passed == b.passed);
}

TEST_CASE("check_unbounded_without_sum_constraint") {
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(3, 3);

    SUBCASE("A = B = I diverges quadratically") {
        const std::vector<double> risks =
            check_unbounded_without_sum_constraint(identity, identity, {1.0, 10.0, 100.0});
        // Unit covariances and single samples contribute Tr(A^T A) + Tr(B^T B) = 6.
        CHECK(risks[0] == doctest::Approx(6.0 + 1.0).epsilon(1e-12));
        CHECK(risks[1] == doctest::Approx(6.0 + 100.0).epsilon(1e-12));
        CHECK(risks[2] == doctest::Approx(6.0 + 10000.0).epsilon(1e-12));
    }
    SUBCASE("complementary weights satisfy the constraint") {
        CHECK_THROWS_WITH_AS(
            check_unbounded_without_sum_constraint(0.5 * identity, 0.5 * identity, {1.0}),
            "constraint satisfied; nothing to demonstrate", std::invalid_argument);
    }
    SUBCASE("random violating pairs give strictly increasing risk") {
        std::mt19937_64 rng(4);
        for (int rep = 0; rep < 10; ++rep) {
            const Eigen::MatrixXd a = testutil::random_matrix(3, 3, rng);
            const Eigen::MatrixXd b = testutil::random_matrix(3, 3, rng);
            const Eigen::MatrixXd defect = a + b - identity;
            if (defect.norm() < 1e-3) continue;
            const std::vector<double> risks =
                check_unbounded_without_sum_constraint(a, b, {1.0, 10.0, 100.0, 1e4});
            for (std::size_t i = 1; i < risks.size(); ++i) CHECK(risks[i] > risks[i - 1]);
            CHECK(risks.back() > 1e4);
        }
    }
}

TEST_CASE("check_adversary_optimality") {
    ProblemSpec spec;
    spec.n = 20;
    spec.d = 3;
    spec.eps = 1.0;
    spec.delta_sq = 1.0;
    spec.mode = NormMode::Frobenius;

    SUBCASE("large auxiliary count leaves a tight tolerance") {
        spec.N = 10000;
        const double s = optimal_weight(spec);
        const OracleReport report = check_adversary_optimality(spec, s, 500, 11);
        CHECK(report.passed);
        CHECK(report.tolerance < 1e-4);

        // The reference pair itself realizes the reported closed form.
        const AdversaryPair pair = worst_case_large_n(spec, s);
        const double risk = risk_from_moments(ScalarWeight{s}, pair.p, pair.q, spec.n, spec.N);
        CHECK(report.closed_form == risk);
    }
    SUBCASE("small auxiliary count widens the slack") {
        spec.N = 10;
        const double s = optimal_weight(spec);
        const OracleReport report = check_adversary_optimality(spec, s, 500, 11);
        const double trace = worst_case_large_n(spec, s).p.cov.trace();
        CHECK(report.tolerance == doctest::Approx(1e-6 + 5.0 * trace / 81.0).epsilon(1e-12));
        CHECK(report.passed);
    }
    SUBCASE("deterministic in the seed") {
        spec.N = 100;
        const OracleReport a = check_adversary_optimality(spec, 0.5, 100, 3);
        const OracleReport b = check_adversary_optimality(spec, 0.5, 100, 3);
        CHECK(a.oracle_value == b.oracle_value);
        CHECK(a.abs_gap == b.abs_gap);
    }
}

TEST_CASE("random_spec stays inside the documented ranges") {
    for (std::uint64_t i = 0; i < 200; ++i) {
        const ProblemSpec spec = random_spec(NormMode::Trace, 1, i);
        CHECK(spec.n >= 1);
        CHECK(spec.n <= 10000);
        CHECK(spec.N >= 1);
        CHECK(spec.N <= 10000);
        CHECK(spec.d >= 1);
        CHECK(spec.d <= 500);
        const double ratio = spec.budget_ratio();
        CHECK(ratio >= 0.9e-4);
        CHECK(ratio <= 1.1e4);
    }
}

TEST_CASE("verification suites pass and are reproducible") {
    const auto reports = run_suite("all", 7);
    CHECK(reports.size() > 600);
    for (const OracleReport& report : reports) {
        CAPTURE(report.quantity);
        CHECK(report.passed);
        CHECK(report.passed == (report.abs_gap <= report.tolerance));
    }

    const auto again = run_suite("matrix", 7);
    const auto expected = run_suite("matrix", 7);
    REQUIRE(again.size() == expected.size());
    for (std::size_t i = 0; i < again.size(); ++i) {
        CHECK(again[i].quantity == expected[i].quantity);
        CHECK(again[i].closed_form == expected[i].closed_form);
        CHECK(again[i].oracle_value == expected[i].oracle_value);
    }

    CHECK_THROWS_AS(run_suite("nope", 7), std::invalid_argument);
}
