#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "semiwave/exponents.hpp"
#include "semiwave/rootfind.hpp"

using namespace semiwave;

namespace {

// independent root oracle: bisection on gamma(n, .) over (1, 50]
double strauss_root_oracle(int n) {
    auto f = [n](double p) { return strauss_gamma(n, p); };
    return bisect(f, 1.0 + 1e-12, 50.0, BisectOptions{.rel_tol = 1e-15});
}

// independent bisection on a^2 c log(1+a) = target
double solve_a_oracle(double c, double target) {
    auto f = [&](double a) { return a * a * c * std::log1p(a) - target; };
    double hi = 1.0;
    expand_bracket_up(f, 0.0, hi);
    return bisect(f, 0.0, hi, BisectOptions{.rel_tol = 1e-15});
}

} // namespace

TEST_CASE("gamma evaluates the quadratic directly") {
    REQUIRE(strauss_gamma(3, 2.0) == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(strauss_gamma(1, 2.0) == Catch::Approx(3.0).margin(1e-15));  // no quadratic term
    REQUIRE_THROWS_AS(strauss_gamma(0, 2.0), std::domain_error);
    REQUIRE_THROWS_AS(strauss_gamma(3, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(strauss_gamma(3, 0.5), std::domain_error);
}

TEST_CASE("strauss exponent: closed form, root property, monotonicity") {
    REQUIRE(strauss_exponent(3) == Catch::Approx(1.0 + std::sqrt(2.0)).margin(1e-14));
    REQUIRE(strauss_exponent(2) == Catch::Approx(0.5 * (3.0 + std::sqrt(17.0))).margin(1e-14));
    REQUIRE_THROWS_AS(strauss_exponent(1), std::domain_error);

    for (int n = 2; n <= 10; ++n) {
        CAPTURE(n);
        REQUIRE(std::abs(strauss_gamma(n, strauss_exponent(n))) < 1e-12);
        REQUIRE(strauss_exponent(n) == Catch::Approx(strauss_root_oracle(n)).margin(1e-12));
        if (n > 2) REQUIRE(strauss_exponent(n) < strauss_exponent(n - 1));
    }
}

TEST_CASE("lifespan law cases resolve per dimension and moment") {
    const auto l1 = predicted_lifespan_law(1, 2.0, false);
    REQUIRE(l1.kind == LawKind::power_law);
    REQUIRE(l1.case_tag == LawCase::n1_gmom_nonzero);
    REQUIRE(l1.exponent == Catch::Approx(0.5));

    const auto l1z = predicted_lifespan_law(1, 2.0, true);
    REQUIRE(l1z.case_tag == LawCase::n1_gmom_zero);
    REQUIRE(l1z.exponent == Catch::Approx(2.0 / 3.0));

    for (bool zero : {false, true}) {
        const auto l3 = predicted_lifespan_law(3, 2.0, zero);
        REQUIRE(l3.kind == LawKind::power_law);
        REQUIRE(l3.case_tag == LawCase::generic_subcritical);
        REQUIRE(l3.exponent == Catch::Approx(2.0));  // p(p-1)/gamma(3,2) = 2/1

        const auto lc = predicted_lifespan_law(3, 1.0 + std::sqrt(2.0), zero);
        REQUIRE(lc.kind == LawKind::exponential_law);
        REQUIRE(lc.case_tag == LawCase::critical);
        REQUIRE(lc.exponent == Catch::Approx(2.0 + std::sqrt(2.0)).margin(1e-12));
    }

    const auto l22 = predicted_lifespan_law(2, 2.0, false);
    REQUIRE(l22.kind == LawKind::two_dim_p2);
    REQUIRE(l22.case_tag == LawCase::d2_p2_gmom_nonzero);

    const auto l22z = predicted_lifespan_law(2, 2.0, true);
    REQUIRE(l22z.kind == LawKind::power_law);
    REQUIRE(l22z.case_tag == LawCase::d2_p2_gmom_zero);
    REQUIRE(l22z.exponent == Catch::Approx(1.0));

    const auto l2f = predicted_lifespan_law(2, 1.5, false);
    REQUIRE(l2f.case_tag == LawCase::n2_first_case);
    REQUIRE(l2f.exponent == Catch::Approx(0.5 / 1.5));

    const auto l2z = predicted_lifespan_law(2, 1.5, true);
    REQUIRE(l2z.case_tag == LawCase::generic_subcritical);
    REQUIRE(l2z.exponent == Catch::Approx(1.5 * 0.5 / strauss_gamma(2, 1.5)));

    REQUIRE_THROWS_AS(predicted_lifespan_law(3, 2.5, false), std::domain_error);
    REQUIRE_THROWS_AS(predicted_lifespan_law(2, 3.6, false), std::domain_error);
    // n = 1 has no upper restriction on p
    REQUIRE_NOTHROW(predicted_lifespan_law(1, 7.0, false));
}

TEST_CASE("lifespan orderings: the zero-moment case lives longer") {
    for (double p : {1.1, 1.5, 2.0, 3.0, 5.0}) {
        CAPTURE(p);
        const double first = predicted_lifespan_law(1, p, false).exponent;
        const double second = predicted_lifespan_law(1, p, true).exponent;
        REQUIRE(first < second);
    }
    for (double p : {1.1, 1.3, 1.5, 1.7, 1.9}) {
        CAPTURE(p);
        const double first = (p - 1.0) / (3.0 - p);
        const double generic = p * (p - 1.0) / strauss_gamma(2, p);
        REQUIRE(first < generic);
    }
}

TEST_CASE("law invariants hold over randomized admissible (n, p)") {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 1 + static_cast<int>(unit(rng) * 10.0);
        const double hi = n >= 2 ? strauss_exponent(n) : 8.0;
        const double p = 1.0 + unit(rng) * (hi - 1.0) * 0.999 + 1e-6;
        const bool zero = unit(rng) < 0.5;
        CAPTURE(trial, n, p, zero);
        const auto law = predicted_lifespan_law(n, p, zero);
        REQUIRE(law.exponent > 0.0);
        if (law.kind == LawKind::exponential_law)
            REQUIRE(law.exponent == Catch::Approx(p * (p - 1.0)));
        if (n >= 2) {
            // beyond the critical band: global existence range
            REQUIRE_THROWS_AS(predicted_lifespan_law(n, hi * 1.001, zero), std::domain_error);
        }
    }
}

TEST_CASE("solve_a matches the bisection oracle and is monotone") {
    REQUIRE(solve_a(1.0) == Catch::Approx(solve_a_oracle(1.0, 1.0)).margin(1e-12));
    REQUIRE(solve_a(1.0) == Catch::Approx(1.1447).margin(2e-4));
    // eps = 0.5: a^2 log(1+a) = 4
    REQUIRE(solve_a(0.5) == Catch::Approx(solve_a_oracle(1.0, 4.0)).margin(1e-11));
    REQUIRE(solve_a(0.5) == Catch::Approx(1.929).margin(2e-3));

    double prev = solve_a(0.05);
    for (double eps : {0.1, 0.3, 0.7, 1.0, 2.0, 10.0}) {
        CAPTURE(eps);
        const double a = solve_a(eps);
        REQUIRE(a < prev);
        const double residual = a * a * eps * eps * std::log1p(a) - 1.0;
        REQUIRE(std::abs(residual) < 1e-12);
        prev = a;
    }
    REQUIRE_THROWS_AS(solve_a(0.0), std::domain_error);
}
