#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "grouptest/analytics.hpp"

using namespace gt;

namespace {

// Independent route to phi: a Markov chain over the number of marked slots,
// j -> j+1 with probability (k-j)q per round. All terms are non-negative, so
// this has none of the alternating-sum cancellation of the closed form.
double phi_chain(int k, double q, int t) {
    std::vector<long double> f(static_cast<std::size_t>(k) + 1, 0.0L);
    f[0] = 1.0L;
    for (int round = 0; round < t; ++round) {
        for (int j = k; j >= 0; --j) {
            long double v = f[static_cast<std::size_t>(j)] * (1.0L - (k - j) * static_cast<long double>(q));
            if (j > 0)
                v += f[static_cast<std::size_t>(j - 1)] * (k - j + 1) * static_cast<long double>(q);
            f[static_cast<std::size_t>(j)] = v;
        }
    }
    return static_cast<double>(f[static_cast<std::size_t>(k)]);
}

InstanceParams params(int n, int k, double p, int t) {
    InstanceParams pr;
    pr.n_items = n;
    pr.n_defectives = k;
    pr.inclusion_prob = p;
    pr.n_tests = t;
    return pr;
}

}  // namespace

TEST_CASE("phi hand values") {
    CHECK(phi_k(0, 0.0, 0) == 1.0);
    CHECK(phi_k(0, 0.5, 7) == 1.0);
    CHECK(phi_k(1, 0.5, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(phi_k(1, 0.5, 2) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(phi_k(2, 0.25, 2) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(phi_k(3, 1.0 / 3.0, 3) == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
    // t rounds can mark at most t slots.
    CHECK(phi_k(3, 0.1, 2) == 0.0);
    CHECK(phi_k(5, 0.19, 4) == 0.0);
    // Nothing ever gets marked.
    CHECK(phi_k(2, 0.0, 50) == 0.0);
    // Exactly t = k forces one fresh slot per round: k! q^k.
    CHECK(phi_k(4, 0.2, 4) == doctest::Approx(24.0 * std::pow(0.2, 4)).epsilon(1e-12));
}

TEST_CASE("phi domain") {
    CHECK_THROWS_AS(phi_k(-1, 0.1, 3), std::domain_error);
    CHECK_THROWS_AS(phi_k(2, 0.1, -1), std::domain_error);
    CHECK_THROWS_AS(phi_k(2, -0.1, 3), std::domain_error);
    CHECK_THROWS_AS(phi_k(3, 0.4, 5), std::domain_error);  // k*q > 1
    CHECK_NOTHROW(phi_k(4, 0.25, 5));                      // k*q = 1 allowed
}

TEST_CASE("phi agrees with the chain oracle") {
    for (int k = 1; k <= 8; ++k) {
        for (double q : {0.03, 0.8 / k, 1.0 / k}) {
            for (int t : {0, k, k + 1, 2 * k, 5 * k, 50}) {
                const double a = phi_k(k, q, t);
                const double b = phi_chain(k, q, t);
                CHECK(a == doctest::Approx(b).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("phi bounds and monotonicity") {
    for (int k = 1; k <= 6; ++k) {
        const double q = 0.7 / k;
        double prev = -1.0;
        for (int t = 0; t <= 40; ++t) {
            const double v = phi_k(k, q, t);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            CHECK(v >= prev - 1e-13);  // more rounds never hurt
            prev = v;
            // Union-bound sandwich.
            const double miss = std::pow(1.0 - q, t);
            CHECK(v >= 1.0 - k * miss - 1e-11);
            CHECK(v <= 1.0 - miss + 1e-11);
        }
        // More marking probability never hurts either.
        for (int t = k; t <= 30; t += 3)
            CHECK(phi_k(k, 0.9 / k, t) >= phi_k(k, 0.5 / k, t) - 1e-12);
    }
}

TEST_CASE("phi survives large k via log-space terms") {
    const double q = 1.0 / (std::exp(1.0) * 99.0);
    const double v = phi_k(100, q, 1859);
    CHECK(v >= 1.0 - 100.0 * std::pow(1.0 - q, 1859) - 1e-9);
    CHECK(v <= 1.0 - std::pow(1.0 - q, 1859) + 1e-9);
}

TEST_CASE("dd exact probability: edges and hand value") {
    // N=2, K=1, T=1, p=1/2: the one test must contain the defective and not
    // the other item, which happens with probability 1/4.
    CHECK(dd_success_exact(params(2, 1, 0.5, 1)) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(dd_success_exact(params(10, 0, 0.3, 5)) == 1.0);
    CHECK(dd_success_exact(params(10, 3, 0.3, 0)) == 0.0);
    CHECK(dd_success_exact(params(10, 3, 0.3, 2)) == 0.0);  // fewer tests than defectives
    const double v = dd_success_exact(params(6, 6, 0.4, 30));
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
}

TEST_CASE("dd exact is monotone in the number of tests") {
    double prev = -1.0;
    for (int t = 0; t <= 25; ++t) {
        const double v = dd_success_exact(params(20, 3, 0.2, t));
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    CHECK(prev > 0.7);  // 25 tests at p=0.2 mostly pin three defectives out of 20
}

TEST_CASE("dd closed-form bound stays below the exact value") {
    for (auto [n, k, p] : {std::tuple<int, int, double>{20, 3, 0.2},
                           {50, 8, 0.125},
                           {100, 5, 0.15},
                           {500, 10, 0.1}}) {
        for (int t = 0; t <= 120; t += 15) {
            const double lo = dd_success_lower(params(n, k, p, t));
            const double ex = dd_success_exact(params(n, k, p, t));
            CHECK(lo >= 0.0);
            CHECK(lo <= ex + 1e-9);
        }
    }
    // The bound is not vacuous where it matters.
    CHECK(dd_success_lower(params(500, 10, 0.1, 250)) > 0.5);
}

TEST_CASE("parameter validation is shared") {
    CHECK_THROWS_AS(dd_success_exact(params(0, 0, 0.5, 1)), std::domain_error);
    CHECK_THROWS_AS(dd_success_exact(params(5, 6, 0.5, 1)), std::domain_error);
    CHECK_THROWS_AS(dd_success_exact(params(5, -1, 0.5, 1)), std::domain_error);
    CHECK_THROWS_AS(dd_success_exact(params(5, 2, 0.0, 1)), std::domain_error);
    CHECK_THROWS_AS(dd_success_exact(params(5, 2, 1.0, 1)), std::domain_error);
    CHECK_THROWS_AS(dd_success_exact(params(5, 2, 0.5, -1)), std::domain_error);
    CHECK_THROWS_AS(dd_success_lower(params(5, 2, 0.0, 1)), std::domain_error);
    CHECK_THROWS_AS(comp_success_lower(params(5, 2, 1.5, 1)), std::domain_error);
    CHECK_THROWS_AS(sss_success_lower(params(5, 0, 0.5, 1)), std::domain_error);
}

TEST_CASE("comp bound") {
    // N=2, K=1, p=1/2: COMP succeeds iff the other item hits a negative test;
    // with one test that is exactly 1/4, and the bound is tight.
    CHECK(comp_success_lower(params(2, 1, 0.5, 1)) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(comp_success_lower(params(10, 3, 0.2, 0)) == 0.0);
    CHECK(comp_success_lower(params(7, 7, 0.3, 4)) == 1.0);  // nobody left to misclassify
    double prev = -1.0;
    for (int t = 0; t <= 200; t += 20) {
        const double v = comp_success_lower(params(500, 10, 0.1, t));
        CHECK(v >= prev - 1e-12);
        CHECK(v <= 1.0);
        prev = v;
    }
    CHECK(prev > 0.5);
}

TEST_CASE("counting bound") {
    CHECK(info_bound(2, 1, 1) == 1.0);
    CHECK(info_bound(4, 1, 1) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(info_bound(3, 1, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(info_bound(10, 0, 0) == 1.0);
    const double tiny = info_bound(500, 10, 50);
    CHECK(tiny > 0.0);
    CHECK(tiny < 1e-4);
    double prev = 0.0;
    for (int t = 0; t <= 80; t += 8) {
        const double v = info_bound(500, 10, t);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(info_bound(500, 10, 4000) == 1.0);
    CHECK_THROWS_AS(info_bound(10, 2, -1), std::domain_error);
    CHECK_THROWS_AS(info_bound(2, 3, 1), std::domain_error);
}

TEST_CASE("sss lower bound hand values") {
    // N=2, K=1, p=1/2: both failure modes decay as (1/2)^T.
    CHECK(sss_success_lower(params(2, 1, 0.5, 1)) == 0.0);
    CHECK(sss_success_lower(params(2, 1, 0.5, 2)) == doctest::Approx(0.5).epsilon(1e-12));
    // N=3, K=1, p=1/2, T=2: 1 - (1/4) - 2*(1/4).
    CHECK(sss_success_lower(params(3, 1, 0.5, 2)) == doctest::Approx(0.25).epsilon(1e-12));
    // All items defective: only the drop-one mode remains.
    const double all_def = sss_success_lower(params(3, 3, 0.4, 40));
    CHECK(all_def > 0.99);
    CHECK(all_def <= 1.0);
    double prev = -1.0;
    for (int t = 0; t <= 200; t += 20) {
        const double v = sss_success_lower(params(500, 10, 0.1, t));
        CHECK(v >= prev - 1e-12);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
}

TEST_CASE("sss upper bound") {
    CHECK(sss_success_upper(0, 10) == 1.0);
    CHECK(sss_success_upper(1, 10) == 1.0);
    CHECK(sss_success_upper(2, 0) == 0.0);
    const double q10 = 1.0 / (std::exp(1.0) * 9.0);
    CHECK(sss_success_upper(10, 250) == doctest::Approx(phi_k(10, q10, 250)).epsilon(1e-12));
    double prev = -1.0;
    for (int t = 0; t <= 300; t += 25) {
        const double v = sss_success_upper(10, t);
        CHECK(v >= prev - 1e-13);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
    CHECK(prev > 0.99);
    CHECK_THROWS_AS(sss_success_upper(-1, 5), std::domain_error);
    CHECK_THROWS_AS(sss_success_upper(2, -1), std::domain_error);
}

TEST_CASE("rate bounds at landmark sparsities") {
    const double e_ln2 = std::exp(1.0) * std::log(2.0);

    const RateBounds dense = rate_bounds(1.0);
    CHECK(dense.capacity_upper == 1.0);
    CHECK(dense.comp_lower == doctest::Approx(0.5307378).epsilon(1e-6));
    CHECK(dense.dd_lower == doctest::Approx(0.5307378).epsilon(1e-6));
    CHECK(dense.sss_upper == 1.0);
    CHECK(dense.k_beta == 1.0);

    const RateBounds half = rate_bounds(0.5);
    CHECK(half.comp_lower == doctest::Approx(0.5 / e_ln2).epsilon(1e-12));
    CHECK(half.dd_lower == doctest::Approx(1.0 / e_ln2).epsilon(1e-12));
    CHECK(half.sss_upper == doctest::Approx(1.0 / e_ln2).epsilon(1e-12));
    CHECK(half.k_beta == 0.5);

    const RateBounds quarter = rate_bounds(0.25);
    CHECK(quarter.dd_lower == doctest::Approx((1.0 / 3.0) / e_ln2).epsilon(1e-12));
    CHECK(quarter.sss_upper == doctest::Approx(quarter.dd_lower).epsilon(1e-12));
    CHECK(quarter.k_beta == 0.75);

    CHECK(rate_bounds(0.8).sss_upper == 1.0);  // above the pinch-off point

    CHECK_THROWS_AS(rate_bounds(0.0), std::domain_error);
    CHECK_THROWS_AS(rate_bounds(-0.1), std::domain_error);
    CHECK_THROWS_AS(rate_bounds(1.1), std::domain_error);
}

TEST_CASE("rate bound ordering across the grid") {
    for (int i = 1; i <= 100; ++i) {
        const double beta = i / 100.0;
        const RateBounds rb = rate_bounds(beta);
        CHECK(rb.comp_lower > 0.0);
        CHECK(rb.comp_lower <= rb.dd_lower + 1e-12);
        CHECK(rb.dd_lower <= rb.sss_upper + 1e-12);
        CHECK(rb.sss_upper <= rb.capacity_upper + 1e-12);
        CHECK(rb.k_beta == doctest::Approx(std::max(beta, 1.0 - beta)));
        // Below one half, DD already meets the SSS ceiling.
        if (beta <= 0.5) CHECK(rb.dd_lower == doctest::Approx(rb.sss_upper).epsilon(1e-12));
    }
}

TEST_CASE("sparsity pinch-off point") {
    const double bs = beta_star();
    CHECK(bs == doctest::Approx(0.6532797).epsilon(1e-6));
    // Defining property: the SSS ceiling reaches capacity exactly there.
    CHECK(rate_bounds(bs).sss_upper == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rate_bounds(bs - 0.01).sss_upper < 1.0);
    CHECK(rate_bounds(std::min(1.0, bs + 0.01)).sss_upper == 1.0);
}

TEST_CASE("effective sparsity") {
    CHECK(beta_eff(100, 10) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(beta_eff(500, 10) == doctest::Approx(1.0 - std::log(10.0) / std::log(500.0)).epsilon(1e-12));
    CHECK(beta_eff(1000, 1) == 1.0);
    CHECK(beta_eff(64, 64) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(beta_eff(1, 1), std::domain_error);
    CHECK_THROWS_AS(beta_eff(10, 0), std::domain_error);
    CHECK_THROWS_AS(beta_eff(10, 11), std::domain_error);
}

TEST_CASE("phase transition thresholds") {
    const PhaseThresholds small = phase_transition_thresholds(3, 1.0);
    CHECK(small.t_success == 12);
    CHECK(small.t_fail == 4);
    const PhaseThresholds big = phase_transition_thresholds(100, 0.5);
    CHECK(big.t_success == 1859);
    CHECK(big.t_fail == 1234);
    CHECK_THROWS_AS(phase_transition_thresholds(2, 1.0), std::domain_error);
    CHECK_THROWS_AS(phase_transition_thresholds(5, 0.0), std::domain_error);

    // The brackets mean what they claim: high masking probability above
    // t_success, at most 2/3 at t_fail.
    for (int k : {3, 5, 10}) {
        for (double dp : {0.5, 1.0}) {
            const PhaseThresholds th = phase_transition_thresholds(k, dp);
            CHECK(th.t_fail < th.t_success);
            const double q = 1.0 / (std::exp(1.0) * (k - 1));
            CHECK(phi_k(k, q, th.t_success) >= 1.0 - std::pow(k, -dp) - 1e-9);
            CHECK(phi_k(k, q, th.t_fail) <= 2.0 / 3.0 + 1e-9);
        }
    }
}

TEST_CASE("log binomial") {
    CHECK(log_binom(5, 0) == 0.0);
    CHECK(log_binom(5, 5) == 0.0);
    CHECK(log_binom(7, 1) == doctest::Approx(std::log(7.0)).epsilon(1e-12));
    CHECK(log_binom(50, 13) == doctest::Approx(log_binom(50, 37)).epsilon(1e-12));
    CHECK(log_binom(4, 2) == doctest::Approx(std::log(6.0)).epsilon(1e-12));
    for (auto [n, k] : {std::pair<int, int>{10, 3}, {100, 10}, {500, 10}, {1000, 250}}) {
        const double lb = log_binom(n, k);
        CHECK(lb >= k * std::log(static_cast<double>(n) / k) - 1e-9);
        CHECK(lb <= k * (std::log(static_cast<double>(n) / k) + 1.0) + 1e-9);
    }
    CHECK_THROWS_AS(log_binom(5, -1), std::domain_error);
    CHECK_THROWS_AS(log_binom(5, 6), std::domain_error);
}

TEST_CASE("adversarial inclusion probability is always admissible") {
    // k * 1/(e(k-1)) <= 1 for every k >= 2, so the ceiling never trips the
    // phi domain check.
    for (int k : {2, 3, 10, 100, 10000}) CHECK_NOTHROW(sss_success_upper(k, 3 * k));
}

TEST_CASE("no stability warnings across a representative workload") {
    reset_stability_warnings();
    for (int t = 0; t <= 250; t += 10) {
        dd_success_exact(params(500, 10, 0.1, t));
        dd_success_lower(params(500, 10, 0.1, t));
        comp_success_lower(params(500, 10, 0.1, t));
        sss_success_lower(params(500, 10, 0.1, t));
        sss_success_upper(10, t);
        info_bound(500, 10, t);
    }
    for (int k = 1; k <= 12; ++k)
        for (int t = 0; t <= 60; t += 5) phi_k(k, 0.9 / k, t);
    CHECK(stability_warning_count() == 0);
    reset_stability_warnings();
}
