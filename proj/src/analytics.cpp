#include "grouptest/analytics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace gt {
namespace {

std::atomic<int> g_stability_warnings{0};

constexpr long double kClampWarnDistance = 1e-6L;

// Final [0,1] guard for probability outputs. Semantic max{0,...} clamps in
// the formulas themselves happen before this, so a warning here really does
// mean the arithmetic drifted.
double clamp01(long double x) {
    if (x < 0.0L) {
        if (-x > kClampWarnDistance) ++g_stability_warnings;
        return 0.0;
    }
    if (x > 1.0L) {
        if (x - 1.0L > kClampWarnDistance) ++g_stability_warnings;
        return 1.0;
    }
    return static_cast<double>(x);
}

long double log_binom_ld(int n, int k) {
    if (k < 0 || n < 0 || k > n) throw std::domain_error("log_binom requires 0 <= k <= n");
    if (k == 0 || k == n) return 0.0L;
    return std::lgamma(n + 1.0L) - std::lgamma(k + 1.0L) - std::lgamma(n - k + 1.0L);
}

// Row k of Pascal's triangle. C(64,32) < 2^63, so everything here is exact.
std::vector<unsigned long long> binom_row(int k) {
    std::vector<unsigned long long> row{1};
    for (int i = 1; i <= k; ++i) {
        std::vector<unsigned long long> next(i + 1, 1);
        for (int j = 1; j < i; ++j) next[j] = row[j - 1] + row[j];
        row = std::move(next);
    }
    return row;
}

// Unclamped phi; callers guarantee 0 <= k*q <= 1 (up to rounding).
long double phi_k_ld(int k, long double q, int t) {
    if (k == 0) return 1.0L;
    if (t < k) return 0.0L;  // can't mark k distinct slots in fewer rounds
    if (q <= 0.0L) return 0.0L;

    // Neumaier-compensated alternating sum.
    long double sum = 0.0L;
    long double comp = 0.0L;
    auto add = [&](long double v) {
        const long double s = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            comp += (sum - s) + v;
        else
            comp += (v - s) + sum;
        sum = s;
    };

    if (k <= 64) {
        const std::vector<unsigned long long> binom = binom_row(k);
        for (int l = 0; l <= k; ++l) {
            const long double base = std::max(0.0L, 1.0L - l * q);
            const long double term =
                static_cast<long double>(binom[l]) * std::pow(base, static_cast<long double>(t));
            add((l & 1) ? -term : term);
        }
    } else {
        for (int l = 0; l <= k; ++l) {
            const long double base = 1.0L - l * q;
            long double term;
            if (base <= 0.0L)
                term = 0.0L;
            else
                term = std::exp(log_binom_ld(k, l) + t * std::log(base));
            add((l & 1) ? -term : term);
        }
    }
    return sum + comp;
}

void check_params(const InstanceParams& pr) {
    if (pr.n_items < 1) throw std::domain_error("n_items must be positive");
    if (pr.n_defectives < 0 || pr.n_defectives > pr.n_items)
        throw std::domain_error("n_defectives must lie in [0, n_items]");
    if (pr.n_tests < 0) throw std::domain_error("n_tests must be non-negative");
    if (!(pr.inclusion_prob > 0.0 && pr.inclusion_prob < 1.0))
        throw std::domain_error("inclusion_prob must lie strictly inside (0,1)");
}

// Binomial pmf via logs, with the degenerate theta handled exactly.
long double binom_pmf(int n, long double theta, int m) {
    if (theta >= 1.0L) return m == n ? 1.0L : 0.0L;
    if (theta <= 0.0L) return m == 0 ? 1.0L : 0.0L;
    long double lg = log_binom_ld(n, m);
    if (m > 0) lg += m * std::log(theta);
    if (n - m > 0) lg += (n - m) * std::log1p(-theta);
    return std::exp(lg);
}

// (1 - theta)^t with the 0^0 = 1 corner pinned down.
long double pow_1m(long double theta, int t) {
    if (t == 0) return 1.0L;
    if (theta >= 1.0L) return 0.0L;
    return std::exp(t * std::log1p(-theta));
}

}  // namespace

double phi_k(int k, double q, int t) {
    if (k < 0) throw std::domain_error("phi_k requires k >= 0");
    if (t < 0) throw std::domain_error("phi_k requires t >= 0");
    if (q < 0.0 || static_cast<long double>(k) * q > 1.0L + 1e-9L)
        throw std::domain_error("phi_k requires 0 <= k*q <= 1");
    return clamp01(phi_k_ld(k, q, t));
}

double dd_success_exact(const InstanceParams& params) {
    check_params(params);
    const int n = params.n_items;
    const int k = params.n_defectives;
    const int t = params.n_tests;
    if (k == 0) return 1.0;  // DD outputs the empty set, which is correct

    const long double p = params.inclusion_prob;
    const long double log1m_p = std::log1p(-p);
    const long double q0 = std::exp(k * log1m_p);           // test all-clear of defectives
    const long double q1 = p * std::exp((k - 1) * log1m_p); // test hits one given defective only
    const long double denom = -std::expm1(k * log1m_p);     // 1 - q0, stable for tiny p

    // Condition on m0 negative tests, then on g non-defectives hiding from
    // all of them; each defective must then claim a positive test for itself
    // against the k-1 others and those g intruders.
    long double total = 0.0L;
    for (int m0 = 0; m0 <= t; ++m0) {
        const long double w_m0 = binom_pmf(t, q0, m0);
        if (w_m0 == 0.0L) continue;
        const long double hide = std::exp(m0 * log1m_p);  // P(one non-defective misses all m0)
        long double inner = 0.0L;
        for (int g = 0; g <= n - k; ++g) {
            const long double w_g = binom_pmf(n - k, hide, g);
            if (w_g == 0.0L) continue;
            const long double q_star = q1 * std::exp(g * log1m_p) / denom;
            inner += w_g * phi_k_ld(k, q_star, t - m0);
        }
        total += w_m0 * inner;
    }
    return clamp01(total);
}

double dd_success_lower(const InstanceParams& params) {
    check_params(params);
    const int n = params.n_items;
    const int k = params.n_defectives;
    const int t = params.n_tests;
    if (k == 0) return 1.0;

    const long double p = params.inclusion_prob;
    const long double log1m_p = std::log1p(-p);
    const long double q0 = std::exp(k * log1m_p);
    const long double q1 = p * std::exp((k - 1) * log1m_p);
    const long double denom = -std::expm1(k * log1m_p);
    const long double ratio = q1 / denom;

    long double total = 0.0L;
    for (int m0 = 0; m0 <= t; ++m0) {
        const long double w_m0 = binom_pmf(t, q0, m0);
        if (w_m0 == 0.0L) continue;
        const long double theta = n * std::exp(m0 * log1m_p) * std::expm1((t - m0) * p * ratio) -
                                  ratio * (t - m0);
        total += w_m0 * std::max(0.0L, 1.0L - k * std::exp(theta));
    }
    return clamp01(total);
}

double comp_success_lower(const InstanceParams& params) {
    check_params(params);
    const int n = params.n_items;
    const int k = params.n_defectives;
    const long double p = params.inclusion_prob;
    const long double isolate = p * std::exp(k * std::log1p(-p));  // p(1-p)^K
    const long double raw = 1.0L - (n - k) * pow_1m(isolate, params.n_tests);
    return clamp01(std::max(0.0L, raw));
}

double info_bound(int n, int k, int t) {
    if (t < 0) throw std::domain_error("info_bound requires t >= 0");
    const long double log_gap = t * std::numbers::ln2_v<long double> - log_binom_ld(n, k);
    if (log_gap >= 0.0L) return 1.0;
    return clamp01(std::exp(log_gap));
}

double sss_success_lower(const InstanceParams& params) {
    check_params(params);
    if (params.n_defectives < 1)
        throw std::domain_error("sss_success_lower requires at least one defective");
    const int n = params.n_items;
    const int k = params.n_defectives;
    const int t = params.n_tests;
    const long double log1m_p = std::log1p(-params.inclusion_prob);

    // Q(K,L,B): chance a single test distinguishes the defective set from a
    // rival obtained by swapping out some defectives for an L-item set
    // sharing B of them.
    auto q_dist = [&](int kk, int ll, int bb) {
        return std::exp(kk * log1m_p) + std::exp(ll * log1m_p) -
               2.0L * std::exp((kk + ll - bb) * log1m_p);
    };

    // Mode 1: some defective can simply be dropped (rival of size K-1).
    long double deficit = k * pow_1m(q_dist(k, k - 1, k - 1), t);
    // Mode 2: a same-size rival overlapping in B < K items survives every test.
    for (int b = 0; b < k; ++b) {
        if (k - b > n - k) continue;  // not enough non-defectives to swap in
        const long double ways = std::exp(log_binom_ld(k, b) + log_binom_ld(n - k, k - b));
        deficit += ways * pow_1m(q_dist(k, k, b), t);
    }
    return clamp01(std::max(0.0L, 1.0L - deficit));
}

double sss_success_upper(int k, int t) {
    if (k < 0) throw std::domain_error("sss_success_upper requires k >= 0");
    if (t < 0) throw std::domain_error("sss_success_upper requires t >= 0");
    if (k <= 1) return 1.0;
    const long double q = 1.0L / (std::numbers::e_v<long double> * (k - 1));
    return clamp01(phi_k_ld(k, q, t));
}

RateBounds rate_bounds(double beta) {
    if (!(beta > 0.0 && beta <= 1.0)) throw std::domain_error("beta must lie in (0,1]");
    constexpr double e_ln2 = std::numbers::e * std::numbers::ln2;
    RateBounds rb;
    rb.capacity_upper = 1.0;
    rb.comp_lower = beta / e_ln2;
    const double dd_ratio = beta >= 1.0 ? 1.0 : std::min(1.0, beta / (1.0 - beta));
    rb.dd_lower = dd_ratio / e_ln2;
    rb.sss_upper = beta >= 1.0 ? 1.0 : std::min(1.0, beta / ((1.0 - beta) * e_ln2));
    rb.k_beta = std::max(beta, 1.0 - beta);
    return rb;
}

double beta_star() {
    constexpr double e_ln2 = std::numbers::e * std::numbers::ln2;
    return e_ln2 / (1.0 + e_ln2);
}

double beta_eff(int n, int k) {
    if (n < 2) throw std::domain_error("beta_eff requires n >= 2");
    if (k < 1 || k > n) throw std::domain_error("beta_eff requires 1 <= k <= n");
    return 1.0 - std::log(static_cast<double>(k)) / std::log(static_cast<double>(n));
}

PhaseThresholds phase_transition_thresholds(int k, double delta_prime) {
    if (k < 3) throw std::domain_error("phase thresholds require k >= 3");
    if (!(delta_prime > 0.0)) throw std::domain_error("delta_prime must be positive");
    const long double log_k = std::log(static_cast<long double>(k));
    const long double e = std::numbers::e_v<long double>;
    PhaseThresholds th;
    th.t_success = static_cast<int>(std::ceil(e * (1.0L + delta_prime) * (k - 1) * log_k));
    th.t_fail = static_cast<int>(std::floor((e * (k - 1) - 1.0L) * log_k));
    return th;
}

double log_binom(int n, int k) { return static_cast<double>(log_binom_ld(n, k)); }

int stability_warning_count() { return g_stability_warnings.load(); }

void reset_stability_warnings() { g_stability_warnings.store(0); }

}  // namespace gt
