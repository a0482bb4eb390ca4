#pragma once

namespace gt {

// Parameters of one testing setup: N items, K defective, T tests, each item
// placed in each test independently with probability p.
struct InstanceParams {
    int n_items = 0;              // N
    int n_defectives = 0;         // K
    double inclusion_prob = 0.0;  // p, must lie strictly inside (0,1)
    int n_tests = 0;              // T
};

// A point on a rate curve in the sparse regime K = N^(1-beta).
struct SparsityPoint {
    double beta = 0.0;
    double value = 0.0;
};

// Asymptotic rate bounds at a given sparsity parameter, in bits per test.
struct RateBounds {
    double capacity_upper;  // 1 for any beta
    double comp_lower;      // achievable by COMP
    double dd_lower;        // achievable by DD
    double sss_upper;       // ceiling for SSS under any Bernoulli design
    double k_beta;          // max{beta, 1-beta}: DD/SSS-gap factor
};

struct PhaseThresholds {
    int t_success;  // tests at which the masking probability is provably high
    int t_fail;     // tests at which it is provably at most 2/3
};

// phi_k(k,q,t) = sum_{l=0}^{k} (-1)^l C(k,l) (1-lq)^t, the probability that t
// rounds, each marking one of k slots with probability q per slot (or no slot
// at all), mark every slot at least once. Requires 0 <= k*q <= 1.
//
// Numerics: exactly 0 for t < k; terms carry exact 64-bit binomials for
// k <= 64 (log-gamma magnitudes with sign tracking beyond) and are folded
// with compensated summation in extended precision. Absolute error grows
// like 2^k * machine-eps, so results are trustworthy for k <= 64 and, past
// that, whenever t is large enough that the alternating tail has decayed
// (the only regime larger k is used in here).
double phi_k(int k, double q, int t);

// Exact success probability of DD under a Bernoulli(p) design: sums over the
// number of negative tests and the count of non-defectives hiding from all
// of them, with phi_k giving the chance every defective still owns a test.
double dd_success_exact(const InstanceParams& params);

// Closed-form lower bound for the same quantity (cheaper, always <= exact).
double dd_success_lower(const InstanceParams& params);

// max{0, 1 - (N-K)(1 - p(1-p)^K)^T}: COMP succeeds unless some non-defective
// dodges every negative test.
double comp_success_lower(const InstanceParams& params);

// Counting bound for any decoder: min{1, 2^t / C(n,k)}.
double info_bound(int n, int k, int t);

// Lower bound on SSS success from two failure modes: a defective swappable
// for "nothing", or a defective subset swappable for a same-size disjoint
// non-defective subset, yielding another satisfying set at most as large.
double sss_success_lower(const InstanceParams& params);

// Upper bound on SSS success for k >= 2: phi_k evaluated at the adversarial
// inclusion probability 1/(e(k-1)). For k <= 1 the bound degenerates and we
// return the vacuous 1.
double sss_success_upper(int k, int t);

// Rate bounds as functions of beta alone (K = N^(1-beta), N -> infinity).
RateBounds rate_bounds(double beta);

// Sparsity threshold below which the SSS ceiling pinches off capacity:
// e ln2 / (1 + e ln2), roughly 0.653.
double beta_star();

// Effective sparsity of a finite instance: 1 - ln k / ln n.
double beta_eff(int n, int k);

// Test counts bracketing the success/failure phase transition of
// phi_k(k, 1/(e(k-1)), t): above t_success the value is >= 1 - k^(-delta'),
// at or below t_fail it is <= 2/3. Requires k >= 3.
PhaseThresholds phase_transition_thresholds(int k, double delta_prime);

// ln C(n,k) via log-gamma; satisfies k ln(n/k) <= log_binom <= k ln(ne/k).
double log_binom(int n, int k);

// Probability outputs are clamped to [0,1]; a clamp that moves a value by
// more than 1e-6 is counted here instead of being silently absorbed.
int stability_warning_count();
void reset_stability_warnings();

}  // namespace gt
