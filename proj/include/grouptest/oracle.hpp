#pragma once

#include <gmpxx.h>

#include <vector>

#include "grouptest/core.hpp"
#include "grouptest/decoders.hpp"

// Brute-force ground truth at tiny scale, kept deliberately naive and in
// exact rational arithmetic so disagreements with the fast implementations
// point at real formula bugs rather than float noise.
namespace gt::oracle {

using Rational = mpq_class;  // canonical form: positive denominator, lowest terms

// Every S with compute_outcomes(x, S) == y, sorted by size then
// lexicographically. Scans all 2^N subsets; refuses N > 20 or T > 32.
std::vector<ItemSet> enumerate_satisfying(const TestMatrix& x, const OutcomeVector& y);

// Exact success probability of a decoder on fixed (n, defectives, t) under a
// Bernoulli(p) design, by enumerating all 2^(n*t) matrices. Refuses n*t > 16.
Rational exact_success_by_exhaustion(int n, const ItemSet& k_set, int t, const Rational& p,
                                     Algorithm algorithm);

// P(all k slots marked in m rounds) by enumerating every assignment of the m
// rounds to k+1 classes with probabilities (q,...,q, 1-kq). Refuses k > 4 or
// m > 8. Equals phi_k(k,q,m) by inclusion-exclusion.
Rational mask_probability_oracle(int k, const Rational& q, int m);

// The inclusion-exclusion sum itself in exact arithmetic (any k, m).
Rational phi_k_rational(int k, const Rational& q, int t);

// The DD success formula (sum over negative-test and intruder counts)
// evaluated in exact arithmetic; must equal exact_success_by_exhaustion(DD).
Rational dd_success_exact_rational(int n, int k, int t, const Rational& p);

}  // namespace gt::oracle
