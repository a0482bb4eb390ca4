#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "grouptest/core.hpp"

namespace gt {

enum class Algorithm { Comp, Dd, Scomp, Sss };

const char* algorithm_name(Algorithm a);

// Parses "COMP" / "DD" / "SCOMP" / "SSS" (case-insensitive).
// Throws std::invalid_argument on anything else.
Algorithm parse_algorithm(const std::string& name);

// Result of running one decoder. Every decoder fills pd_set/dd_set since
// they fall out of the same scan; `estimate` is the algorithm's answer.
struct DecodeOutput {
    ItemSet estimate;
    ItemSet pd_set;  // items not appearing in any negative test
    ItemSet dd_set;  // items alone (within pd_set) in some positive test
    std::map<std::string, long long> stats;
};

// Knobs for the minimum-satisfying-set search. Ties between equal-size
// minima are always broken lexicographically; that is not configurable,
// so reruns and the test suite see one canonical answer.
struct SssOptions {
    bool use_dd_preprocessing = true;  // fix definite defectives, shrink the cover problem
    std::optional<int> known_k;        // demand a satisfying set of exactly this size
    long long node_limit = 10'000'000; // search nodes before giving up
};

// The search ran out of nodes. Deliberately an error rather than a
// best-effort answer: a truncated search could return a non-minimal set
// and silently skew any comparison built on top of it.
class SssBudgetExhausted : public std::runtime_error {
public:
    explicit SssBudgetExhausted(long long nodes);
    long long nodes;
};

// No satisfying set exists (inconsistent outcomes), or none of the size
// requested via known_k.
class SssInfeasible : public std::runtime_error {
public:
    explicit SssInfeasible(const std::string& what);
};

// COMP: declare every possible defective. estimate = pd_set.
DecodeOutput comp_decode(const TestMatrix& x, const OutcomeVector& y);

// DD: declare only definite defectives. estimate = dd_set; never contains
// a non-defective when y really came from some defective set.
DecodeOutput dd_decode(const TestMatrix& x, const OutcomeVector& y);

// SCOMP: greedily extend the DD estimate until every positive test is
// explained, always adding the possible defective covering the most
// still-unexplained tests (ties to the lowest index). If the outcomes are
// inconsistent (some positive test has no possible-defective member) the
// greedy loop stops early and the estimate is not satisfying.
DecodeOutput scomp_decode(const TestMatrix& x, const OutcomeVector& y);

// SSS: exact minimum-cardinality satisfying set via branch-and-bound over
// the possible defectives (no other item can appear in any satisfying
// set). Returns the lexicographically smallest minimum; with known_k, the
// lexicographically smallest satisfying set of exactly that size.
// Throws SssInfeasible / SssBudgetExhausted.
DecodeOutput sss_decode(const TestMatrix& x, const OutcomeVector& y,
                        const SssOptions& opts = {});

DecodeOutput run_decoder(Algorithm a, const TestMatrix& x, const OutcomeVector& y,
                         const SssOptions& sss_opts = {});

// Harmonic number H(n) = 1 + 1/2 + ... + 1/n. The greedy set-cover bound
// says |SCOMP estimate| <= H(#positive tests) * |minimum satisfying set|.
double harmonic(int n);

}  // namespace gt
