#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "grouptest/core.hpp"
#include "grouptest/decoders.hpp"

namespace gt {

// One Monte Carlo experiment: for each T in t_values, run `trials`
// independent (defective set, matrix) draws and score every requested
// decoder on the same instance.
struct SweepConfig {
    int n_items = 500;
    int n_defectives = 10;
    double inclusion_prob = 0.1;
    std::vector<int> t_values;
    int trials = 1000;
    std::uint64_t seed = 1;
    std::vector<Algorithm> algorithms = {Algorithm::Comp, Algorithm::Dd, Algorithm::Scomp,
                                         Algorithm::Sss};
    SssOptions sss_options;
};

enum class TrialStatus : unsigned char {
    Success,          // estimate matched the drawn defective set exactly
    Failure,          // clean decode, wrong answer
    BudgetExhausted,  // SSS ran out of nodes; never counted as success
};

// Slot i corresponds to config.algorithms[i].
struct TrialOutcome {
    std::array<TrialStatus, 4> status{};
};

struct SweepRow {
    int t = 0;
    Algorithm algorithm{};
    long long trials = 0;  // denominator: attempted minus budget-exhausted
    long long successes = 0;
    double success_rate = 0.0;
    double std_err = 0.0;  // sqrt(r(1-r)/trials)
    long long budget_exhausted = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // grouped by t in t_values order, algorithms in config order
};

// Raised when more than 1% of a sweep point's SSS trials hit the node
// budget: the remaining sample would misrepresent the algorithm.
class SweepAborted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Runs one trial. All randomness comes from (config.seed, t, trial_index),
// so any schedule of calls reproduces the same outcome.
TrialOutcome run_trial(const SweepConfig& config, int t, int trial_index);

// Runs the whole grid, optionally on several worker threads. The result is
// identical for every worker count: trials land in preassigned slots and
// are reduced in a fixed order.
SweepResult run_sweep(const SweepConfig& config, int workers = 1);

}  // namespace gt
