#include "grouptest/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "grouptest/rng.hpp"

namespace gt {
namespace {

void validate_config(const SweepConfig& cfg) {
    if (cfg.n_items < 1) throw std::invalid_argument("n_items must be positive");
    if (cfg.n_defectives < 0 || cfg.n_defectives > cfg.n_items)
        throw std::invalid_argument("n_defectives must lie in [0, n_items]");
    if (!(cfg.inclusion_prob > 0.0 && cfg.inclusion_prob < 1.0))
        throw std::invalid_argument("inclusion_prob must lie strictly inside (0,1)");
    if (cfg.trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (cfg.t_values.empty()) throw std::invalid_argument("t_values must be non-empty");
    for (int t : cfg.t_values)
        if (t < 0) throw std::invalid_argument("t_values must be non-negative");
    if (cfg.algorithms.empty() || cfg.algorithms.size() > 4)
        throw std::invalid_argument("algorithms must name between 1 and 4 decoders");
    for (std::size_t i = 0; i < cfg.algorithms.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.algorithms.size(); ++j)
            if (cfg.algorithms[i] == cfg.algorithms[j])
                throw std::invalid_argument("algorithms must be distinct");
    if (cfg.sss_options.node_limit < 1)
        throw std::invalid_argument("node_limit must be at least 1");
}

// Stream tags: separate substreams for the defective draw and the matrix so
// neither consumes the other's randomness.
constexpr std::uint64_t kStreamDefectives = 0;
constexpr std::uint64_t kStreamMatrix = 1;

}  // namespace

TrialOutcome run_trial(const SweepConfig& config, int t, int trial_index) {
    const auto ut = static_cast<std::uint64_t>(t);
    const auto utrial = static_cast<std::uint64_t>(trial_index);

    Rng defective_rng(mix_seed({config.seed, ut, utrial, kStreamDefectives}));
    const ItemSet truth(defective_rng.sample_items(config.n_items, config.n_defectives));

    DesignParams dp;
    dp.n_items = config.n_items;
    dp.n_tests = t;
    dp.inclusion_prob = config.inclusion_prob;
    dp.seed = mix_seed({config.seed, ut, utrial, kStreamMatrix});
    const TestMatrix x = generate_bernoulli_design(dp);
    const OutcomeVector y = compute_outcomes(x, truth);

    TrialOutcome out;
    for (std::size_t i = 0; i < config.algorithms.size(); ++i) {
        const Algorithm alg = config.algorithms[i];
        if (alg == Algorithm::Sss) {
            try {
                const DecodeOutput d = sss_decode(x, y, config.sss_options);
                out.status[i] = d.estimate == truth ? TrialStatus::Success : TrialStatus::Failure;
            } catch (const SssBudgetExhausted&) {
                out.status[i] = TrialStatus::BudgetExhausted;
            }
        } else {
            const DecodeOutput d = run_decoder(alg, x, y);
            out.status[i] = d.estimate == truth ? TrialStatus::Success : TrialStatus::Failure;
        }
    }
    return out;
}

SweepResult run_sweep(const SweepConfig& config, int workers) {
    validate_config(config);
    if (workers < 1) workers = 1;

    const std::size_t n_t = config.t_values.size();
    const std::size_t trials = static_cast<std::size_t>(config.trials);
    const std::size_t jobs = n_t * trials;
    std::vector<TrialOutcome> slots(jobs);

    auto run_job = [&](std::size_t job) {
        const std::size_t ti = job / trials;
        const std::size_t trial = job % trials;
        slots[job] = run_trial(config, config.t_values[ti], static_cast<int>(trial));
    };

    if (workers == 1 || jobs == 1) {
        for (std::size_t job = 0; job < jobs; ++job) run_job(job);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto worker_loop = [&]() {
            while (true) {
                const std::size_t job = next.fetch_add(1);
                if (job >= jobs) return;
                try {
                    run_job(job);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        const int extra = std::min<int>(workers, static_cast<int>(jobs)) - 1;
        pool.reserve(extra);
        for (int w = 0; w < extra; ++w) pool.emplace_back(worker_loop);
        worker_loop();
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    SweepResult result;
    result.rows.reserve(n_t * config.algorithms.size());
    for (std::size_t ti = 0; ti < n_t; ++ti) {
        for (std::size_t ai = 0; ai < config.algorithms.size(); ++ai) {
            long long successes = 0;
            long long exhausted = 0;
            for (std::size_t trial = 0; trial < trials; ++trial) {
                switch (slots[ti * trials + trial].status[ai]) {
                    case TrialStatus::Success: ++successes; break;
                    case TrialStatus::BudgetExhausted: ++exhausted; break;
                    case TrialStatus::Failure: break;
                }
            }
            if (exhausted * 100 > config.trials)
                throw SweepAborted("sweep aborted at T=" + std::to_string(config.t_values[ti]) +
                                   ": " + std::to_string(exhausted) + " of " +
                                   std::to_string(config.trials) +
                                   " SSS trials exhausted the node budget (>1%)");
            SweepRow row;
            row.t = config.t_values[ti];
            row.algorithm = config.algorithms[ai];
            row.trials = config.trials - exhausted;
            row.successes = successes;
            row.budget_exhausted = exhausted;
            if (row.trials > 0) {
                row.success_rate =
                    static_cast<double>(successes) / static_cast<double>(row.trials);
                row.std_err = std::sqrt(row.success_rate * (1.0 - row.success_rate) /
                                        static_cast<double>(row.trials));
            }
            result.rows.push_back(row);
        }
    }
    return result;
}

}  // namespace gt
