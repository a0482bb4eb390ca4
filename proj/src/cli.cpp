#include "grouptest/cli.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "grouptest/analytics.hpp"
#include "grouptest/core.hpp"
#include "grouptest/decoders.hpp"
#include "grouptest/simulator.hpp"

namespace gt {
namespace {

// Bad user input (unreadable files, malformed instances, missing data) as
// opposed to a failure while computing; the two map to different exit codes.
struct UsageFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Locale-independent, 6 significant digits; used for every CSV number so
// replays are byte-identical.
std::string fmt6(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

std::string join_items(const ItemSet& s) {
    std::string out;
    for (int item : s.members()) {
        if (!out.empty()) out += ' ';
        out += std::to_string(item);
    }
    return out;
}

// "-" (or nothing) means stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw UsageFailure("cannot open output file: " + path);
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_ = &std::cout;
};

std::vector<int> t_grid(int tmin, int tmax, int tstep) {
    if (tmin < 0) throw UsageFailure("--Tmin must be non-negative");
    if (tmax < tmin) throw UsageFailure("--Tmax must be at least --Tmin");
    if (tstep < 1) throw UsageFailure("--Tstep must be positive");
    std::vector<int> ts;
    for (int t = tmin; t <= tmax; t += tstep) ts.push_back(t);
    return ts;
}

double default_p(double p, int k) {
    if (p >= 0.0) return p;
    if (k < 1) throw UsageFailure("--p is required when K = 0");
    return 1.0 / k;
}

struct SimulateOpts {
    int n = 500;
    int k = 10;
    double p = -1.0;  // sentinel: 1/K
    int tmin = 50, tmax = 250, tstep = 10;
    int trials = 1000;
    std::uint64_t seed = 1;
    std::vector<std::string> algorithms{"COMP", "DD", "SCOMP", "SSS"};
    long long node_limit = 10'000'000;
    int workers = 1;
    std::string out = "-";
};

int cmd_simulate(const SimulateOpts& o) {
    SweepConfig cfg;
    cfg.n_items = o.n;
    cfg.n_defectives = o.k;
    cfg.inclusion_prob = default_p(o.p, o.k);
    cfg.t_values = t_grid(o.tmin, o.tmax, o.tstep);
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    cfg.algorithms.clear();
    for (const std::string& name : o.algorithms) cfg.algorithms.push_back(parse_algorithm(name));
    cfg.sss_options.node_limit = o.node_limit;

    const SweepResult result = run_sweep(cfg, o.workers);

    Output out(o.out);
    out.stream() << "T,algorithm,trials,successes,success_rate,stderr,budget_exhausted\n";
    for (const SweepRow& r : result.rows)
        out.stream() << r.t << ',' << algorithm_name(r.algorithm) << ',' << r.trials << ','
                     << r.successes << ',' << fmt6(r.success_rate) << ',' << fmt6(r.std_err)
                     << ',' << r.budget_exhausted << '\n';
    return 0;
}

struct BoundsOpts {
    int n = 500;
    int k = 10;
    double p = -1.0;
    int tmin = 50, tmax = 250, tstep = 10;
    std::string out = "-";
};

int cmd_bounds(const BoundsOpts& o) {
    const double p = default_p(o.p, o.k);
    Output out(o.out);
    out.stream() << "T,info_bound,comp_lower,dd_exact,dd_lower,sss_lower,sss_upper\n";
    for (int t : t_grid(o.tmin, o.tmax, o.tstep)) {
        InstanceParams pr;
        pr.n_items = o.n;
        pr.n_defectives = o.k;
        pr.inclusion_prob = p;
        pr.n_tests = t;
        const double sss_low = o.k == 0 ? 1.0 : sss_success_lower(pr);
        out.stream() << t << ',' << fmt6(info_bound(o.n, o.k, t)) << ','
                     << fmt6(comp_success_lower(pr)) << ',' << fmt6(dd_success_exact(pr)) << ','
                     << fmt6(dd_success_lower(pr)) << ',' << fmt6(sss_low) << ','
                     << fmt6(sss_success_upper(o.k, t)) << '\n';
    }
    return 0;
}

struct RatesOpts {
    double beta_min = 0.05;
    double beta_max = 1.0;
    double step = 0.05;
    std::string out = "-";
};

int cmd_rates(const RatesOpts& o) {
    if (!(o.beta_min > 0.0 && o.beta_min <= o.beta_max && o.beta_max <= 1.0))
        throw UsageFailure("need 0 < --beta-min <= --beta-max <= 1");
    if (!(o.step > 0.0)) throw UsageFailure("--step must be positive");
    Output out(o.out);
    out.stream() << "beta,capacity,comp_lower,dd_lower,sss_upper,k_beta\n";
    for (int i = 0;; ++i) {
        double beta = o.beta_min + i * o.step;
        if (beta > o.beta_max + 1e-12) break;
        beta = std::min(beta, o.beta_max);  // tame accumulated float drift
        const RateBounds rb = rate_bounds(beta);
        out.stream() << fmt6(beta) << ',' << fmt6(rb.capacity_upper) << ','
                     << fmt6(rb.comp_lower) << ',' << fmt6(rb.dd_lower) << ','
                     << fmt6(rb.sss_upper) << ',' << fmt6(rb.k_beta) << '\n';
    }
    out.stream() << "# beta_star = " << fmt6(beta_star()) << '\n';
    return 0;
}

struct DecodeOpts {
    std::string file;
    std::string algorithm;
    long long node_limit = 10'000'000;
    int known_k = -1;  // sentinel: not constrained
    bool no_dd_preprocessing = false;
};

int cmd_decode(const DecodeOpts& o) {
    Instance inst = [&] {
        try {
            return read_instance_file(o.file);
        } catch (const std::exception& e) {
            throw UsageFailure(e.what());
        }
    }();
    const Algorithm alg = parse_algorithm(o.algorithm);

    OutcomeVector y;
    if (inst.outcomes)
        y = *inst.outcomes;
    else if (inst.defectives)
        y = compute_outcomes(inst.matrix, *inst.defectives);
    else
        throw UsageFailure("instance file provides neither outcomes nor a defective set");

    SssOptions opts;
    opts.node_limit = o.node_limit;
    opts.use_dd_preprocessing = !o.no_dd_preprocessing;
    if (o.known_k >= 0) opts.known_k = o.known_k;

    const DecodeOutput d = run_decoder(alg, inst.matrix, y, opts);
    std::cout << "algorithm: " << algorithm_name(alg) << '\n';
    std::cout << "estimate: " << join_items(d.estimate) << '\n';
    std::cout << "pd: " << join_items(d.pd_set) << '\n';
    std::cout << "dd: " << join_items(d.dd_set) << '\n';
    std::cout << "satisfying: " << (is_satisfying(inst.matrix, y, d.estimate) ? "yes" : "no")
              << '\n';
    if (inst.defectives) {
        std::cout << "truth: " << join_items(*inst.defectives) << '\n';
        std::cout << "success: " << (d.estimate == *inst.defectives ? "yes" : "no") << '\n';
    }
    return 0;
}

struct CheckDesignOpts {
    std::string file;
    int k = 1;
};

int cmd_check_design(const CheckDesignOpts& o) {
    Instance inst = [&] {
        try {
            return read_instance_file(o.file);
        } catch (const std::exception& e) {
            throw UsageFailure(e.what());
        }
    }();
    std::cout << "disjunct: " << (is_k_disjunct(inst.matrix, o.k) ? "yes" : "no") << '\n';
    std::cout << "separable: " << (is_k_separable(inst.matrix, o.k) ? "yes" : "no") << '\n';
    return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"group-testing laboratory: decoders, closed-form bounds, Monte Carlo sweeps"};
    app.require_subcommand(1);

    SimulateOpts sim;
    auto* c_sim = app.add_subcommand("simulate", "Monte Carlo success-rate sweep over T");
    c_sim->add_option("--N", sim.n, "number of items")->capture_default_str();
    c_sim->add_option("--K", sim.k, "number of defectives")->capture_default_str();
    c_sim->add_option("--p", sim.p, "inclusion probability (default 1/K)");
    c_sim->add_option("--Tmin", sim.tmin, "smallest test count")->capture_default_str();
    c_sim->add_option("--Tmax", sim.tmax, "largest test count")->capture_default_str();
    c_sim->add_option("--Tstep", sim.tstep, "test-count step")->capture_default_str();
    c_sim->add_option("--trials", sim.trials, "trials per test count")->capture_default_str();
    c_sim->add_option("--seed", sim.seed, "sweep seed")->capture_default_str();
    c_sim->add_option("--algorithms", sim.algorithms, "comma-separated decoder list")
        ->delimiter(',')
        ->capture_default_str();
    c_sim->add_option("--node-limit", sim.node_limit, "SSS node budget per trial")
        ->capture_default_str();
    c_sim->add_option("--workers", sim.workers, "worker threads")->capture_default_str();
    c_sim->add_option("--out", sim.out, "output CSV path, - for stdout")->capture_default_str();

    BoundsOpts bnd;
    auto* c_bnd = app.add_subcommand("bounds", "closed-form success-probability bounds over T");
    c_bnd->add_option("--N", bnd.n, "number of items")->capture_default_str();
    c_bnd->add_option("--K", bnd.k, "number of defectives")->capture_default_str();
    c_bnd->add_option("--p", bnd.p, "inclusion probability (default 1/K)");
    c_bnd->add_option("--Tmin", bnd.tmin, "smallest test count")->capture_default_str();
    c_bnd->add_option("--Tmax", bnd.tmax, "largest test count")->capture_default_str();
    c_bnd->add_option("--Tstep", bnd.tstep, "test-count step")->capture_default_str();
    c_bnd->add_option("--out", bnd.out, "output CSV path, - for stdout")->capture_default_str();

    RatesOpts rts;
    auto* c_rts = app.add_subcommand("rates", "asymptotic rate bounds over sparsity beta");
    c_rts->add_option("--beta-min,--beta_min", rts.beta_min, "grid start")->capture_default_str();
    c_rts->add_option("--beta-max,--beta_max", rts.beta_max, "grid end")->capture_default_str();
    c_rts->add_option("--step", rts.step, "grid step")->capture_default_str();
    c_rts->add_option("--out", rts.out, "output CSV path, - for stdout")->capture_default_str();

    DecodeOpts dec;
    auto* c_dec = app.add_subcommand("decode", "run one decoder on an instance file");
    c_dec->add_option("file", dec.file, "instance file")->required();
    c_dec->add_option("--algorithm", dec.algorithm, "COMP, DD, SCOMP, or SSS")->required();
    c_dec->add_option("--node-limit", dec.node_limit, "SSS node budget")->capture_default_str();
    c_dec->add_option("--known-k", dec.known_k, "force an SSS answer of exactly this size");
    c_dec->add_flag("--no-dd-preprocessing", dec.no_dd_preprocessing,
                    "solve SSS without fixing definite defectives first");

    CheckDesignOpts chk;
    auto* c_chk = app.add_subcommand("check-design", "report disjunctness/separability");
    c_chk->add_option("file", chk.file, "instance file")->required();
    c_chk->add_option("--k", chk.k, "defective-set size to certify")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*c_sim) return cmd_simulate(sim);
        if (*c_bnd) return cmd_bounds(bnd);
        if (*c_rts) return cmd_rates(rts);
        if (*c_dec) return cmd_decode(dec);
        if (*c_chk) return cmd_check_design(chk);
        return 1;
    } catch (const UsageFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const SweepAborted& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const SssBudgetExhausted& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const SssInfeasible& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace gt
