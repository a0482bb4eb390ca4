#include "grouptest/decoders.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <vector>

namespace gt {
namespace {

struct ItemScreen {
    BitVec pd;                        // possible defectives, 0-based bit per item
    BitVec dd;                        // definite defectives
    std::vector<int> positive_tests;  // 0-based ids of tests with outcome 1
};

// One pass over the matrix: an item is ND if it sits in any negative test,
// PD otherwise; a PD item alone among PD in some positive test is DD.
ItemScreen screen_items(const TestMatrix& x, const OutcomeVector& y) {
    if (y.size() != static_cast<std::size_t>(x.n_tests()))
        throw std::invalid_argument("outcome vector length does not match test count");
    const std::size_t n = x.n_items();
    BitVec nd(n);
    ItemScreen s;
    s.pd = BitVec(n);
    s.dd = BitVec(n);
    for (int t = 0; t < x.n_tests(); ++t) {
        if (y.test(t))
            s.positive_tests.push_back(t);
        else
            nd |= x.row(t);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!nd.test(i)) s.pd.set(i);
    for (int t : s.positive_tests) {
        BitVec hits = x.row(t);
        hits &= s.pd;
        if (hits.count() == 1) s.dd.set(hits.find_first());
    }
    return s;
}

}  // namespace

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Comp: return "COMP";
        case Algorithm::Dd: return "DD";
        case Algorithm::Scomp: return "SCOMP";
        case Algorithm::Sss: return "SSS";
    }
    return "?";
}

Algorithm parse_algorithm(const std::string& name) {
    std::string up;
    for (char c : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (up == "COMP") return Algorithm::Comp;
    if (up == "DD") return Algorithm::Dd;
    if (up == "SCOMP") return Algorithm::Scomp;
    if (up == "SSS") return Algorithm::Sss;
    throw std::invalid_argument("unknown algorithm: " + name);
}

SssBudgetExhausted::SssBudgetExhausted(long long nodes_)
    : std::runtime_error("search budget exhausted after " + std::to_string(nodes_) + " nodes"),
      nodes(nodes_) {}

SssInfeasible::SssInfeasible(const std::string& what) : std::runtime_error(what) {}

DecodeOutput comp_decode(const TestMatrix& x, const OutcomeVector& y) {
    const ItemScreen s = screen_items(x, y);
    DecodeOutput out;
    out.pd_set = ItemSet::from_mask(s.pd);
    out.dd_set = ItemSet::from_mask(s.dd);
    out.estimate = out.pd_set;
    return out;
}

DecodeOutput dd_decode(const TestMatrix& x, const OutcomeVector& y) {
    const ItemScreen s = screen_items(x, y);
    DecodeOutput out;
    out.pd_set = ItemSet::from_mask(s.pd);
    out.dd_set = ItemSet::from_mask(s.dd);
    out.estimate = out.dd_set;
    return out;
}

DecodeOutput scomp_decode(const TestMatrix& x, const OutcomeVector& y) {
    const ItemScreen s = screen_items(x, y);
    DecodeOutput out;
    out.pd_set = ItemSet::from_mask(s.pd);
    out.dd_set = ItemSet::from_mask(s.dd);

    BitVec chosen = s.dd;
    BitVec unexplained(x.n_tests());
    for (int t : s.positive_tests)
        if (!x.row(t).intersects(chosen)) unexplained.set(t);

    long long steps = 0;
    while (unexplained.any()) {
        int best = -1;
        std::size_t best_cover = 0;
        s.pd.for_each_set([&](std::size_t i) {
            if (chosen.test(i)) return;
            const std::size_t c = x.column(static_cast<int>(i) + 1).count_and(unexplained);
            if (c > best_cover) {  // strict: first (lowest-index) winner kept on ties
                best_cover = c;
                best = static_cast<int>(i);
            }
        });
        if (best < 0) break;  // inconsistent outcomes: nothing can explain the rest
        chosen.set(best);
        unexplained.and_not(x.column(best + 1));
        ++steps;
    }
    out.estimate = ItemSet::from_mask(chosen);
    out.stats["greedy_steps"] = steps;
    return out;
}

DecodeOutput sss_decode(const TestMatrix& x, const OutcomeVector& y, const SssOptions& opts) {
    if (opts.node_limit < 1) throw std::invalid_argument("node_limit must be at least 1");
    if (opts.known_k && *opts.known_k < 0) throw std::invalid_argument("known_k must be non-negative");

    const ItemScreen s = screen_items(x, y);
    DecodeOutput out;
    out.pd_set = ItemSet::from_mask(s.pd);
    out.dd_set = ItemSet::from_mask(s.dd);

    // Any satisfying set lives inside PD (anything else trips a negative
    // test), and any satisfying set contains every DD item (each has a
    // positive test only it can explain). So fixing DD and restricting the
    // search to PD \ DD loses nothing; it only shrinks the cover problem.
    const std::size_t n = x.n_items();
    BitVec forced(n);
    if (opts.use_dd_preprocessing) forced = s.dd;

    // Unit propagation to a fixed point: a positive test explainable by
    // exactly one remaining item pins that item into every satisfying set,
    // which may leave further tests with a single explainer. A test nothing
    // can explain means the outcomes admit no satisfying set at all.
    BitVec selectable = s.pd;
    selectable.and_not(forced);
    std::vector<int> open;  // positive tests not already explained by `forced`
    for (bool changed = true; changed;) {
        changed = false;
        open.clear();
        for (int t : s.positive_tests) {
            if (x.row(t).intersects(forced)) continue;
            BitVec hits = x.row(t);
            hits &= selectable;
            const std::size_t c = hits.count();
            if (c == 0) throw SssInfeasible("outcomes admit no satisfying set");
            if (c == 1) {
                forced.set(hits.find_first());
                selectable.and_not(hits);
                changed = true;
            } else {
                open.push_back(t);
            }
        }
    }

    std::vector<int> cand;  // selectable items, ascending 0-based ids
    selectable.for_each_set([&](std::size_t i) { cand.push_back(static_cast<int>(i)); });

    const int nc = static_cast<int>(cand.size());
    const int nt = static_cast<int>(open.size());
    out.stats["reduced_items"] = nc;
    out.stats["reduced_tests"] = nt;

    std::vector<BitVec> cover(nc, BitVec(nt));   // open tests each candidate explains
    std::vector<std::vector<int>> coverers(nt);  // candidates able to explain each open test
    for (int u = 0; u < nt; ++u) {
        const BitVec& row = x.row(open[u]);
        for (int j = 0; j < nc; ++j)
            if (row.test(cand[j])) {
                cover[j].set(u);
                coverers[u].push_back(j);
            }
    }
    long long nodes = 0;
    auto charge_node = [&]() {
        if (++nodes > opts.node_limit) throw SssBudgetExhausted(opts.node_limit);
    };

    // Lower bound: greedily pick open tests that pairwise share no candidate;
    // each picked test needs its own item, whatever the cover looks like.
    // closure[u] = all tests reachable from u through one shared candidate.
    std::vector<BitVec> closure(nt, BitVec(nt));
    for (int u = 0; u < nt; ++u)
        for (int j : coverers[u]) closure[u] |= cover[j];
    const BitVec zero_open(nt);
    BitVec lb_scratch(nt);
    auto disjoint_lb = [&](const BitVec& unc) {
        lb_scratch = zero_open;
        int lb = 0;
        unc.for_each_set([&](std::size_t u) {
            if (!lb_scratch.test(u)) {
                ++lb;
                lb_scratch |= closure[u];
            }
        });
        return lb;
    };
    // Second lower bound: if no usable candidate explains more than c_max of
    // the uncovered tests, at least ceil(|unc| / c_max) items are needed.
    const int kUnreachable = nt + 1;
    auto density_lb = [&](const BitVec& unc, int first, const BitVec* ban) {
        std::size_t cmax = 0;
        for (int j = first; j < nc; ++j) {
            if (ban && ban->test(j)) continue;
            cmax = std::max(cmax, cover[j].count_and(unc));
        }
        if (cmax == 0) return kUnreachable;
        return static_cast<int>((unc.count() + cmax - 1) / cmax);
    };

    BitVec all_open(nt);
    for (int u = 0; u < nt; ++u) all_open.set(u);

    // Greedy cover (the scomp rule on the reduced problem) for an upper bound.
    int incumbent = 0;
    {
        BitVec unc = all_open;
        while (unc.any()) {
            int best = -1;
            std::size_t best_cover = 0;
            for (int j = 0; j < nc; ++j) {
                const std::size_t c = cover[j].count_and(unc);
                if (c > best_cover) {
                    best_cover = c;
                    best = j;
                }
            }
            unc.and_not(cover[best]);
            ++incumbent;
        }
    }

    // Minimum cover size by branch and bound, needed both as the answer size
    // and to rule on a requested known_k (explained sets are closed upward
    // inside PD, so exactly the sizes min..nc are feasible).
    int min_size = 0;
    if (nt > 0) {
        // A candidate explaining a subset of what another explains can always
        // be swapped out without growing the cover; drop it from this search
        // (only here — the lexicographic phase must still see every item).
        BitVec dominated(nc);
        for (int a = 0; a < nc; ++a)
            for (int b = 0; b < nc; ++b) {
                if (b == a) continue;
                if (cover[a].subset_of(cover[b]) && (!cover[b].subset_of(cover[a]) || b < a)) {
                    dominated.set(a);
                    break;
                }
            }

        int best_size = incumbent;
        const int root_lb =
            std::max(disjoint_lb(all_open), density_lb(all_open, 0, &dominated));
        if (root_lb < best_size) {
            // Branch on the uncovered test with the fewest usable explainers:
            // every cover needs one of them. The child that commits to
            // explainer e_i bans e_1..e_{i-1}, so no selection is explored
            // twice. Depth equals the cover size, so the greedy incumbent
            // bounds it.
            std::vector<BitVec> unc_lvl(incumbent + 1, BitVec(nt));
            std::vector<BitVec> ban_lvl(incumbent + 1, BitVec(nc));
            unc_lvl[0] = all_open;
            ban_lvl[0] = dominated;
            std::vector<std::vector<int>> pick_buf(incumbent + 1);
            bool proven = false;

            auto dfs = [&](auto&& self, int count) -> void {
                if (proven) return;
                charge_node();
                const BitVec& unc = unc_lvl[count];
                if (unc.none()) {
                    best_size = count;  // the depth prune makes this a strict improvement
                    proven = best_size == root_lb;
                    return;
                }
                const BitVec& ban = ban_lvl[count];
                if (count + std::max(disjoint_lb(unc), density_lb(unc, 0, &ban)) >= best_size)
                    return;
                int pick = -1;
                int pick_cnt = nc + 1;
                bool dead = false;
                unc.for_each_set([&](std::size_t u) {
                    if (dead || pick_cnt == 1) return;
                    int cnt = 0;
                    for (int j : coverers[u])
                        if (!ban.test(j) && ++cnt >= pick_cnt) break;
                    if (cnt == 0)
                        dead = true;
                    else if (cnt < pick_cnt) {
                        pick_cnt = cnt;
                        pick = static_cast<int>(u);
                    }
                });
                if (dead || pick < 0) return;

                std::vector<int>& options = pick_buf[count];
                options.clear();
                for (int j : coverers[pick])
                    if (!ban.test(j)) options.push_back(j);
                std::sort(options.begin(), options.end(), [&](int a, int b) {
                    return cover[a].count_and(unc) > cover[b].count_and(unc);
                });
                BitVec sibling_ban = ban;
                for (int j : options) {
                    if (proven) return;
                    unc_lvl[count + 1] = unc;
                    unc_lvl[count + 1].and_not(cover[j]);
                    ban_lvl[count + 1] = sibling_ban;
                    self(self, count + 1);
                    sibling_ban.set(j);
                }
            };
            dfs(dfs, 0);
        }
        min_size = best_size;
    }

    // How many candidates the answer uses: dictated by known_k if given.
    int target;
    if (opts.known_k) {
        target = *opts.known_k - static_cast<int>(forced.count());
        if (target < min_size || target > nc) throw SssInfeasible("no satisfying set of that size");
    } else {
        target = min_size;
    }

    const long long min_phase_nodes = nodes;
    charge_node();  // entering the lexicographic phase

    // Lexicographically smallest selection of exactly `target` candidates
    // explaining every open test, built front to back: commit to the smallest
    // candidate whose inclusion still leaves a completion of the right size.
    // A completion needs a cover of the remaining tests by higher-index
    // candidates plus enough of them to pad with — adding PD items never
    // breaks a test, so any cover no larger than the remaining slots works.
    std::vector<BitVec> suffix(nc + 1, BitVec(nt));  // tests coverable from position j on
    for (int j = nc - 1; j >= 0; --j) {
        suffix[j] = suffix[j + 1];
        suffix[j] |= cover[j];
    }

    // Decision search: can tests `unc0` be covered by at most `bound` items
    // of index >= `from`?  Same element branching as the minimum-size phase.
    std::vector<BitVec> q_unc(target + 2, BitVec(nt));
    std::vector<BitVec> q_ban(target + 2, BitVec(nc));
    std::vector<std::vector<int>> q_buf(target + 2);
    const BitVec no_ban(nc);
    auto exists_dfs = [&](auto&& self, int count, int from, int bound) -> bool {
        charge_node();
        const BitVec& unc = q_unc[count];
        if (unc.none()) return true;
        if (count >= bound) return false;
        const BitVec& ban = q_ban[count];
        if (count + std::max(disjoint_lb(unc), density_lb(unc, from, &ban)) > bound) return false;
        int pick = -1;
        int pick_cnt = nc + 1;
        bool dead = false;
        unc.for_each_set([&](std::size_t u) {
            if (dead || pick_cnt == 1) return;
            int cnt = 0;
            for (int j : coverers[u])
                if (j >= from && !ban.test(j) && ++cnt >= pick_cnt) break;
            if (cnt == 0)
                dead = true;
            else if (cnt < pick_cnt) {
                pick_cnt = cnt;
                pick = static_cast<int>(u);
            }
        });
        if (dead || pick < 0) return false;
        std::vector<int>& options = q_buf[count];
        options.clear();
        for (int j : coverers[pick])
            if (j >= from && !ban.test(j)) options.push_back(j);
        std::sort(options.begin(), options.end(), [&](int a, int b) {
            return cover[a].count_and(unc) > cover[b].count_and(unc);
        });
        BitVec sibling_ban = ban;
        for (int j : options) {
            q_unc[count + 1] = unc;
            q_unc[count + 1].and_not(cover[j]);
            q_ban[count + 1] = sibling_ban;
            if (self(self, count + 1, from, bound)) return true;
            sibling_ban.set(j);
        }
        return false;
    };
    auto completion_exists = [&](const BitVec& unc0, int from, int bound) -> bool {
        charge_node();
        if (unc0.none()) return true;
        if (bound <= 0) return false;
        if (!unc0.subset_of(suffix[from])) return false;
        if (std::max(disjoint_lb(unc0), density_lb(unc0, from, nullptr)) > bound) return false;
        BitVec greedy = unc0;  // cheap accept: the greedy cover often fits
        for (int used = 0; used < bound && greedy.any(); ++used) {
            int best = from;
            std::size_t best_cover = 0;
            for (int j = from; j < nc; ++j) {
                const std::size_t c = cover[j].count_and(greedy);
                if (c > best_cover) {
                    best_cover = c;
                    best = j;
                }
            }
            greedy.and_not(cover[best]);
        }
        if (greedy.none()) return true;
        q_unc[0] = unc0;
        q_ban[0] = no_ban;
        return exists_dfs(exists_dfs, 0, from, bound);
    };

    std::vector<int> picked;
    picked.reserve(target);
    BitVec unc = all_open;
    int from = 0;
    int slots = target;
    while (slots > 0) {
        if (unc.none()) {  // pad with the smallest untried candidates
            while (slots > 0) {
                picked.push_back(from++);
                --slots;
            }
            break;
        }
        bool advanced = false;
        // Once one non-contributing candidate is refuted, all later ones are
        // too: they leave the same tests to a strictly smaller suffix.
        bool useless_refuted = false;
        for (int c = from; c < nc && nc - c >= slots; ++c) {
            charge_node();
            const bool contributes = cover[c].intersects(unc);
            if (!contributes && useless_refuted) continue;
            BitVec next = unc;
            next.and_not(cover[c]);
            bool ok;
            if (next.none())
                ok = slots - 1 <= nc - c - 1;
            else
                ok = slots - 1 <= nc - c - 1 && completion_exists(next, c + 1, slots - 1);
            if (ok) {
                picked.push_back(c);
                unc = next;
                from = c + 1;
                --slots;
                advanced = true;
                break;
            }
            if (!contributes) useless_refuted = true;
        }
        if (!advanced) throw std::logic_error("minimum-size search and fixed-size search disagree");
    }

    BitVec est = forced;
    for (int jj : picked) est.set(cand[jj]);
    out.estimate = ItemSet::from_mask(est);
    out.stats["bb_nodes"] = nodes;
    out.stats["bb_nodes_min_phase"] = min_phase_nodes;
    return out;
}

DecodeOutput run_decoder(Algorithm a, const TestMatrix& x, const OutcomeVector& y,
                         const SssOptions& sss_opts) {
    switch (a) {
        case Algorithm::Comp: return comp_decode(x, y);
        case Algorithm::Dd: return dd_decode(x, y);
        case Algorithm::Scomp: return scomp_decode(x, y);
        case Algorithm::Sss: return sss_decode(x, y, sss_opts);
    }
    throw std::invalid_argument("unknown algorithm");
}

double harmonic(int n) {
    double h = 0.0;
    for (int i = n; i >= 1; --i) h += 1.0 / i;
    return h;
}

}  // namespace gt
