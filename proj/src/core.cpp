#include "grouptest/core.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "grouptest/rng.hpp"

namespace gt {

void ItemSet::normalize() {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (!members_.empty() && members_.front() < 1)
        throw std::out_of_range("ItemSet: item indices are 1-based");
}

ItemSet ItemSet::from_mask(const BitVec& mask) {
    ItemSet s;
    mask.for_each_set([&](std::size_t pos) { s.members_.push_back(static_cast<int>(pos) + 1); });
    return s;
}

bool ItemSet::contains(int item) const {
    return std::binary_search(members_.begin(), members_.end(), item);
}

void ItemSet::insert(int item) {
    if (item < 1) throw std::out_of_range("ItemSet: item indices are 1-based");
    auto it = std::lower_bound(members_.begin(), members_.end(), item);
    if (it == members_.end() || *it != item) members_.insert(it, item);
}

bool ItemSet::subset_of(const ItemSet& other) const {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
}

BitVec ItemSet::to_mask(int n_items) const {
    BitVec mask(static_cast<std::size_t>(n_items));
    for (int item : members_) {
        if (item > n_items) throw std::out_of_range("ItemSet: item index exceeds N");
        mask.set(static_cast<std::size_t>(item - 1));
    }
    return mask;
}

TestMatrix::TestMatrix(int n_items, int n_tests) : n_items_(n_items), n_tests_(n_tests) {
    if (n_items < 1) throw std::invalid_argument("TestMatrix: N must be positive");
    if (n_tests < 0) throw std::invalid_argument("TestMatrix: T must be non-negative");
    rows_.assign(static_cast<std::size_t>(n_tests), BitVec(static_cast<std::size_t>(n_items)));
    cols_.assign(static_cast<std::size_t>(n_items), BitVec(static_cast<std::size_t>(n_tests)));
}

void TestMatrix::set_cell(int test, int item, bool value) {
    if (test < 0 || test >= n_tests_) throw std::out_of_range("TestMatrix: test index");
    if (item < 1 || item > n_items_) throw std::out_of_range("TestMatrix: item index");
    rows_[static_cast<std::size_t>(test)].set(static_cast<std::size_t>(item - 1), value);
    cols_[static_cast<std::size_t>(item - 1)].set(static_cast<std::size_t>(test), value);
}

TestMatrix generate_bernoulli_design(const DesignParams& params) {
    if (params.inclusion_prob < 0.0 || params.inclusion_prob > 1.0)
        throw std::invalid_argument("generate_bernoulli_design: p must lie in [0,1]");
    TestMatrix x(params.n_items, params.n_tests);
    Rng rng(params.seed);
    for (int t = 0; t < params.n_tests; ++t)
        for (int i = 1; i <= params.n_items; ++i)
            if (rng.next_unit() < params.inclusion_prob) x.set_cell(t, i, true);
    return x;
}

OutcomeVector compute_outcomes(const TestMatrix& x, const ItemSet& defectives) {
    OutcomeVector y(static_cast<std::size_t>(x.n_tests()));
    for (int item : defectives.members()) {
        if (item > x.n_items()) throw std::out_of_range("compute_outcomes: item index exceeds N");
        y |= x.column(item);
    }
    return y;
}

bool is_satisfying(const TestMatrix& x, const OutcomeVector& y, const ItemSet& candidate) {
    if (y.size() != static_cast<std::size_t>(x.n_tests()))
        throw std::invalid_argument("is_satisfying: outcome length != T");
    return compute_outcomes(x, candidate) == y;
}

std::vector<int> unexplained_tests(const TestMatrix& x, const OutcomeVector& y, const ItemSet& estimate) {
    if (y.size() != static_cast<std::size_t>(x.n_tests()))
        throw std::invalid_argument("unexplained_tests: outcome length != T");
    const BitVec covered = compute_outcomes(x, estimate);
    std::vector<int> out;
    y.for_each_set([&](std::size_t t) {
        if (!covered.test(t)) out.push_back(static_cast<int>(t));
    });
    return out;
}

namespace {

// Number of subsets of {1..n} of size <= k, saturating at cap+1.
std::uint64_t subset_count_capped(int n, int k, std::uint64_t cap) {
    std::uint64_t total = 0;
    std::uint64_t binom = 1;  // C(n, 0)
    for (int j = 0; j <= k; ++j) {
        if (j > 0) {
            // C(n, j) = C(n, j-1) * (n-j+1) / j, watching for overflow
            if (binom > cap * 2) return cap + 1;
            binom = binom * static_cast<std::uint64_t>(n - j + 1) / static_cast<std::uint64_t>(j);
        }
        total += binom;
        if (total > cap) return cap + 1;
    }
    return total;
}

// Visits every subset of {1..n} with size <= k as a sorted index vector,
// smallest-first in lexicographic DFS order. Stops early when the visitor
// returns false.
template <class Visitor>
bool for_each_subset(int n, int k, Visitor&& visit) {
    std::vector<int> subset;
    if (!visit(subset)) return false;
    if (k == 0) return true;
    std::vector<int> stack{1};  // next candidate item at each depth
    while (!stack.empty()) {
        int& candidate = stack.back();
        if (candidate > n) {
            stack.pop_back();
            if (!subset.empty()) subset.pop_back();
            if (!stack.empty()) ++stack.back();
            continue;
        }
        subset.push_back(candidate);
        if (!visit(subset)) return false;
        if (static_cast<int>(subset.size()) < k) {
            stack.push_back(candidate + 1);
        } else {
            subset.pop_back();
            ++candidate;
        }
    }
    return true;
}

}  // namespace

bool is_k_disjunct(const TestMatrix& x, int k, std::uint64_t subset_cap) {
    if (k < 0) throw std::invalid_argument("is_k_disjunct: k must be >= 0");
    if (subset_count_capped(x.n_items(), k, subset_cap) > subset_cap)
        throw std::length_error("is_k_disjunct: instance too large for exhaustive check");
    const int n = x.n_items();
    const int t_count = x.n_tests();
    bool ok = true;
    for_each_subset(n, k, [&](const std::vector<int>& subset) {
        // union of the subset's columns: tests touched by the subset
        BitVec touched(static_cast<std::size_t>(t_count));
        for (int item : subset) touched |= x.column(item);
        for (int i = 1; i <= n; ++i) {
            if (std::find(subset.begin(), subset.end(), i) != subset.end()) continue;
            // need a test containing i and nothing from the subset
            BitVec free_tests = x.column(i);
            free_tests.and_not(touched);
            if (free_tests.none()) {
                ok = false;
                return false;
            }
        }
        return true;
    });
    return ok;
}

bool is_k_separable(const TestMatrix& x, int k, std::uint64_t subset_cap) {
    if (k < 0) throw std::invalid_argument("is_k_separable: k must be >= 0");
    if (subset_count_capped(x.n_items(), k, subset_cap) > subset_cap)
        throw std::length_error("is_k_separable: instance too large for exhaustive check");
    struct Hash {
        std::size_t operator()(const BitVec& v) const { return v.hash(); }
    };
    std::unordered_set<BitVec, Hash> seen;
    bool ok = true;
    for_each_subset(x.n_items(), k, [&](const std::vector<int>& subset) {
        BitVec sum(static_cast<std::size_t>(x.n_tests()));
        for (int item : subset) sum |= x.column(item);
        if (!seen.insert(std::move(sum)).second) {
            ok = false;
            return false;
        }
        return true;
    });
    return ok;
}

namespace {

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
    std::ostringstream msg;
    msg << "instance parse error, line " << line_no << ": " << what;
    throw std::runtime_error(msg.str());
}

}  // namespace

Instance read_instance(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) parse_fail(1, "missing header");
    ++line_no;
    std::istringstream header(line);
    int n = 0, t = 0;
    if (!(header >> n >> t) || n < 1 || t < 0) parse_fail(line_no, "expected \"N T\" with N >= 1, T >= 0");
    std::string trailing;
    if (header >> trailing) parse_fail(line_no, "unexpected trailing content in header");

    TestMatrix x(n, t);
    for (int row = 0; row < t; ++row) {
        if (!std::getline(in, line)) parse_fail(line_no + 1, "missing matrix row");
        ++line_no;
        if (static_cast<int>(line.size()) != n) parse_fail(line_no, "row length != N");
        for (int i = 0; i < n; ++i) {
            if (line[static_cast<std::size_t>(i)] == '1')
                x.set_cell(row, i + 1, true);
            else if (line[static_cast<std::size_t>(i)] != '0')
                parse_fail(line_no, "matrix rows must contain only 0/1");
        }
    }

    Instance inst{std::move(x), std::nullopt, std::nullopt};
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line.rfind("y ", 0) == 0) {
            if (inst.outcomes) parse_fail(line_no, "duplicate y line");
            const std::string bits = line.substr(2);
            if (static_cast<int>(bits.size()) != t) parse_fail(line_no, "y length != T");
            OutcomeVector y(static_cast<std::size_t>(t));
            for (int j = 0; j < t; ++j) {
                if (bits[static_cast<std::size_t>(j)] == '1')
                    y.set(static_cast<std::size_t>(j));
                else if (bits[static_cast<std::size_t>(j)] != '0')
                    parse_fail(line_no, "y must contain only 0/1");
            }
            inst.outcomes = std::move(y);
        } else if (line.rfind("K ", 0) == 0 || line == "K") {
            if (inst.defectives) parse_fail(line_no, "duplicate K line");
            std::istringstream items(line.substr(1));
            std::vector<int> k_items;
            int item = 0;
            while (items >> item) {
                if (item < 1 || item > n) parse_fail(line_no, "item index out of range 1..N");
                k_items.push_back(item);
            }
            if (!items.eof()) parse_fail(line_no, "K line must contain integers");
            inst.defectives = ItemSet(std::move(k_items));
        } else {
            parse_fail(line_no, "unrecognised line");
        }
    }
    return inst;
}

Instance read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    return read_instance(in);
}

void write_instance(std::ostream& out, const Instance& inst) {
    const TestMatrix& x = inst.matrix;
    out << x.n_items() << ' ' << x.n_tests() << '\n';
    for (int t = 0; t < x.n_tests(); ++t) {
        for (int i = 1; i <= x.n_items(); ++i) out << (x.cell(t, i) ? '1' : '0');
        out << '\n';
    }
    if (inst.outcomes) {
        out << "y ";
        for (std::size_t j = 0; j < inst.outcomes->size(); ++j) out << (inst.outcomes->test(j) ? '1' : '0');
        out << '\n';
    }
    if (inst.defectives) {
        out << 'K';
        for (int item : inst.defectives->members()) out << ' ' << item;
        out << '\n';
    }
}

}  // namespace gt
