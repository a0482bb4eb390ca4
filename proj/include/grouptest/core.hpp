#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "grouptest/bitvec.hpp"

namespace gt {

// A set of item indices. Items are 1-based throughout the public API and in
// all file formats; bit position item-1 is used wherever a mask is needed.
class ItemSet {
public:
    ItemSet() = default;
    ItemSet(std::initializer_list<int> items) : members_(items) { normalize(); }
    explicit ItemSet(std::vector<int> items) : members_(std::move(items)) { normalize(); }

    // mask over positions 0..N-1 -> items 1..N
    static ItemSet from_mask(const BitVec& mask);

    const std::vector<int>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    bool contains(int item) const;
    void insert(int item);
    bool subset_of(const ItemSet& other) const;

    BitVec to_mask(int n_items) const;

    bool operator==(const ItemSet&) const = default;

private:
    void normalize();
    std::vector<int> members_;  // sorted, unique
};

// Binary T x N inclusion matrix kept in both row-major and column-major bit
// form; the two views are updated together and always agree.
class TestMatrix {
public:
    TestMatrix(int n_items, int n_tests);

    int n_items() const { return n_items_; }
    int n_tests() const { return n_tests_; }

    // test in [0, T), item in [1, N]
    bool cell(int test, int item) const { return rows_[static_cast<std::size_t>(test)].test(static_cast<std::size_t>(item - 1)); }
    void set_cell(int test, int item, bool value);

    // bits over item positions 0..N-1
    const BitVec& row(int test) const { return rows_[static_cast<std::size_t>(test)]; }
    // bits over tests 0..T-1
    const BitVec& column(int item) const { return cols_[static_cast<std::size_t>(item - 1)]; }

    bool operator==(const TestMatrix&) const = default;

private:
    int n_items_;
    int n_tests_;
    std::vector<BitVec> rows_;
    std::vector<BitVec> cols_;
};

// Outcome of the T tests; bit t is 1 iff test t was positive.
using OutcomeVector = BitVec;

// Parameters of a Bernoulli(p) experiment.
struct DesignParams {
    int n_items = 0;
    int n_tests = 0;
    double inclusion_prob = 0.0;
    std::uint64_t seed = 0;
};

// Each cell is 1 independently with probability p, drawn in row-major order
// from a stream fully determined by params.seed; the same params always
// reproduce the identical matrix.
TestMatrix generate_bernoulli_design(const DesignParams& params);

// y_t = 1 iff test t contains at least one defective (componentwise OR of
// the defective columns). Throws std::out_of_range on a bad item index.
OutcomeVector compute_outcomes(const TestMatrix& x, const ItemSet& defectives);

// True iff the candidate set would have produced exactly these outcomes.
bool is_satisfying(const TestMatrix& x, const OutcomeVector& y, const ItemSet& candidate);

// Positive tests containing no member of the estimate (0-based test ids).
std::vector<int> unexplained_tests(const TestMatrix& x, const OutcomeVector& y, const ItemSet& estimate);

inline constexpr std::uint64_t kDefaultSubsetCap = 1'000'000;

// Exhaustive structural checks. Both refuse to run when the number of
// subsets of size <= k exceeds the cap (std::length_error).
bool is_k_disjunct(const TestMatrix& x, int k, std::uint64_t subset_cap = kDefaultSubsetCap);
bool is_k_separable(const TestMatrix& x, int k, std::uint64_t subset_cap = kDefaultSubsetCap);

// Plain-text instance format:
//   line 1:       "N T"
//   next T lines: N characters, each 0 or 1 (row t = test t)
//   optional:     "y " followed by T characters in {0,1}
//   optional:     "K " followed by space-separated 1-based item indices
struct Instance {
    TestMatrix matrix;
    std::optional<OutcomeVector> outcomes;
    std::optional<ItemSet> defectives;
};

Instance read_instance(std::istream& in);
Instance read_instance_file(const std::string& path);
void write_instance(std::ostream& out, const Instance& inst);

}  // namespace gt
