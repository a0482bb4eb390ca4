#include "grouptest/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>

namespace gt::oracle {
namespace {

Rational pow_ui(const Rational& x, unsigned long e) {
    if (e == 0) return Rational(1);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), e);
    Rational r(num, den);
    r.canonicalize();
    return r;
}

mpz_class binom_z(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Rational binom_pmf_q(int n, const Rational& theta, int m) {
    return Rational(binom_z(n, m)) * pow_ui(theta, m) * pow_ui(1 - theta, n - m);
}

}  // namespace

std::vector<ItemSet> enumerate_satisfying(const TestMatrix& x, const OutcomeVector& y) {
    const int n = x.n_items();
    const int t = x.n_tests();
    if (n > 20) throw std::length_error("enumerate_satisfying handles at most 20 items");
    if (t > 32) throw std::length_error("enumerate_satisfying handles at most 32 tests");
    if (y.size() != static_cast<std::size_t>(t))
        throw std::invalid_argument("outcome vector length does not match test count");

    std::uint32_t target = 0;
    for (int tt = 0; tt < t; ++tt)
        if (y.test(tt)) target |= std::uint32_t(1) << tt;
    std::vector<std::uint32_t> col(n, 0);
    for (int i = 0; i < n; ++i)
        x.column(i + 1).for_each_set(
            [&](std::size_t tt) { col[i] |= std::uint32_t(1) << tt; });

    // reach[mask] = OR of the columns selected by mask, built incrementally.
    const std::uint32_t total = std::uint32_t(1) << n;
    std::vector<std::uint32_t> reach(total, 0);
    std::vector<ItemSet> out;
    for (std::uint32_t mask = 0; mask < total; ++mask) {
        if (mask) reach[mask] = reach[mask & (mask - 1)] | col[std::countr_zero(mask)];
        if (reach[mask] == target) {
            std::vector<int> members;
            for (int i = 0; i < n; ++i)
                if (mask & (std::uint32_t(1) << i)) members.push_back(i + 1);
            out.emplace_back(std::move(members));
        }
    }
    std::sort(out.begin(), out.end(), [](const ItemSet& a, const ItemSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.members() < b.members();
    });
    return out;
}

Rational exact_success_by_exhaustion(int n, const ItemSet& k_set, int t, const Rational& p,
                                     Algorithm algorithm) {
    if (n < 1 || t < 0) throw std::domain_error("need n >= 1 and t >= 0");
    if (n * t > 16) throw std::length_error("matrix exhaustion handles at most n*t = 16");
    if (!(p > 0 && p < 1)) throw std::domain_error("p must lie strictly inside (0,1)");
    if (!k_set.empty() && k_set.members().back() > n)
        throw std::invalid_argument("defective set mentions an item beyond n");

    const int cells = n * t;
    std::vector<Rational> p_pow(cells + 1), q_pow(cells + 1);
    for (int j = 0; j <= cells; ++j) {
        p_pow[j] = pow_ui(p, j);
        q_pow[j] = pow_ui(1 - p, j);
    }

    Rational total(0);
    for (std::uint32_t m = 0; m < (std::uint32_t(1) << cells); ++m) {
        TestMatrix x(n, t);
        for (int bit = 0; bit < cells; ++bit)
            if (m & (std::uint32_t(1) << bit)) x.set_cell(bit / n, bit % n + 1, true);
        const OutcomeVector y = compute_outcomes(x, k_set);
        const DecodeOutput d = run_decoder(algorithm, x, y);
        if (d.estimate == k_set) {
            const int ones = std::popcount(m);
            total += p_pow[ones] * q_pow[cells - ones];
        }
    }
    return total;
}

Rational mask_probability_oracle(int k, const Rational& q, int m) {
    if (k < 0 || m < 0) throw std::domain_error("need k >= 0 and m >= 0");
    if (k > 4 || m > 8) throw std::length_error("mask oracle handles at most k=4, m=8");
    const Rational none = 1 - k * q;
    const unsigned full = (unsigned(1) << k) - 1;

    Rational total(0);
    // All (k+1)^m assignments of rounds to slots (or the no-slot class).
    auto dfs = [&](auto&& self, int round, const Rational& weight, unsigned hit) -> void {
        if (round == m) {
            if (hit == full) total += weight;
            return;
        }
        for (int c = 0; c < k; ++c) self(self, round + 1, weight * q, hit | (unsigned(1) << c));
        self(self, round + 1, weight * none, hit);
    };
    dfs(dfs, 0, Rational(1), 0);
    return total;
}

Rational phi_k_rational(int k, const Rational& q, int t) {
    if (k < 0 || t < 0) throw std::domain_error("need k >= 0 and t >= 0");
    Rational total(0);
    for (int l = 0; l <= k; ++l) {
        const Rational term = Rational(binom_z(k, l)) * pow_ui(1 - l * q, t);
        if (l & 1)
            total -= term;
        else
            total += term;
    }
    return total;
}

Rational dd_success_exact_rational(int n, int k, int t, const Rational& p) {
    if (n < 1 || k < 0 || k > n || t < 0) throw std::domain_error("bad instance shape");
    if (!(p > 0 && p < 1)) throw std::domain_error("p must lie strictly inside (0,1)");
    if (k == 0) return Rational(1);

    const Rational one_m_p = 1 - p;
    const Rational q0 = pow_ui(one_m_p, k);
    const Rational q1 = p * pow_ui(one_m_p, k - 1);
    const Rational denom = 1 - q0;

    Rational total(0);
    for (int m0 = 0; m0 <= t; ++m0) {
        const Rational w_m0 = binom_pmf_q(t, q0, m0);
        const Rational hide = pow_ui(one_m_p, m0);
        Rational inner(0);
        for (int g = 0; g <= n - k; ++g) {
            const Rational w_g = binom_pmf_q(n - k, hide, g);
            const Rational q_star = q1 * pow_ui(one_m_p, g) / denom;
            inner += w_g * phi_k_rational(k, q_star, t - m0);
        }
        total += w_m0 * inner;
    }
    return total;
}

}  // namespace gt::oracle
