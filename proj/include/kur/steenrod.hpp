#pragma once

// Monomial combinatorics of the C2-equivariant dual Steenrod algebra and the
// quotients A//E(n)*: admissible monomials xi^I tau^eps, Mahowald weights,
// basis enumeration for Brown-Gitler comodules, and the right E(1)-action.

#include "kur/grading.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace kur {

// xi_exps[i] is the exponent of xi_{i+1}; tau_flags[i] is the exponent (0/1)
// of tau_i.  Admissibility keeps every tau exponent <= 1; the square of a tau
// generator is never expanded, since admissible monomials already form a
// basis of every module built here.
struct SteenrodMonomial {
    std::vector<int> xi_exps;   // index i  <->  xi_{i+1}
    std::vector<char> tau_flags;  // index i  <->  tau_i

    void trim()
    {
        while (!xi_exps.empty() && xi_exps.back() == 0)
            xi_exps.pop_back();
        while (!tau_flags.empty() && tau_flags.back() == 0)
            tau_flags.pop_back();
    }

    int xi(int i) const  // exponent of xi_i, i >= 1
    {
        return (i >= 1 && i <= (int)xi_exps.size()) ? xi_exps[i - 1] : 0;
    }
    bool tau(int i) const { return i >= 0 && i < (int)tau_flags.size() && tau_flags[i]; }

    void set_xi(int i, int e)
    {
        assert(i >= 1 && e >= 0);
        if ((int)xi_exps.size() < i)
            xi_exps.resize(i, 0);
        xi_exps[i - 1] = e;
        trim();
    }
    void set_tau(int i, bool v)
    {
        assert(i >= 0);
        if ((int)tau_flags.size() <= i)
            tau_flags.resize(i + 1, 0);
        tau_flags[i] = v ? 1 : 0;
        trim();
    }

    bool is_one() const { return xi_exps.empty() && tau_flags.empty(); }

    long long weight() const
    {
        long long w = 0;
        for (std::size_t i = 0; i < xi_exps.size(); ++i)
            w += (long long)xi_exps[i] << (i + 1);
        for (std::size_t i = 0; i < tau_flags.size(); ++i)
            if (tau_flags[i])
                w += 1LL << i;
        return w;
    }

    Degree degree() const
    {
        Degree d{0, 0};
        for (std::size_t i = 0; i < xi_exps.size(); ++i) {
            // |xi_{i+1}| = (2^{i+1} - 1) rho
            long long c = (1LL << (i + 2)) - 2;
            d.stem += (int)(xi_exps[i] * c);
            d.weight += (int)(xi_exps[i] * (c / 2));
        }
        for (std::size_t i = 0; i < tau_flags.size(); ++i)
            if (tau_flags[i]) {
                // |tau_i| = 2^i rho - sigma
                d.stem += (int)((1LL << (i + 1)) - 1);
                d.weight += (int)((1LL << i) - 1);
            }
        return d;
    }

    auto operator<=>(const SteenrodMonomial&) const = default;

    std::string str() const
    {
        if (is_one())
            return "1";
        std::string s;
        for (std::size_t i = 0; i < xi_exps.size(); ++i) {
            if (!xi_exps[i])
                continue;
            if (!s.empty())
                s += ' ';
            s += "xi" + std::to_string(i + 1);
            if (xi_exps[i] > 1)
                s += "^" + std::to_string(xi_exps[i]);
        }
        for (std::size_t i = 0; i < tau_flags.size(); ++i) {
            if (!tau_flags[i])
                continue;
            if (!s.empty())
                s += ' ';
            s += "tau" + std::to_string(i);
        }
        return s;
    }
};

// Basis data for A//E(n)*: admissible monomials whose tau indices are at
// least n+1.  height = -1 gives the full dual Steenrod algebra.
struct QuotientBasisSpec {
    int height = -1;
    int tau_floor() const { return height + 1; }

    bool admits(const SteenrodMonomial& m) const
    {
        for (int i = 0; i < tau_floor(); ++i)
            if (m.tau(i))
                return false;
        return true;
    }
};

using MonomialSum = std::vector<SteenrodMonomial>;  // an F2-sum kept sorted and duplicate-free

inline void fsum_add(MonomialSum& s, const SteenrodMonomial& m)
{
    auto it = std::lower_bound(s.begin(), s.end(), m);
    if (it != s.end() && *it == m)
        s.erase(it);
    else
        s.insert(it, m);
}

inline long long weight(const SteenrodMonomial& m) { return m.weight(); }

namespace detail {

inline void enumerate_rec(const QuotientBasisSpec& spec, long long budget, int gen, SteenrodMonomial& cur,
                          std::vector<SteenrodMonomial>& out)
{
    // Generators are visited as xi_1, tau_0, xi_2, tau_1, ... encoded by a
    // single index: gen = 2j is xi_{j+1} (weight 2^{j+1}), gen = 2j+1 is
    // tau_j (weight 2^j).
    if (gen < 0) {
        out.push_back(cur);
        return;
    }
    bool is_tau = gen & 1;
    int j = gen >> 1;
    long long w = is_tau ? (1LL << j) : (1LL << (j + 1));
    if (is_tau && j < spec.tau_floor()) {
        enumerate_rec(spec, budget, gen - 1, cur, out);
        return;
    }
    if (is_tau) {
        enumerate_rec(spec, budget, gen - 1, cur, out);
        if (w <= budget) {
            cur.set_tau(j, true);
            enumerate_rec(spec, budget - w, gen - 1, cur, out);
            cur.set_tau(j, false);
        }
    }
    else {
        for (int e = 0; w * e <= budget; ++e) {
            cur.set_xi(j + 1, e);
            enumerate_rec(spec, budget - w * e, gen - 1, cur, out);
        }
        cur.set_xi(j + 1, 0);
    }
}

inline bool basis_order(const SteenrodMonomial& a, const SteenrodMonomial& b)
{
    long long wa = a.weight(), wb = b.weight();
    if (wa != wb)
        return wa < wb;
    Degree da = a.degree(), db = b.degree();
    if (da != db)
        return da < db;
    return a < b;
}

}  // namespace detail

// All admissible monomials of weight <= max_weight respecting the tau floor,
// sorted by (weight, degree, lex).
inline std::vector<SteenrodMonomial> enumerate_basis(const QuotientBasisSpec& spec, long long max_weight)
{
    assert(max_weight >= 0);
    std::vector<SteenrodMonomial> out;
    // Highest generator index that can fit the budget: tau_K with 2^K the
    // largest power at most the budget (xi indices top out strictly lower).
    int top = -1;
    for (int k = 0; k < 60 && (1LL << k) <= max_weight; ++k)
        top = 2 * k + 1;
    SteenrodMonomial cur;
    detail::enumerate_rec(spec, max_weight, top, cur, out);
    std::sort(out.begin(), out.end(), detail::basis_order);
    return out;
}

// Monomials of A//E(n)* of weight exactly 2k (the summand M_n(k) of the
// weight decomposition).
inline std::vector<SteenrodMonomial> weight_component(int n, long long k)
{
    assert(n >= 0 && k >= 0);
    QuotientBasisSpec spec{n};
    auto all = enumerate_basis(spec, 2 * k);
    std::vector<SteenrodMonomial> out;
    for (auto& m : all)
        if (m.weight() == 2 * k)
            out.push_back(std::move(m));
    return out;
}

// The index-raising isomorphism Sigma^{rho k} N_{n-1}(k) -> M_n(k):
// raise every generator index by one and pad with xi_1^{k - wt(x)}.
inline SteenrodMonomial bg_shift_iso(int n, long long k, const SteenrodMonomial& x)
{
    assert(n >= 1);
    QuotientBasisSpec dom{n - 1};
    if (!dom.admits(x) || x.weight() > k)
        throw std::invalid_argument("bg_shift_iso: input outside the N_{n-1}(k) basis");
    SteenrodMonomial y;
    for (std::size_t i = 0; i < x.xi_exps.size(); ++i)
        if (x.xi_exps[i])
            y.set_xi((int)i + 2, x.xi_exps[i]);
    for (std::size_t i = 0; i < x.tau_flags.size(); ++i)
        if (x.tau_flags[i])
            y.set_tau((int)i + 1, true);
    long long pad = k - x.weight();
    y.set_xi(1, y.xi(1) + (int)pad);
    return y;
}

// Right action of Q_i (i = 0, 1) on an admissible monomial, extended as a
// derivation over F2 from tau_k Q0 = xi_k and tau_k Q1 = xi_{k-1}^2, with
// xi_0 = 1.  xi generators are annihilated.  Monomials falling below the tau
// floor cannot arise: the substitution never creates a tau.
inline MonomialSum q_action(const QuotientBasisSpec& spec, const SteenrodMonomial& m, int i)
{
    assert(i == 0 || i == 1);
    assert(spec.admits(m));
    MonomialSum out;
    for (int t = 0; t < (int)m.tau_flags.size(); ++t) {
        if (!m.tau_flags[t])
            continue;
        SteenrodMonomial r = m;
        r.set_tau(t, false);
        if (i == 0) {
            if (t >= 1)
                r.set_xi(t, r.xi(t) + 1);
            // tau_0 Q0 = xi_0 = 1: drop the factor.
        }
        else {
            if (t == 0)
                continue;  // xi_{-1} does not exist
            if (t >= 2)
                r.set_xi(t - 1, r.xi(t - 1) + 2);
            // tau_1 Q1 = xi_0^2 = 1: drop the factor.
        }
        fsum_add(out, r);
    }
    return out;
}

}  // namespace kur
