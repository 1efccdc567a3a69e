#pragma once

// Splitting-level bookkeeping: Adams covers, the cooperations and operations
// algebra decompositions, smash powers of integral Brown-Gitler spectra, and
// the E1-page of the ku_R-based Adams spectral sequence.
//
// Convention: Brown-Gitler modules are always parameterized by their explicit
// weight cutoff.  The cooperations decomposition of the summand with
// parameter k uses the cutoff-2k module (tower count nu2((2k)!)), while the
// Adams-cover and operations indexing uses nu2(k!) for cutoff k; the two
// indexings agree once both are read at the same cutoff.

#include "kur/les_engine.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace kur {

// 2-adic valuation of k!, via Legendre: k minus the binary digit sum.
inline long long nu2_factorial(long long k)
{
    if (k < 0)
        throw std::invalid_argument("nu2_factorial: negative argument");
    return k - __builtin_popcountll((unsigned long long)k);
}

struct MultiIndex {
    std::vector<int> parts;  // i_1, ..., i_n with i_j >= 1

    long long total_nu2() const
    {
        long long t = 0;
        for (int i : parts)
            t += nu2_factorial(i);
        return t;
    }
    long long sum() const { return std::accumulate(parts.begin(), parts.end(), 0LL); }
    std::string str() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < parts.size(); ++i)
            s += (i ? "," : "") + std::to_string(parts[i]);
        return s + ")";
    }
};

enum class SummandKind : uint8_t { hz_tower, ku_tower, free_class, adams_cover };

struct Summand {
    SummandKind kind;
    ExtDeg shift;
    long long index = 0;  // tower index, or the cover height
    std::string provenance;  // which statement the summand instantiates
};

struct SummandDecomposition {
    std::vector<Summand> parts;
    struct Extension {
        std::string op;
        std::size_t from, to;
    };
    std::vector<Extension> extensions;

    long long tower_count() const
    {
        long long n = 0;
        for (auto& p : parts)
            if (p.kind == SummandKind::hz_tower)
                ++n;
        return n;
    }
    long long cover_index() const
    {
        for (auto& p : parts)
            if (p.kind == SummandKind::adams_cover || p.kind == SummandKind::ku_tower)
                return p.index;
        return -1;
    }
    std::size_t free_count() const
    {
        std::size_t n = 0;
        for (auto& p : parts)
            if (p.kind == SummandKind::free_class)
                ++n;
        return n;
    }
};

namespace assemblydetail {

// socle positions of the free part of an integral Brown-Gitler module, as
// filtration-0 chart bases
inline std::vector<ExtDeg> free_socles(long long cutoff)
{
    auto split = split_free_summands(bg_homology_module(cutoff, 0));
    std::vector<ExtDeg> out;
    for (auto& [deg, n] : split.free_gens.ranks) {
        Degree socle = deg - q_op_degree(0) - q_op_degree(1);
        for (long long i = 0; i < n; ++i)
            out.push_back({socle.stem, 0, socle.weight});
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace assemblydetail

// ku_R-homotopy of the k-th cooperations summand: HZ-towers x_0..x_{T-1}, a
// ku-tower x_T with T = nu2((2k)!), and the free classes of the cutoff-2k
// Brown-Gitler module, with extensions v1 x_{i-1} = rho x_i.
inline SummandDecomposition cooperations(int k, const Window& win)
{
    if (k < 0)
        throw std::invalid_argument("cooperations: k < 0");
    SummandDecomposition out;
    long long T = nu2_factorial(2LL * k);
    for (long long i = 0; i < T; ++i)
        out.parts.push_back({SummandKind::hz_tower, ExtDeg{(int)(2 * i), 0, (int)i}, i,
                             "HZ tower of the cooperations splitting"});
    out.parts.push_back({SummandKind::ku_tower, ExtDeg{(int)(2 * T), 0, (int)T}, T,
                         "ku tower of the cooperations splitting"});
    for (auto& d : assemblydetail::free_socles(2LL * k))
        if (win.contains(d))
            out.parts.push_back({SummandKind::free_class, d, 0, "free summand of H B0"});
    for (long long i = 1; i <= T; ++i)
        out.extensions.push_back({"v1 x_{i-1} = rho x_i", (std::size_t)(i - 1), (std::size_t)i});
    return out;
}

// Adams-cover description of the same summand at cutoff k: the cover index
// nu2(k!) and the free part of the cutoff-k module.
inline SummandDecomposition adams_cover_summary(int k)
{
    if (k < 0)
        throw std::invalid_argument("adams_cover_summary: k < 0");
    SummandDecomposition out;
    long long n = nu2_factorial(k);
    out.parts.push_back({SummandKind::adams_cover, ExtDeg{0, 0, 0}, n,
                         "Adams cover ku^<nu2(k!)> with relative homology L(nu2(k!))"});
    for (auto& d : assemblydetail::free_socles(k))
        out.parts.push_back({SummandKind::free_class, d, 0, "free summand of H B0"});
    return out;
}

struct SmashSummand {
    long long lightning_index;
    PoincareSeries free_part;  // generator degrees of the free complement
};

// Homology of B0(i_1) ^ ... ^ B0(i_n): a lightning flash of index
// sum nu2(i_j!) plus a free part counted by exact series division.
inline SmashSummand smash_summand(const MultiIndex& I, const Window& win)
{
    (void)win;
    if (I.parts.empty())
        throw std::invalid_argument("smash_summand: empty index");
    for (int i : I.parts)
        if (i < 1)
            throw std::invalid_argument("smash_summand: indices must be >= 1");
    EModule m = bg_homology_module(I.parts[0], 0);
    for (std::size_t j = 1; j < I.parts.size(); ++j)
        m = tensor(m, bg_homology_module(I.parts[j], 0));
    long long idx = I.total_nu2();
    PoincareSeries diff = m.poincare() - lightning_flash((int)idx).poincare();
    auto q = divide_exact(diff, free_rank1_series(1, {0, 0}));
    if (!q || !q->nonnegative())
        throw std::logic_error("smash_summand: free part is not an exact multiple of the free series");
    return {idx, *q};
}

struct E1Row {
    int n;
    MultiIndex I;
    long long lightning_index;
    ExtDeg shift;  // rho * sum(I)
};

struct E1Page {
    std::vector<E1Row> rows;
    // per (s, f, w, cone) totals over all rows, within the window
    std::map<std::tuple<int, int, int, int>, long long> totals;
};

// chart of one E1 summand: Ext(M2, L(index)) shifted, plus the free-part
// filtration-0 cones
inline TriChart e1_summand_chart(long long lightning_index, const MultiIndex& I, ExtDeg shift, Window win)
{
    TriChart ch = suspend_chart(closed_form_equivariant(0, (int)lightning_index, win), shift);
    ch.win = win;
    // free parts of the smash decomposition contribute f = 0 cones
    SmashSummand ss = smash_summand(I, win);
    for (auto& [deg, n] : ss.free_part.ranks) {
        Degree socle = deg - q_op_degree(0) - q_op_degree(1);
        for (long long i = 0; i < n; ++i)
            append_w_cone(ch, shift + ExtDeg{socle.stem, 0, socle.weight});
    }
    return ch;
}

inline E1Page e1_page(int n_max, Window win)
{
    if (n_max < 1)
        throw std::invalid_argument("e1_page: n_max < 1");
    E1Page page;
    // enumerate ordered tuples (i_1 .. i_n), i_j >= 1, with the rho-shift
    // landing at or below the stem ceiling
    for (int n = 1; n <= n_max; ++n) {
        std::vector<int> cur(n, 1);
        std::function<void(int, int)> rec = [&](int pos, int sum) {
            if (pos == n) {
                MultiIndex I{cur};
                page.rows.push_back({n, I, I.total_nu2(), ExtDeg{2 * sum, 0, sum}});
                return;
            }
            for (int i = 1; 2 * (sum + i + (n - pos - 1)) <= win.stem_max; ++i) {
                cur[pos] = i;
                rec(pos + 1, sum + i);
            }
        };
        if (2 * n <= win.stem_max)
            rec(0, 0);
    }
    std::sort(page.rows.begin(), page.rows.end(), [](const E1Row& a, const E1Row& b) {
        if (a.n != b.n)
            return a.n < b.n;
        return a.I.parts < b.I.parts;
    });
    for (auto& row : page.rows) {
        TriChart ch = e1_summand_chart(row.lightning_index, row.I, row.shift, win);
        for (auto& c : ch.cls)
            ++page.totals[{c.deg.s, c.deg.f, c.deg.w, (int)c.cone}];
    }
    return page;
}

// Operations algebra summand: Ext(L(nu2(k!)), M2) plus the filtration-0
// classes of the free part.
inline TriChart operations_algebra(int k, Window win)
{
    if (k < 0)
        throw std::invalid_argument("operations_algebra: k < 0");
    long long n = nu2_factorial(k);
    TriChart ch = closed_form_equivariant((int)n, 0, win);
    auto split = split_free_summands(bg_homology_module(k, 0));
    for (auto& [deg, cnt] : split.free_gens.ranks) {
        // Hom(free on g, M2) is an M2 cone based at minus the generator degree
        for (long long i = 0; i < cnt; ++i)
            append_w_cone(ch, ExtDeg{-deg.stem, 0, -deg.weight});
    }
    return ch;
}

// Double-count check for one summand: the cooperations tower description and
// the Adams-cover chart describe the same homotopy.  Towers are expanded to
// charts (E(0) copies for HZ, the E(1) chart for ku) and compared against the
// engine-derived Ext(M2, L(T)) with the same free classes.
inline bool double_count_summand(int k, Window win, std::string* why = nullptr)
{
    long long T = nu2_factorial(2LL * k);
    TriChart towers;
    towers.win = win;
    for (long long i = 0; i < T; ++i) {
        E0CopyOptions o;
        o.base = {(int)(2 * i), 0, (int)i};
        o.copy = (int)i;
        append_e0_m2m2(towers, o);
    }
    E1CopyOptions o1;
    o1.base = {(int)(2 * T), 0, (int)T};
    o1.copy = (int)T;
    append_e1_m2m2(towers, o1);
    for (long long i = 0; i + 1 <= T; ++i)
        install_v1_extensions(
            towers, [i](const ChartClass& c) { return c.copy == (int)i; },
            [i](const ChartClass& c) { return c.copy == (int)i + 1; });
    for (auto& d : assemblydetail::free_socles(2LL * k))
        append_w_cone(towers, d);

    TriChart cover = induct_ext(0, (int)T, win);
    for (auto& d : assemblydetail::free_socles(2LL * k))
        append_w_cone(cover, d);
    return tricharts_equal(towers, cover, 3, why);
}

}  // namespace kur
