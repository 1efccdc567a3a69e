#pragma once

// Finitely generated modules over E(0) and E(1): presentations, lightning
// flashes, Brown-Gitler homology modules, tensor products and free-summand
// splitting.
//
// An equivariant module is M2-free on its listed basis.  Operator matrices
// store bits; a nonzero entry carries the unique positive-cone coefficient
// its degrees dictate, so entries whose implied coefficient degree is not a
// legal positive-cone degree are rejected.  The right action of Q_i on
// coefficients is twisted (Q0 tau = rho, Q1 tau^2 = rho^3), which matters
// whenever elements with non-unit coefficients are acted on.

#include "kur/f2.hpp"
#include "kur/grading.hpp"
#include "kur/steenrod.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kur {

enum class Variant : uint8_t { classical, equivariant };

inline Degree q_op_degree(int i) { return i == 0 ? Degree{1, 0} : Degree{3, 1}; }

struct PoincareSeries {
    std::map<Degree, long long> ranks;

    void add(Degree d, long long n = 1)
    {
        if (n == 0)
            return;
        auto it = ranks.find(d);
        if (it == ranks.end())
            ranks.emplace(d, n);
        else if ((it->second += n) == 0)
            ranks.erase(it);
    }
    long long at(Degree d) const
    {
        auto it = ranks.find(d);
        return it == ranks.end() ? 0 : it->second;
    }
    long long total() const
    {
        long long t = 0;
        for (auto& [d, n] : ranks)
            t += n;
        return t;
    }
    bool nonnegative() const
    {
        for (auto& [d, n] : ranks)
            if (n < 0)
                return false;
        return true;
    }
    friend PoincareSeries operator-(PoincareSeries a, const PoincareSeries& b)
    {
        for (auto& [d, n] : b.ranks)
            a.add(d, -n);
        return a;
    }
    friend PoincareSeries operator+(PoincareSeries a, const PoincareSeries& b)
    {
        for (auto& [d, n] : b.ranks)
            a.add(d, n);
        return a;
    }
    friend PoincareSeries convolve(const PoincareSeries& a, const PoincareSeries& b)
    {
        PoincareSeries out;
        for (auto& [da, na] : a.ranks)
            for (auto& [db, nb] : b.ranks)
                out.add(da + db, na * nb);
        return out;
    }
    bool operator==(const PoincareSeries&) const = default;
};

// Exact division of finitely supported series, used to count free summands.
// Returns nullopt when the division leaves a remainder.
inline std::optional<PoincareSeries> divide_exact(PoincareSeries num, const PoincareSeries& den)
{
    if (den.ranks.empty())
        throw std::invalid_argument("divide_exact: zero divisor");
    PoincareSeries q;
    auto lead = den.ranks.begin();  // lowest degree term of the divisor
    Degree maxd = num.ranks.empty() ? Degree{0, 0} : num.ranks.rbegin()->first;
    while (!num.ranks.empty()) {
        auto t = num.ranks.begin();
        if (maxd < t->first)
            return std::nullopt;  // residual terms can no longer cancel
        long long c = t->second;
        if (c % lead->second != 0)
            return std::nullopt;
        long long k = c / lead->second;
        Degree shift = t->first - lead->first;
        q.add(shift, k);
        for (auto& [d, n] : den.ranks)
            num.add(d + shift, -n * k);
    }
    return q;
}

struct EModule {
    Variant variant = Variant::equivariant;
    int height = 1;  // 0 for E(0), 1 for E(1)
    std::vector<std::string> names;
    std::vector<Degree> degs;  // classical modules use the stem entry only
    F2Matrix q0, q1;           // q1 is empty for height 0

    std::size_t dim() const { return names.size(); }

    const F2Matrix& q(int i) const { return i == 0 ? q0 : q1; }

    bool degree_matches(Degree got, Degree want) const
    {
        if (variant == Variant::classical)
            return got.stem == want.stem;
        return got == want;
    }

    // Coefficient monomial implied by a nonzero entry target <- source of Q_i.
    std::optional<M2Monomial> entry_coeff(int i, std::size_t target, std::size_t source) const
    {
        Degree d = degs[source] - q_op_degree(i) - degs[target];
        if (variant == Variant::classical)
            return d.stem == 0 ? std::optional<M2Monomial>(m2_one()) : std::nullopt;
        auto m = m2_basis_in_degree(d);
        if (m && m->cone == Cone::positive)
            return m;
        return std::nullopt;
    }

    PoincareSeries poincare() const
    {
        PoincareSeries p;
        for (auto d : degs)
            p.add(variant == Variant::classical ? Degree{d.stem, 0} : d);
        return p;
    }
};

// An element with M2 coefficients, one per basis slot.
using M2Vec = std::vector<M2Element>;

inline M2Vec m2vec_basis(const EModule& m, std::size_t j)
{
    M2Vec v(m.dim());
    v[j] = M2Element(m2_one());
    return v;
}

inline bool m2vec_zero(const M2Vec& v)
{
    for (auto& c : v)
        if (!c.is_zero())
            return false;
    return true;
}

// Twisted right action of Q_i on an element with M2 coefficients.
inline M2Vec apply_q_semilinear(const EModule& m, int i, const M2Vec& v)
{
    M2Vec out(m.dim());
    auto add_scaled = [&](std::size_t target, const M2Element& coeff, const M2Monomial& scale) {
        for (auto& t : coeff.terms)
            if (auto p = m2_mono_multiply(t, scale))
                out[target].add(*p);
    };
    for (std::size_t j = 0; j < m.dim(); ++j) {
        const M2Element& c = v[j];
        if (c.is_zero())
            continue;
        // coefficient derivative term
        for (auto& t : c.terms) {
            M2Element d = (i == 0) ? m2_q0_coeff(t) : m2_q1_coeff(t);
            for (auto& dm : d.terms)
                out[j].add(dm);
        }
        // Q1 cross term feeds through Q0 of the basis element
        if (i == 1 && m.variant == Variant::equivariant) {
            for (auto& t : c.terms) {
                M2Element cr = m2_q1_cross_coeff(t);
                if (cr.is_zero())
                    continue;
                for (std::size_t r = 0; r < m.dim(); ++r)
                    if (m.q0.get(r, j))
                        if (auto mu = m.entry_coeff(0, r, j))
                            for (auto& cm : cr.terms)
                                add_scaled(r, M2Element(cm), *mu);
            }
        }
        // module action term
        const F2Matrix& a = m.q(i);
        if (a.rows() == 0)
            continue;
        for (std::size_t r = 0; r < m.dim(); ++r)
            if (a.get(r, j))
                if (auto mu = m.entry_coeff(i, r, j))
                    add_scaled(r, c, *mu);
    }
    return out;
}

inline void validate(const EModule& m)
{
    int nops = m.height + 1;
    for (int i = 0; i < nops; ++i) {
        const F2Matrix& a = m.q(i);
        if (a.rows() != m.dim() || a.cols() != m.dim())
            throw std::invalid_argument("EModule: operator matrix has wrong shape");
        for (std::size_t r = 0; r < m.dim(); ++r)
            for (std::size_t c = 0; c < m.dim(); ++c)
                if (a.get(r, c) && !m.entry_coeff(i, r, c))
                    throw std::invalid_argument("EModule: operator entry with illegal coefficient degree");
    }
    // Q_i^2 = 0 and Q0 Q1 = Q1 Q0, checked through the twisted action.
    for (std::size_t j = 0; j < m.dim(); ++j) {
        M2Vec b = m2vec_basis(m, j);
        for (int i = 0; i < nops; ++i)
            if (!m2vec_zero(apply_q_semilinear(m, i, apply_q_semilinear(m, i, b))))
                throw std::invalid_argument("EModule: Q_i^2 != 0");
        if (nops == 2) {
            M2Vec ab = apply_q_semilinear(m, 0, apply_q_semilinear(m, 1, b));
            M2Vec ba = apply_q_semilinear(m, 1, apply_q_semilinear(m, 0, b));
            for (std::size_t r = 0; r < m.dim(); ++r)
                if (!(ab[r] == ba[r]))
                    throw std::invalid_argument("EModule: Q0 Q1 != Q1 Q0");
        }
    }
}

// ---------------------------------------------------------------------------
// constructors

// The homological lightning flash L(k): basis x_1..x_k, x_i Q0, x_1 Q1, with
// x_{i+1} Q1 = x_i Q0 and Q0 Q1 annihilating everything (the 2k+1-dot model).
inline EModule lightning_flash(int k, Variant variant = Variant::equivariant, int height = 1)
{
    if (k < 0)
        throw std::invalid_argument("lightning_flash: k < 0");
    EModule m;
    m.variant = variant;
    m.height = height;
    auto deg = [&](Degree d) { return variant == Variant::classical ? Degree{d.stem, 0} : d; };
    if (k == 0) {
        m.names = {"1"};
        m.degs = {deg({0, 0})};
        m.q0 = F2Matrix(1, 1);
        m.q1 = height == 1 ? F2Matrix(1, 1) : F2Matrix();
        return m;
    }
    // layout: x_1..x_k, x_1Q0..x_kQ0, x_1Q1
    for (int i = 1; i <= k; ++i) {
        m.names.push_back("x" + std::to_string(i));
        m.degs.push_back(deg({2 * i + 1, i}));
    }
    for (int i = 1; i <= k; ++i) {
        m.names.push_back("x" + std::to_string(i) + "Q0");
        m.degs.push_back(deg({2 * i, i}));
    }
    m.names.push_back("x1Q1");
    m.degs.push_back(deg({0, 0}));
    std::size_t n = m.names.size();
    m.q0 = F2Matrix(n, n);
    m.q1 = height == 1 ? F2Matrix(n, n) : F2Matrix();
    for (int i = 1; i <= k; ++i)
        m.q0.set(k + (i - 1), i - 1, true);  // x_i Q0
    if (height == 1) {
        m.q1.set(n - 1, 0, true);  // x_1 Q1
        for (int i = 2; i <= k; ++i)
            m.q1.set(k + (i - 2), i - 1, true);  // x_i Q1 = x_{i-1} Q0
    }
    validate(m);
    return m;
}

inline EModule suspend(EModule m, Degree d)
{
    for (auto& x : m.degs)
        x = x + (m.variant == Variant::classical ? Degree{d.stem, 0} : d);
    return m;
}

inline EModule direct_sum(const EModule& a, const EModule& b)
{
    if (a.variant != b.variant || a.height != b.height)
        throw std::invalid_argument("direct_sum: variant or height mismatch");
    EModule m;
    m.variant = a.variant;
    m.height = a.height;
    m.names = a.names;
    for (auto& n : b.names)
        m.names.push_back(n + "'");
    m.degs = a.degs;
    m.degs.insert(m.degs.end(), b.degs.begin(), b.degs.end());
    std::size_t n = m.names.size();
    auto embed = [&](const F2Matrix& x, const F2Matrix& y) {
        F2Matrix out(n, n);
        for (std::size_t r = 0; r < x.rows(); ++r)
            for (std::size_t c = 0; c < x.cols(); ++c)
                if (x.get(r, c))
                    out.set(r, c, true);
        for (std::size_t r = 0; r < y.rows(); ++r)
            for (std::size_t c = 0; c < y.cols(); ++c)
                if (y.get(r, c))
                    out.set(r + x.rows(), c + x.cols(), true);
        return out;
    };
    m.q0 = embed(a.q0, b.q0);
    m.q1 = a.height == 1 ? embed(a.q1, b.q1) : F2Matrix();
    return m;
}

inline EModule tensor(const EModule& a, const EModule& b)
{
    if (a.variant != b.variant || a.height != b.height)
        throw std::invalid_argument("tensor: variant or height mismatch");
    EModule m;
    m.variant = a.variant;
    m.height = a.height;
    std::size_t n = a.dim() * b.dim();
    auto idx = [&](std::size_t i, std::size_t j) { return i * b.dim() + j; };
    m.names.resize(n);
    m.degs.resize(n);
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) {
            m.names[idx(i, j)] = a.names[i] + "(x)" + b.names[j];
            m.degs[idx(i, j)] = a.degs[i] + b.degs[j];
        }
    m.q0 = F2Matrix(n, n);
    m.q1 = a.height == 1 ? F2Matrix(n, n) : F2Matrix();
    for (int op = 0; op <= a.height; ++op) {
        F2Matrix& t = op == 0 ? m.q0 : m.q1;
        for (std::size_t i = 0; i < a.dim(); ++i)
            for (std::size_t j = 0; j < b.dim(); ++j) {
                for (std::size_t r = 0; r < a.dim(); ++r)
                    if (a.q(op).get(r, i))
                        t.flip(idx(r, j), idx(i, j));
                for (std::size_t r = 0; r < b.dim(); ++r)
                    if (b.q(op).get(r, j))
                        t.flip(idx(i, r), idx(i, j));
            }
    }
    validate(m);
    return m;
}

// Homology of a Brown-Gitler spectrum as a module: the weight <= cutoff part
// of A//E(height)* with its Q-action.  height -1 (mod-2 case) yields an
// E(0)-module; height 0 (integral case) an E(1)-module.
inline EModule bg_homology_module(long long cutoff, int height, Variant variant = Variant::equivariant)
{
    if (height != -1 && height != 0)
        throw std::invalid_argument("bg_homology_module: height must be -1 or 0");
    QuotientBasisSpec spec{height};
    auto basis = enumerate_basis(spec, cutoff);
    EModule m;
    m.variant = variant;
    m.height = height + 1;
    std::map<SteenrodMonomial, std::size_t> index;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        index[basis[i]] = i;
        m.names.push_back(basis[i].str());
        Degree d = basis[i].degree();
        m.degs.push_back(variant == Variant::classical ? Degree{d.stem, 0} : d);
    }
    std::size_t n = basis.size();
    m.q0 = F2Matrix(n, n);
    m.q1 = m.height == 1 ? F2Matrix(n, n) : F2Matrix();
    for (int op = 0; op <= m.height; ++op) {
        F2Matrix& t = op == 0 ? m.q0 : m.q1;
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& r : q_action(spec, basis[j], op)) {
                auto it = index.find(r);
                if (it != index.end())  // the action preserves weight, so it stays in range
                    t.flip(it->second, j);
            }
    }
    validate(m);
    return m;
}

// F2 reduction mod (rho, tau): keep only unit-coefficient entries.
inline EModule reduce_mod_rho_tau(const EModule& m)
{
    EModule r = m;
    r.variant = Variant::classical;
    for (int i = 0; i <= m.height; ++i) {
        F2Matrix& t = i == 0 ? r.q0 : r.q1;
        t = F2Matrix(m.dim(), m.dim());
        for (std::size_t a = 0; a < m.dim(); ++a)
            for (std::size_t b = 0; b < m.dim(); ++b)
                if (m.q(i).get(a, b)) {
                    auto c = m.entry_coeff(i, a, b);
                    if (m.variant == Variant::classical || (c && c->is_unit()))
                        t.set(a, b, true);
                }
    }
    // classical variant keeps the full bidegrees for bookkeeping
    return r;
}

// Forget Q1, viewing an E(1)-module as an E(0)-module.
inline EModule restrict_to_e0(EModule m)
{
    if (m.height == 0)
        return m;
    m.height = 0;
    m.q1 = F2Matrix();
    return m;
}

struct SplitResult {
    EModule reduced;
    PoincareSeries free_gens;  // degrees of split-off free generators
};

// Split off free summands: repeatedly find v with Q0..Qn v spanning a free
// cyclic module (detected by the top operator product being nonzero on v) and
// pass to the quotient.  Works on the (rho, tau)-reduction matrices.
inline SplitResult split_free_summands(const EModule& m0)
{
    EModule red = reduce_mod_rho_tau(m0);
    // current basis as vectors in the original module, plus degree list
    std::size_t n0 = m0.dim();
    std::vector<F2Vec> basis;
    std::vector<Degree> degs = m0.degs;
    std::vector<std::string> names = m0.names;
    for (std::size_t i = 0; i < n0; ++i) {
        F2Vec e(n0);
        e.set(i, true);
        basis.push_back(std::move(e));
    }
    F2Matrix a0 = red.q0;
    F2Matrix a1 = red.height == 1 ? red.q1 : F2Matrix();

    PoincareSeries free_gens;

    auto apply = [&](const F2Matrix& a, const F2Vec& v) { return a.apply(v); };

    for (;;) {
        std::size_t n = basis.size();
        if (n == 0)
            break;
        // matrices of the current quotient in the current basis are maintained
        // directly as a0, a1 of size n
        F2Matrix top = m0.height == 1 ? a0.times(a1) : a0;
        std::size_t col = n;
        for (std::size_t c = 0; c < n && col == n; ++c) {
            for (std::size_t r = 0; r < n; ++r)
                if (top.get(r, c)) {
                    col = c;
                    break;
                }
        }
        if (col == n)
            break;  // no free summand left

        // free cyclic submodule on v = e_col
        std::vector<F2Vec> fvecs;
        F2Vec v(n);
        v.set(col, true);
        fvecs.push_back(v);
        fvecs.push_back(apply(a0, v));
        if (m0.height == 1) {
            fvecs.push_back(apply(a1, v));
            fvecs.push_back(apply(a1, apply(a0, v)));
        }
        free_gens.add(degs[col]);

        // choose standard-basis complement C with F + span(C) = everything
        F2Span span(n);
        for (auto& f : fvecs)
            span.add(f);
        std::vector<std::size_t> comp;
        for (std::size_t i = 0; i < n; ++i) {
            F2Vec e(n);
            e.set(i, true);
            if (span.add(e))
                comp.push_back(i);
        }
        // change of basis: columns are the free vectors followed by the
        // complement basis; projecting to the quotient reads the comp part of
        // the coordinates in this basis.
        F2Matrix cb(n, n);
        for (std::size_t c = 0; c < fvecs.size(); ++c)
            for (std::size_t r = 0; r < n; ++r)
                if (fvecs[c].get(r))
                    cb.set(r, c, true);
        for (std::size_t c = 0; c < comp.size(); ++c)
            cb.set(comp[c], fvecs.size() + c, true);
        auto cbinv = inverse(cb);
        if (!cbinv)
            throw std::logic_error("split_free_summands: degenerate free family");
        auto project = [&](const F2Vec& x) {
            F2Vec coords = cbinv->apply(x);
            F2Vec out(comp.size());
            for (std::size_t i = 0; i < comp.size(); ++i)
                if (coords.get(fvecs.size() + i))
                    out.set(i, true);
            return out;
        };

        std::vector<F2Vec> nbasis;
        std::vector<Degree> ndegs;
        std::vector<std::string> nnames;
        for (std::size_t i : comp) {
            nbasis.push_back(basis[i]);
            ndegs.push_back(degs[i]);
            nnames.push_back(names[i]);
        }
        F2Matrix na0(comp.size(), comp.size());
        F2Matrix na1(comp.size(), comp.size());
        for (std::size_t c = 0; c < comp.size(); ++c) {
            F2Vec e(n);
            e.set(comp[c], true);
            F2Vec i0 = project(apply(a0, e));
            for (std::size_t r = 0; r < comp.size(); ++r)
                if (i0.get(r))
                    na0.set(r, c, true);
            if (m0.height == 1) {
                F2Vec i1 = project(apply(a1, e));
                for (std::size_t r = 0; r < comp.size(); ++r)
                    if (i1.get(r))
                        na1.set(r, c, true);
            }
        }
        basis = std::move(nbasis);
        degs = std::move(ndegs);
        names = std::move(nnames);
        a0 = std::move(na0);
        a1 = std::move(na1);
    }

    EModule out;
    out.variant = m0.variant;
    out.height = m0.height;
    out.names = names;
    out.degs = degs;
    out.q0 = a0;
    out.q1 = m0.height == 1 ? a1 : F2Matrix();
    validate(out);
    return {std::move(out), std::move(free_gens)};
}

// Rank of a free module on one generator over E(height).
inline int free_module_rank(int height) { return height == 1 ? 4 : 2; }

inline PoincareSeries free_rank1_series(int height, Degree gen)
{
    PoincareSeries p;
    p.add(gen);
    p.add(gen - q_op_degree(0));
    if (height == 1) {
        p.add(gen - q_op_degree(1));
        p.add(gen - q_op_degree(0) - q_op_degree(1));
    }
    return p;
}

}  // namespace kur
