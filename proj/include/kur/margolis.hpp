#pragma once

// Margolis homology with respect to a single Milnor primitive, the freeness
// criteria it supports, and the stable-equivalence (Whitehead) test.

#include "kur/emod.hpp"

#include <map>
#include <vector>

namespace kur {

struct MargolisResult {
    // homology dimension per degree of the (rho, tau)-reduced module
    std::map<Degree, int> dims;
    // chosen cycle representatives (coordinates in the module basis)
    std::map<Degree, std::vector<F2Vec>> reps;

    int total() const
    {
        int t = 0;
        for (auto& [d, n] : dims)
            t += n;
        return t;
    }
    int at(Degree d) const
    {
        auto it = dims.find(d);
        return it == dims.end() ? 0 : it->second;
    }
};

// Homology of (M/(rho, tau), Q_i) computed degreewise.
inline MargolisResult margolis_homology(const EModule& m0, int i)
{
    EModule m = reduce_mod_rho_tau(m0);
    const F2Matrix& a = m.q(i);

    std::map<Degree, std::vector<std::size_t>> slots;
    for (std::size_t j = 0; j < m.dim(); ++j)
        slots[m.degs[j]].push_back(j);

    MargolisResult out;
    Degree qd = q_op_degree(i);
    for (auto& [d, cur] : slots) {
        auto up_it = slots.find(d + qd);
        const std::vector<std::size_t> empty;
        const std::vector<std::size_t>& up = up_it == slots.end() ? empty : up_it->second;

        // kernel of Q_i restricted to degree d
        F2Matrix restr(m.dim(), cur.size());
        for (std::size_t c = 0; c < cur.size(); ++c)
            for (std::size_t r = 0; r < m.dim(); ++r)
                if (a.get(r, cur[c]))
                    restr.set(r, c, true);
        auto ker = kernel_basis(restr);

        // image of Q_i from degree d + |Q_i|
        F2Span img(m.dim());
        for (std::size_t c : up) {
            F2Vec v(m.dim());
            for (std::size_t r = 0; r < m.dim(); ++r)
                if (a.get(r, c))
                    v.set(r, true);
            img.add(std::move(v));
        }

        std::vector<F2Vec> reps;
        F2Span seen(m.dim());
        // seed with the image so representatives are reduced against it
        for (std::size_t c : up) {
            F2Vec v(m.dim());
            for (std::size_t r = 0; r < m.dim(); ++r)
                if (a.get(r, c))
                    v.set(r, true);
            seen.add(std::move(v));
        }
        for (auto& kv : ker) {
            F2Vec full(m.dim());
            for (std::size_t c = 0; c < cur.size(); ++c)
                if (kv.get(c))
                    full.set(cur[c], true);
            if (seen.add(full))
                reps.push_back(full);
        }
        if (!reps.empty()) {
            out.dims[d] = (int)reps.size();
            out.reps[d] = std::move(reps);
        }
    }
    return out;
}

// Free over E(height) iff (M2-free, which holds by representation) and every
// Margolis homology of the reduction vanishes.
inline bool is_free(const EModule& m)
{
    for (int i = 0; i <= m.height; ++i)
        if (margolis_homology(m, i).total() != 0)
            return false;
    return true;
}

// A degree-zero map given by M2-coefficient entries f[r][c] : M_c -> N_r.
using M2Matrix = std::vector<std::vector<M2Element>>;

inline M2Matrix identity_map(const EModule& m)
{
    M2Matrix f(m.dim(), std::vector<M2Element>(m.dim()));
    for (std::size_t i = 0; i < m.dim(); ++i)
        f[i][i] = M2Element(m2_one());
    return f;
}

inline M2Vec apply_map(const M2Matrix& f, const M2Vec& v)
{
    M2Vec out(f.size());
    for (std::size_t r = 0; r < f.size(); ++r)
        for (std::size_t c = 0; c < v.size(); ++c)
            for (auto& a : f[r][c].terms)
                for (auto& b : v[c].terms)
                    if (auto p = m2_mono_multiply(a, b))
                        out[r].add(*p);
    return out;
}

// Check that f commutes with the (twisted) Q-actions.
inline bool is_equivariant_map(const M2Matrix& f, const EModule& m, const EModule& n)
{
    if (f.size() != n.dim())
        return false;
    for (auto& row : f)
        if (row.size() != m.dim())
            return false;
    for (std::size_t j = 0; j < m.dim(); ++j) {
        M2Vec b = m2vec_basis(m, j);
        for (int i = 0; i <= m.height; ++i) {
            M2Vec lhs = apply_map(f, apply_q_semilinear(m, i, b));
            M2Vec rhs = apply_q_semilinear(n, i, apply_map(f, b));
            for (std::size_t r = 0; r < n.dim(); ++r)
                if (!(lhs[r] == rhs[r]))
                    return false;
        }
    }
    return true;
}

// The unit-coefficient part of f, as a plain F2 matrix on reduced modules.
inline F2Matrix reduce_map(const M2Matrix& f, const EModule& m, const EModule& n)
{
    F2Matrix out(n.dim(), m.dim());
    for (std::size_t r = 0; r < n.dim(); ++r)
        for (std::size_t c = 0; c < m.dim(); ++c)
            if (f[r][c].terms.count(m2_one()))
                out.set(r, c, true);
    return out;
}

// Whitehead theorem test: f is a stable equivalence iff its reduction induces
// isomorphisms on all Margolis homologies.
inline bool stable_equivalent(const M2Matrix& f, const EModule& m, const EModule& n)
{
    if (!is_equivariant_map(f, m, n))
        throw std::invalid_argument("stable_equivalent: map does not commute with the Q-actions");
    F2Matrix red = reduce_map(f, m, n);
    for (int i = 0; i <= m.height; ++i) {
        MargolisResult hm = margolis_homology(m, i);
        MargolisResult hn = margolis_homology(n, i);
        if (hm.dims != hn.dims)
            return false;
        // induced map per degree must be injective (hence iso by dimension)
        EModule nred = reduce_mod_rho_tau(n);
        const F2Matrix& an = nred.q(i);
        for (auto& [d, reps] : hm.reps) {
            // image span inside N at degree d
            F2Span img(n.dim());
            for (std::size_t c = 0; c < n.dim(); ++c)
                if (nred.degs[c] == d + q_op_degree(i)) {
                    F2Vec v(n.dim());
                    for (std::size_t r = 0; r < n.dim(); ++r)
                        if (an.get(r, c))
                            v.set(r, true);
                    img.add(std::move(v));
                }
            F2Span seen = img;
            for (auto& rep : reps) {
                F2Vec mapped(n.dim());
                for (std::size_t c = 0; c < m.dim(); ++c)
                    if (rep.get(c))
                        for (std::size_t r = 0; r < n.dim(); ++r)
                            if (red.get(r, c))
                                mapped.flip(r);
                if (!seen.add(std::move(mapped)))
                    return false;  // a homology class died or collided
            }
        }
    }
    return true;
}

}  // namespace kur
