#pragma once

// Test-only oracles, kept independent of the library's computation paths.

#include "kur/emod.hpp"
#include "kur/grading.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace oracle {

// Plain O(n^3) Gaussian elimination on a bool matrix; no bit packing, no
// shared code with kur::F2Matrix.
inline int naive_rank(std::vector<std::vector<int>> m)
{
    int rows = (int)m.size();
    int cols = rows ? (int)m[0].size() : 0;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (m[i][c]) {
                p = i;
                break;
            }
        if (p < 0)
            continue;
        std::swap(m[p], m[r]);
        for (int i = 0; i < rows; ++i)
            if (i != r && m[i][c])
                for (int j = 0; j < cols; ++j)
                    m[i][j] ^= m[r][j];
        ++r;
    }
    return r;
}

// Koszul-complex computation of Ext over the classical exterior algebra
// E(height) on Q0 (and Q1): the cochain complex X (x) F2[v0, v1] with
// differential sum Q_i (x) v_i, where X = Hom_{F2}(M, N).  Dimensions are
// returned per (stem, filtration).  This route never builds a resolution.
struct KoszulExt {
    std::map<std::pair<int, int>, int> dims;
    int at(int s, int f) const
    {
        auto it = dims.find({s, f});
        return it == dims.end() ? 0 : it->second;
    }
};

inline KoszulExt koszul_ext(const kur::EModule& M, const kur::EModule& N, int smin, int smax, int fmax)
{
    using kur::F2Matrix;
    // X = Hom_{F2}(M, N), graded by map stem degree; basis (a, b) ~ E_{b,a}.
    // Right action: (phi Q)(x) = phi(x) Q + phi(x Q).
    int dm = (int)M.dim(), dn = (int)N.dim();
    int dx = dm * dn;
    auto xi = [&](int a, int b) { return a * dn + b; };
    std::vector<int> xdeg(dx);
    for (int a = 0; a < dm; ++a)
        for (int b = 0; b < dn; ++b)
            xdeg[xi(a, b)] = N.degs[b].stem - M.degs[a].stem;
    int nops = M.height + 1;
    std::vector<F2Matrix> q(nops, F2Matrix(dx, dx));
    const F2Matrix* mq[2] = {&M.q0, &M.q1};
    const F2Matrix* nq[2] = {&N.q0, &N.q1};
    for (int op = 0; op < nops; ++op)
        for (int a = 0; a < dm; ++a)
            for (int b = 0; b < dn; ++b) {
                // phi = E_{b,a}: (phi Q)(x_a') has two parts
                for (int r = 0; r < dn; ++r)
                    if (nq[op]->get(r, b))
                        q[op].flip(xi(a, r), xi(a, b));
                for (int c = 0; c < dm; ++c)
                    if (mq[op]->get(a, c))
                        q[op].flip(xi(c, b), xi(a, b));
            }

    // A slot x * v0^i v1^j sits at chart position (s, f) = (xdeg + 2j, i + j).
    // The differential (x,i,j) -> (xQ0,i+1,j) + (xQ1,i,j+1) preserves internal
    // degree, i.e. maps chart (s, f) into (s-1, f+1).
    KoszulExt out;
    struct Slot {
        int x, i, j;
    };
    auto slots_at = [&](int s, int ff) {
        std::vector<Slot> v;
        if (ff < 0)
            return v;
        if (nops == 2) {
            for (int j = 0; j <= ff; ++j) {
                int i = ff - j;
                for (int x = 0; x < dx; ++x)
                    if (xdeg[x] + 2 * j == s)
                        v.push_back({x, i, j});
            }
        }
        else {
            for (int x = 0; x < dx; ++x)
                if (xdeg[x] == s)
                    v.push_back({x, ff, 0});
        }
        return v;
    };
    for (int s = smin; s <= smax; ++s) {
        for (int f = 0; f <= fmax; ++f) {
            auto cur = slots_at(s, f), prev = slots_at(s + 1, f - 1), next = slots_at(s - 1, f + 1);
            auto build = [&](const std::vector<Slot>& dom, const std::vector<Slot>& cod) {
                std::vector<std::vector<int>> m(cod.size(), std::vector<int>(dom.size(), 0));
                for (size_t c = 0; c < dom.size(); ++c) {
                    for (int op = 0; op < nops; ++op) {
                        for (int r = 0; r < dx; ++r) {
                            if (!q[op].get(r, dom[c].x))
                                continue;
                            int ni = dom[c].i + (op == 0 ? 1 : 0);
                            int nj = dom[c].j + (op == 1 ? 1 : 0);
                            for (size_t t = 0; t < cod.size(); ++t)
                                if (cod[t].x == r && cod[t].i == ni && cod[t].j == nj)
                                    m[t][c] ^= 1;
                        }
                    }
                }
                return m;
            };
            int rk_out = cur.empty() || next.empty() ? 0 : naive_rank(build(cur, next));
            int rk_in = prev.empty() || cur.empty() ? 0 : naive_rank(build(prev, cur));
            // dim ker = |cur| - rk_out
            int h = (int)cur.size() - rk_out - rk_in;
            if (h != 0)
                out.dims[{s, f}] = h;
        }
    }
    return out;
}

inline std::mt19937_64& rng()
{
    static std::mt19937_64 g(0x9e3779b97f4a7c15ull);
    return g;
}

}  // namespace oracle
