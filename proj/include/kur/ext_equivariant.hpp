#pragma once

// Trigraded equivariant Ext charts: the closed forms over E(0) and E(1), the
// rho-Bockstein engine at height 0, the Ext charts of lightning flashes in
// both the k <= m and k > m regimes, and the comparison map to the classical
// charts.
//
// Conventions for the E(1) chart of the point (generators of Table 1 shape):
// positive cone monomials rho^a tau^{4b} v0^c (tau^2 v0)^e v1^d with
// a (c+e) = 0 and e <= 1, plus four negative-cone families
//   A: gamma/(rho^i tau^{4t}),               i >= 0, t >= 1
//   B: v1^d gamma/(rho^i tau^{4t+2}),        0 <= i <= 2
//   C: v0^c v1^d gamma/tau^{4t+3}
//   D: v0^c v1^d gamma/tau^{4t+1}
// with v0 B(2,d) = C(0,d+1) and tau^2 v0 B(2,d) = D(0,d+1) forced by the
// relation v1 gamma/tau^{4t+3} = v0 gamma/(rho^2 tau^{4t+2}).

#include "kur/emod.hpp"
#include "kur/margolis.hpp"
#include "kur/trichart.hpp"

#include <functional>
#include <string>

namespace kur {

namespace chartdetail {

inline std::string expo(const std::string& v, int e)
{
    if (e == 0)
        return {};
    if (e == 1)
        return v;
    return v + "^" + std::to_string(e);
}

inline std::string join(std::initializer_list<std::string> parts)
{
    std::string out;
    for (auto& p : parts) {
        if (p.empty())
            continue;
        if (!out.empty())
            out += ' ';
        out += p;
    }
    return out.empty() ? std::string("1") : out;
}

// index lookup for positional edge installation
struct PosIndex {
    std::map<std::pair<ExtDeg, int>, std::vector<int>> slots;  // (deg, copy/age-key)
    void build(const TriChart& c, bool by_age)
    {
        slots.clear();
        for (int i = 0; i < (int)c.cls.size(); ++i)
            slots[{c.cls[i].deg, by_age ? c.cls[i].age : c.cls[i].copy}].push_back(i);
    }
};

}  // namespace chartdetail

// ---------------------------------------------------------------------------
// E(1) chart of the point, with survival thresholding used for the remnant
// copies inside Ext(L(k), L(m)) for k > m.  q = 0 builds the full chart.

struct E1CopyOptions {
    ExtDeg base{0, 0, 0};
    int copy = -1;
    int q = 0;          // survival threshold; 0 keeps everything
    bool tag_engine = false;
};

inline void append_e1_m2m2(TriChart& ch, const E1CopyOptions& opt)
{
    const Window& w = ch.win;
    auto S = opt.base;
    // generous exponent bounds from the window
    int smin = w.stem_min, smax = w.stem_max, fmax = w.f_max;
    int wspan = w.weight_max - w.weight_min + 8;

    std::map<std::array<int, 5>, int> pos;  // (a,b,c,e,d) -> idx
    auto pos_deg = [&](int a, int b, int c, int e, int d) {
        return S + ExtDeg{-a + 2 * d, c + e + d, -a - 4 * b - 2 * e + d};
    };
    auto pos_ok = [&](int a, int b, int c, int e, int d) {
        if (a < 0 || b < 0 || c < 0 || e < 0 || e > 1 || d < 0)
            return false;
        if (a > 0 && c + e > 0)
            return false;
        if (d >= 1 && a > 2)
            return false;
        if (opt.q > 0 && !(a >= 1 || d >= opt.q))
            return false;
        return w.contains(pos_deg(a, b, c, e, d));
    };
    auto pos_name = [&](int a, int b, int c, int e, int d) {
        using chartdetail::expo;
        return chartdetail::join({expo("rho", a), expo("tau4", b), expo("v0", c), expo("t2v0", e),
                                  expo("v1", d)});
    };
    // enumerate within the window; rho-multiples can pull classes back into
    // the window even when the copy's base sits to its right, so the v1
    // exponent is bounded by the filtration cap alone
    (void)smax;
    for (int d = 0; d <= fmax + 1; ++d)
        for (int c = 0; c + d <= fmax + 1; ++c)
            for (int e = 0; e <= 1; ++e) {
                if (c + e + d > fmax + 1)
                    continue;
                for (int a = 0; S.s - a + 2 * d >= smin - 1 || a == 0; ++a) {
                    if (a > 0 && S.s - a + 2 * d < smin - 1)
                        break;
                    for (int b = 0; b <= wspan; ++b) {
                        if (!pos_ok(a, b, c, e, d))
                            continue;
                        int idx = ch.add(pos_deg(a, b, c, e, d), Cone::positive, pos_name(a, b, c, e, d));
                        if (idx < 0)
                            continue;
                        pos[{a, b, c, e, d}] = idx;
                        auto& cc = ch.cls[idx];
                        cc.copy = opt.copy;
                        cc.underlying_keep = (a == 0 && b == 0 && e == 0);
                        if (opt.tag_engine && a + b + c + e + d == 0)
                            cc.tag = TAG_E1_UNIT;
                        cc.ext_src = (a == 0);
                    }
                }
            }
    auto pfind = [&](int a, int b, int c, int e, int d) -> int {
        if (e >= 2) {  // (tau^2 v0)^2 = tau^4 v0^2
            b += 1;
            c += 2;
            e -= 2;
        }
        auto it = pos.find({a, b, c, e, d});
        return it == pos.end() ? -1 : it->second;
    };
    for (auto& [key, idx] : pos) {
        auto [a, b, c, e, d] = key;
        if (c + e == 0 && pos_ok(a + 1, b, c, e, d))
            ch.edge(OP_RHO, idx, pfind(a + 1, b, c, e, d));
        if (a == 0)
            ch.edge(OP_V0, idx, pfind(0, b, c + 1, e, d));
        if (a == 0)
            ch.edge(OP_TAU2V0, idx, pfind(0, b, c, e + 1, d));
        if (a <= 2)
            ch.edge(OP_V1, idx, pfind(a, b, c, e, d + 1));
        ch.edge(OP_TAU4, idx, pfind(a, b + 1, c, e, d));
    }

    // negative cone families
    std::map<std::array<int, 4>, int> nc[4];  // family -> (i_or_c, d, t, 0)
    auto nc_deg = [&](int fam, int i_or_c, int d, int t) -> ExtDeg {
        switch (fam) {
            case 0: return S + ExtDeg{i_or_c, 0, 1 + i_or_c + 4 * (t + 1)};        // A, t >= 0 meaning tau^{4(t+1)}
            case 1: return S + ExtDeg{i_or_c + 2 * d, d, 3 + i_or_c + 4 * t + d};  // B
            case 2: return S + ExtDeg{2 * d, i_or_c + d, 4 + 4 * t + d};           // C (i_or_c = c)
            default: return S + ExtDeg{2 * d, i_or_c + d, 2 + 4 * t + d};          // D
        }
    };
    auto nc_ok = [&](int fam, int i_or_c, int d, int t) {
        if (i_or_c < 0 || d < 0 || t < 0)
            return false;
        if (fam == 0 && d != 0)
            return false;
        if (fam == 1 && i_or_c > 2)
            return false;
        if (opt.q > 0) {
            if (fam == 1 && !(i_or_c <= 1 || d >= opt.q - 1))
                return false;
            if ((fam == 2 || fam == 3) && d < opt.q)
                return false;
        }
        return w.contains(nc_deg(fam, i_or_c, d, t));
    };
    auto nc_name = [&](int fam, int i_or_c, int d, int t) {
        using chartdetail::expo;
        std::string g;
        switch (fam) {
            case 0: g = "g/(" + chartdetail::join({expo("rho", i_or_c), expo("tau", 4 * t + 4)}) + ")"; break;
            case 1: g = "g/(" + chartdetail::join({expo("rho", i_or_c), expo("tau", 4 * t + 2)}) + ")"; break;
            case 2: g = "g/tau^" + std::to_string(4 * t + 3); break;
            default: g = "g/tau^" + std::to_string(4 * t + 1); break;
        }
        std::string v = chartdetail::join({fam >= 2 ? expo("v0", i_or_c) : "", expo("v1", d)});
        return v == "1" ? g : v + " " + g;
    };
    for (int fam = 0; fam < 4; ++fam)
        for (int t = 0; t <= wspan / 4 + 2; ++t)
            for (int d = 0; d <= fmax + 2; ++d)
                for (int ic = 0; ic <= std::max(fmax + 2, smax - smin + 2); ++ic) {
                    if (!nc_ok(fam, ic, d, t))
                        continue;
                    int idx = ch.add(nc_deg(fam, ic, d, t), Cone::negative, nc_name(fam, ic, d, t));
                    if (idx < 0)
                        continue;
                    nc[fam][{ic, d, t, 0}] = idx;
                    auto& cc = ch.cls[idx];
                    cc.copy = opt.copy;
                    if (opt.tag_engine) {
                        if ((fam == 2 || fam == 3) && ic == 0 && d == 0)
                            cc.tag = TAG_E1_NC_ODD;
                        if (fam == 1 && ic == 2 && d == 0)
                            cc.tag = TAG_E1_B2;
                    }
                    if (fam == 2 || fam == 3)
                        cc.ext_src = true;
                }
    auto nfind = [&](int fam, int ic, int d, int t) -> int {
        auto it = nc[fam].find({ic, d, t, 0});
        return it == nc[fam].end() ? -1 : it->second;
    };
    for (int fam = 0; fam < 4; ++fam)
        for (auto& [key, idx] : nc[fam]) {
            auto [ic, d, t, z] = key;
            switch (fam) {
                case 0:  // A: rho divides, tau4 divides
                    if (ic >= 1)
                        ch.edge(OP_RHO, idx, nfind(0, ic - 1, 0, t));
                    ch.edge(OP_TAU4, idx, nfind(0, ic, 0, t - 1));
                    break;
                case 1:  // B
                    if (ic >= 1)
                        ch.edge(OP_RHO, idx, nfind(1, ic - 1, d, t));
                    ch.edge(OP_V1, idx, nfind(1, ic, d + 1, t));
                    ch.edge(OP_TAU4, idx, nfind(1, ic, d, t - 1));
                    if (ic == 2) {
                        ch.edge(OP_V0, idx, nfind(2, 0, d + 1, t));
                        ch.edge(OP_TAU2V0, idx, nfind(3, 0, d + 1, t));
                    }
                    break;
                case 2:  // C
                    ch.edge(OP_V0, idx, nfind(2, ic + 1, d, t));
                    ch.edge(OP_V1, idx, nfind(2, ic, d + 1, t));
                    ch.edge(OP_TAU4, idx, nfind(2, ic, d, t - 1));
                    ch.edge(OP_TAU2V0, idx, nfind(3, ic + 1, d, t));
                    break;
                default:  // D
                    ch.edge(OP_V0, idx, nfind(3, ic + 1, d, t));
                    ch.edge(OP_V1, idx, nfind(3, ic, d + 1, t));
                    ch.edge(OP_TAU4, idx, nfind(3, ic, d, t - 1));
                    if (t >= 1)
                        ch.edge(OP_TAU2V0, idx, nfind(2, ic + 1, d, t - 1));
                    break;
            }
        }
}

// ---------------------------------------------------------------------------
// E(0) chart of the point: F2[rho, tau^2, v0]/(rho v0) plus the two-family
// negative cone.

struct E0CopyOptions {
    ExtDeg base{0, 0, 0};
    int copy = -1;
    bool tag_engine = false;
};

inline void append_e0_m2m2(TriChart& ch, const E0CopyOptions& opt)
{
    const Window& w = ch.win;
    auto S = opt.base;
    int wspan = w.weight_max - w.weight_min + 8;

    std::map<std::array<int, 3>, int> pos;  // (a, B, c): rho^a tau^{2B} v0^c, a c = 0
    auto pdeg = [&](int a, int B, int c) { return S + ExtDeg{-a, c, -a - 2 * B}; };
    for (int a = 0; S.s - a >= w.stem_min - 1 || a == 0; ++a) {
        if (a > 0 && S.s - a < w.stem_min - 1)
            break;
        for (int B = 0; B <= wspan; ++B)
            for (int c = 0; c <= w.f_max + 1; ++c) {
                if (a > 0 && c > 0)
                    continue;
                ExtDeg d = pdeg(a, B, c);
                if (!w.contains(d))
                    continue;
                using chartdetail::expo;
                int idx = ch.add(d, Cone::positive,
                                 chartdetail::join({expo("rho", a), expo("tau2", B), expo("v0", c)}));
                if (idx < 0)
                    continue;
                pos[{a, B, c}] = idx;
                auto& cc = ch.cls[idx];
                cc.copy = opt.copy;
                cc.underlying_keep = (a == 0 && B == 0);
                cc.ext_src = (a == 0);
                if (opt.tag_engine && a == 0 && c == 0)
                    cc.tag = TAG_E0_F0;
            }
    }
    auto pfind = [&](int a, int B, int c) -> int {
        auto it = pos.find({a, B, c});
        return it == pos.end() ? -1 : it->second;
    };
    for (auto& [key, idx] : pos) {
        auto [a, B, c] = key;
        if (c == 0)
            ch.edge(OP_RHO, idx, pfind(a + 1, B, 0));
        if (a == 0) {
            ch.edge(OP_V0, idx, pfind(0, B, c + 1));
            ch.edge(OP_TAU2V0, idx, pfind(0, B + 1, c + 1));
        }
        ch.edge(OP_TAU4, idx, pfind(a, B + 2, c));
    }

    // negative cone: grid gamma/(rho^j tau^{2n}) at f = 0 and v0-towers on
    // gamma/tau^{2n+1}
    std::map<std::array<int, 2>, int> grid;
    std::map<std::array<int, 2>, int> odd;
    for (int j = 0; S.s + j <= w.stem_max + 1; ++j)
        for (int n = 1; n <= wspan; ++n) {
            ExtDeg d = S + ExtDeg{j, 0, 1 + j + 2 * n};
            if (!w.contains(d))
                continue;
            using chartdetail::expo;
            int idx = ch.add(d, Cone::negative,
                             "g/(" + chartdetail::join({expo("rho", j), expo("tau", 2 * n)}) + ")");
            if (idx < 0)
                continue;
            grid[{j, n}] = idx;
            ch.cls[idx].copy = opt.copy;
        }
    for (int c = 0; c <= w.f_max + 1; ++c)
        for (int n = 0; n <= wspan; ++n) {
            ExtDeg d = S + ExtDeg{0, c, 2 * n + 2};
            if (!w.contains(d))
                continue;
            using chartdetail::expo;
            int idx = ch.add(d, Cone::negative,
                             chartdetail::join({expo("v0", c)}) == "1"
                                 ? "g/tau^" + std::to_string(2 * n + 1)
                                 : chartdetail::join({expo("v0", c)}) + " g/tau^" + std::to_string(2 * n + 1));
            if (idx < 0)
                continue;
            odd[{c, n}] = idx;
            auto& cc = ch.cls[idx];
            cc.copy = opt.copy;
            cc.ext_src = true;
            if (opt.tag_engine && c == 0)
                cc.tag = TAG_E0_F0;
        }
    auto gfind = [&](int j, int n) -> int {
        auto it = grid.find({j, n});
        return it == grid.end() ? -1 : it->second;
    };
    auto ofind = [&](int c, int n) -> int {
        auto it = odd.find({c, n});
        return it == odd.end() ? -1 : it->second;
    };
    for (auto& [key, idx] : grid) {
        auto [j, n] = key;
        if (j >= 1)
            ch.edge(OP_RHO, idx, gfind(j - 1, n));
        if (n >= 3)
            ch.edge(OP_TAU4, idx, gfind(j, n - 2));
    }
    for (auto& [key, idx] : odd) {
        auto [c, n] = key;
        ch.edge(OP_V0, idx, ofind(c + 1, n));
        if (n >= 2)
            ch.edge(OP_TAU4, idx, ofind(c, n - 2));
        if (n >= 1)
            ch.edge(OP_TAU2V0, idx, ofind(c + 1, n - 1));
    }
}

inline TriChart ext_m2_m2(int height, Window win)
{
    TriChart ch;
    ch.win = win;
    if (height == 0)
        append_e0_m2m2(ch, {});
    else
        append_e1_m2m2(ch, {});
    return ch;
}

// Ext_{E(0)}(M2, M2) with its E(1)-module structure: the same chart; v1 acts
// as zero (no v1 edges are present by construction).
inline TriChart ext_E0_as_E1_module(Window win) { return ext_m2_m2(0, win); }

// ---------------------------------------------------------------------------
// W cones: one full M2 worth of filtration-0 classes, based at the socle of a
// free E(0)-summand of L(m).

inline void append_w_cone(TriChart& ch, ExtDeg base)
{
    const Window& w = ch.win;
    int wspan = w.weight_max - w.weight_min + 8;
    std::map<std::array<int, 2>, int> posm, ncm;
    for (int A = 0; base.s - A >= w.stem_min - 1 || A == 0; ++A) {
        if (A > 0 && base.s - A < w.stem_min - 1)
            break;
        for (int B = 0; B <= wspan; ++B) {
            ExtDeg d = base + ExtDeg{-A, 0, -A - B};
            if (!w.contains(d))
                continue;
            using chartdetail::expo;
            int idx = ch.add(d, Cone::positive,
                             "W " + chartdetail::join({expo("rho", A), expo("tau", B)}));
            if (idx < 0)
                continue;
            posm[{A, B}] = idx;
            ch.cls[idx].underlying_keep = (A == 0 && B == 0);
        }
    }
    for (int j = 0; base.s + j <= w.stem_max + 1; ++j)
        for (int b = 1; b <= wspan; ++b) {
            ExtDeg d = base + ExtDeg{j, 0, 1 + j + b};
            if (!w.contains(d))
                continue;
            using chartdetail::expo;
            int idx = ch.add(d, Cone::negative,
                             "W g/(" + chartdetail::join({expo("rho", j), expo("tau", b)}) + ")");
            if (idx < 0)
                continue;
            ncm[{j, b}] = idx;
        }
    auto pfind = [&](int A, int B) -> int {
        auto it = posm.find({A, B});
        return it == posm.end() ? -1 : it->second;
    };
    auto nfind = [&](int j, int b) -> int {
        auto it = ncm.find({j, b});
        return it == ncm.end() ? -1 : it->second;
    };
    for (auto& [key, idx] : posm) {
        ch.edge(OP_RHO, idx, pfind(key[0] + 1, key[1]));
        ch.edge(OP_TAU4, idx, pfind(key[0], key[1] + 4));
    }
    for (auto& [key, idx] : ncm) {
        if (key[0] >= 1)
            ch.edge(OP_RHO, idx, nfind(key[0] - 1, key[1]));
        if (key[1] >= 5)
            ch.edge(OP_TAU4, idx, nfind(key[0], key[1] - 4));
    }
}

// ---------------------------------------------------------------------------
// Remnant of one y copy: the leftover of a Sigma^{-rho-1} E(0){y} summand
// after the forced differentials, with v0-tower caps depending on the family.
// caps: tau^{4b} | tau^{4b+2} | gamma/tau^{4t+3} | gamma/tau^{4t+1}; a cap of
// n keeps v0^c for c <= n.

struct YLeftoverOptions {
    ExtDeg base{0, 0, 0};
    int cap_t4 = 0, cap_t2 = 0, cap_nc3 = 0, cap_nc1 = 0;
    int age = -1;
    bool tag_target = false;  // built as a fresh les target (full towers)
};

inline void append_y_leftover(TriChart& ch, const YLeftoverOptions& opt)
{
    const Window& w = ch.win;
    auto S = opt.base;
    int wspan = w.weight_max - w.weight_min + 8;
    std::map<std::array<int, 3>, int> posm;  // (a, B, c) rho^a tau^{2B} v0^c
    auto cap_pos = [&](int B) { return (B % 2 == 0) ? opt.cap_t4 : opt.cap_t2; };
    for (int a = 0; S.s - a >= w.stem_min - 1 || a == 0; ++a) {
        if (a > 0 && S.s - a < w.stem_min - 1)
            break;
        for (int B = 0; B <= wspan; ++B)
            for (int c = 0; c <= w.f_max + 1; ++c) {
                if (c > 0 && (a > 0 || c > cap_pos(B)))
                    continue;
                ExtDeg d = S + ExtDeg{-a, c, -a - 2 * B};
                if (!w.contains(d))
                    continue;
                using chartdetail::expo;
                int idx = ch.add(d, Cone::positive,
                                 "y " + chartdetail::join({expo("rho", a), expo("tau2", B), expo("v0", c)}));
                if (idx < 0)
                    continue;
                posm[{a, B, c}] = idx;
                auto& cc = ch.cls[idx];
                cc.age = opt.age;
                cc.underlying_keep = (a == 0 && B == 0);
                cc.ext_src = (a == 0);
            }
    }
    auto pfind = [&](int a, int B, int c) -> int {
        auto it = posm.find({a, B, c});
        return it == posm.end() ? -1 : it->second;
    };
    for (auto& [key, idx] : posm) {
        auto [a, B, c] = key;
        if (c == 0)
            ch.edge(OP_RHO, idx, pfind(a + 1, B, 0));
        if (a == 0)
            ch.edge(OP_V0, idx, pfind(0, B, c + 1));
        if (a == 0)
            ch.edge(OP_TAU2V0, idx, pfind(0, B + 1, c + 1));
        ch.edge(OP_TAU4, idx, pfind(a, B + 2, c));
    }

    std::map<std::array<int, 2>, int> grid, odd;
    for (int j = 0; S.s + j <= w.stem_max + 1; ++j)
        for (int n = 1; n <= wspan; ++n) {
            ExtDeg d = S + ExtDeg{j, 0, 1 + j + 2 * n};
            if (!w.contains(d))
                continue;
            using chartdetail::expo;
            int idx = ch.add(d, Cone::negative,
                             "y g/(" + chartdetail::join({expo("rho", j), expo("tau", 2 * n)}) + ")");
            if (idx < 0)
                continue;
            grid[{j, n}] = idx;
            ch.cls[idx].age = opt.age;
        }
    auto cap_nc = [&](int n) { return (n % 2 == 0) ? opt.cap_nc1 : opt.cap_nc3; };
    for (int c = 0; c <= w.f_max + 1; ++c)
        for (int n = 0; n <= wspan; ++n) {
            if (c > cap_nc(n))
                continue;
            ExtDeg d = S + ExtDeg{0, c, 2 * n + 2};
            if (!w.contains(d))
                continue;
            using chartdetail::expo;
            std::string nm = "y g/tau^" + std::to_string(2 * n + 1);
            if (c)
                nm = expo("v0", c) + " " + nm;
            int idx = ch.add(d, Cone::negative, nm);
            if (idx < 0)
                continue;
            odd[{c, n}] = idx;
            auto& cc = ch.cls[idx];
            cc.age = opt.age;
            cc.ext_src = true;
        }
    auto gfind = [&](int j, int n) -> int {
        auto it = grid.find({j, n});
        return it == grid.end() ? -1 : it->second;
    };
    auto ofind = [&](int c, int n) -> int {
        auto it = odd.find({c, n});
        return it == odd.end() ? -1 : it->second;
    };
    for (auto& [key, idx] : grid) {
        auto [j, n] = key;
        if (j >= 1)
            ch.edge(OP_RHO, idx, gfind(j - 1, n));
        if (n >= 3)
            ch.edge(OP_TAU4, idx, gfind(j, n - 2));
    }
    for (auto& [key, idx] : odd) {
        auto [c, n] = key;
        ch.edge(OP_V0, idx, ofind(c + 1, n));
        if (n >= 2)
            ch.edge(OP_TAU4, idx, ofind(c, n - 2));
        if (n >= 1)
            ch.edge(OP_TAU2V0, idx, ofind(c + 1, n - 1));
    }
}

// The uncapped target chart Ext_{E(0)}(M2, L(m)) = E(0){y} + W cones, with
// W socles located by actually splitting L(m) as an E(0)-module.
inline TriChart ext_e0_m2_L(int m, Window win, bool tag_engine = false)
{
    TriChart ch;
    ch.win = win;
    E0CopyOptions opt;
    opt.tag_engine = false;
    append_e0_m2m2(ch, opt);
    if (tag_engine)
        for (auto& c : ch.cls)
            c.age = 0;
    if (m > 0) {
        auto split = split_free_summands(restrict_to_e0(lightning_flash(m)));
        for (auto& [deg, n] : split.free_gens.ranks) {
            Degree socle = deg - q_op_degree(0);
            for (long long i = 0; i < n; ++i)
                append_w_cone(ch, ExtDeg{socle.stem, 0, socle.weight});
        }
    }
    return ch;
}

// ---------------------------------------------------------------------------
// rho-Bockstein spectral sequence for E(0): one page of d1 on
// F2[tau, v0, rho] + divisible negative cone, then homology.

inline TriChart rho_bockstein_E0(Window win)
{
    // E1 classes: positive rho^a tau^b v0^c; negative v0^c gamma/(rho^j tau^b).
    // d1(x) is nonzero iff the tau exponent is odd (and j >= 1 in the negative
    // cone): positive x -> rho tau^{b-1} v0^{c+1} x-ish, negative divides rho.
    struct Cl {
        int a, b, c;
        bool neg;
    };
    std::vector<Cl> classes;
    std::map<std::array<int, 4>, int> index;
    auto deg_of = [&](const Cl& x) -> ExtDeg {
        if (!x.neg)
            return {-x.a, x.c, -x.a - x.b};
        return {x.a, x.c, 1 + x.a + x.b};
    };
    int wspan = win.weight_max - win.weight_min + 8;
    int sspan = win.stem_max - win.stem_min + 4;
    for (int neg = 0; neg <= 1; ++neg)
        for (int a = 0; a <= sspan + 2; ++a)
            for (int b = neg ? 1 : 0; b <= wspan; ++b)
                for (int c = 0; c <= win.f_max + 2; ++c) {
                    Cl x{a, b, c, neg == 1};
                    ExtDeg d = deg_of(x);
                    // keep one step of margin so boundaries at the window edge
                    // are accounted for
                    if (d.s < win.stem_min - 1 || d.s > win.stem_max + 1 || d.f > win.f_max + 1 ||
                        d.w < win.weight_min - 1 || d.w > win.weight_max + 1)
                        continue;
                    index[{a, b, c, neg}] = (int)classes.size();
                    classes.push_back(x);
                }
    auto d1 = [&](int i) -> int {
        const Cl& x = classes[i];
        if (x.b % 2 == 0)
            return -1;
        std::array<int, 4> key;
        if (!x.neg)
            key = {x.a + 1, x.b - 1, x.c + 1, 0};
        else {
            if (x.a == 0)
                return -1;
            key = {x.a - 1, x.b + 1, x.c + 1, 1};
        }
        auto it = index.find(key);
        return it == index.end() ? -1 : it->second;
    };
    // homology: every nonzero d1 is a bijection source -> target, so the
    // survivors are the classes with d1 = 0 that are not d1-images.
    std::vector<bool> hit(classes.size(), false);
    for (std::size_t i = 0; i < classes.size(); ++i) {
        int j = d1((int)i);
        if (j >= 0)
            hit[j] = true;
    }
    TriChart ch;
    ch.win = win;
    std::map<std::array<int, 4>, int> out_index;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const Cl& x = classes[i];
        if (d1((int)i) >= 0 || hit[i])
            continue;
        ExtDeg d = deg_of(x);
        if (!win.contains(d))
            continue;
        using chartdetail::expo;
        std::string nm =
            x.neg ? chartdetail::join({expo("v0", x.c)}) + " g/(" +
                        chartdetail::join({expo("rho", x.a), expo("tau", x.b)}) + ")"
                  : chartdetail::join({expo("rho", x.a), expo("tau", x.b), expo("v0", x.c)});
        int idx = ch.add(d, x.neg ? Cone::negative : Cone::positive, nm);
        if (idx >= 0)
            out_index[{x.a, x.b, x.c, x.neg ? 1 : 0}] = idx;
    }
    auto find_out = [&](int a, int b, int c, int neg) -> int {
        auto it = out_index.find({a, b, c, neg});
        return it == out_index.end() ? -1 : it->second;
    };
    // operator actions on survivors, by exponent arithmetic
    for (auto& [key, idx] : out_index) {
        auto [a, b, c, neg] = key;
        if (!neg) {
            if (c == 0)
                ch.edge(OP_RHO, idx, find_out(a + 1, b, c, 0));
            if (a == 0) {
                ch.edge(OP_V0, idx, find_out(0, b, c + 1, 0));
                ch.edge(OP_TAU2V0, idx, find_out(0, b + 2, c + 1, 0));
            }
            ch.edge(OP_TAU4, idx, find_out(a, b + 4, c, 0));
        }
        else {
            if (a >= 1)
                ch.edge(OP_RHO, idx, find_out(a - 1, b, c, 1));
            ch.edge(OP_V0, idx, find_out(a, b, c + 1, 1));
            if (b >= 5)
                ch.edge(OP_TAU4, idx, find_out(a, b - 4, c, 1));
            if (b >= 3)
                ch.edge(OP_TAU2V0, idx, find_out(a, b - 2, c + 1, 1));
        }
    }
    return ch;
}

// ---------------------------------------------------------------------------
// positional v1-extension edges between copies of a staircase assembly

inline void install_v1_extensions(TriChart& ch, std::function<bool(const ChartClass&)> src,
                                  std::function<bool(const ChartClass&)> dst)
{
    // index destination candidates by position
    std::map<ExtDeg, std::vector<int>> by_pos;
    for (int i = 0; i < (int)ch.cls.size(); ++i)
        if (dst(ch.cls[i]))
            by_pos[ch.cls[i].deg].push_back(i);
    // incoming v0 edges mark extension targets
    std::vector<bool> has_in_v0(ch.cls.size(), false);
    for (auto& [a, b] : ch.act[OP_V0])
        has_in_v0[b] = true;
    for (int i = 0; i < (int)ch.cls.size(); ++i) {
        if (!src(ch.cls[i]) || !ch.cls[i].ext_src)
            continue;
        if (ch.action(OP_V1, i) >= 0)
            continue;
        auto it = by_pos.find(ch.cls[i].deg + op_deg(OP_V1));
        if (it == by_pos.end())
            continue;
        int found = -1;
        int count = 0;
        for (int j : it->second)
            if (has_in_v0[j] && ch.cls[j].cone == ch.cls[i].cone) {
                found = j;
                ++count;
            }
        if (count == 1)
            ch.edge(OP_V1, i, found);
        else if (count > 1)
            throw std::logic_error("install_v1_extensions: ambiguous extension target");
    }
}


// Remnant of a consumed E(0) copy: the rho-multiples of its filtration-0 row
// and its negative-cone grid survive the forced differentials untouched.
inline void append_x0_leftover(TriChart& ch, ExtDeg base)
{
    const Window& w = ch.win;
    int wspan = w.weight_max - w.weight_min + 8;
    std::map<std::array<int, 2>, int> posm, grid;
    for (int a = 1; base.s - a >= w.stem_min - 1; ++a)
        for (int B = 0; B <= wspan; ++B) {
            ExtDeg d = base + ExtDeg{-a, 0, -a - 2 * B};
            if (!w.contains(d))
                continue;
            using chartdetail::expo;
            int idx = ch.add(d, Cone::positive,
                             "x0 " + chartdetail::join({expo("rho", a), expo("tau2", B)}));
            if (idx >= 0)
                posm[{a, B}] = idx;
        }
    for (int j = 0; base.s + j <= w.stem_max + 1; ++j)
        for (int n = 1; n <= wspan; ++n) {
            ExtDeg d = base + ExtDeg{j, 0, 1 + j + 2 * n};
            if (!w.contains(d))
                continue;
            using chartdetail::expo;
            int idx = ch.add(d, Cone::negative,
                             "x0 g/(" + chartdetail::join({expo("rho", j), expo("tau", 2 * n)}) + ")");
            if (idx >= 0)
                grid[{j, n}] = idx;
        }
    auto pfind = [&](int a, int B) -> int {
        auto it = posm.find({a, B});
        return it == posm.end() ? -1 : it->second;
    };
    auto gfind = [&](int j, int n) -> int {
        auto it = grid.find({j, n});
        return it == grid.end() ? -1 : it->second;
    };
    for (auto& [key, idx] : posm) {
        ch.edge(OP_RHO, idx, pfind(key[0] + 1, key[1]));
        ch.edge(OP_TAU4, idx, pfind(key[0], key[1] + 2));
    }
    for (auto& [key, idx] : grid) {
        if (key[0] >= 1)
            ch.edge(OP_RHO, idx, gfind(key[0] - 1, key[1]));
        if (key[1] >= 3)
            ch.edge(OP_TAU4, idx, gfind(key[0], key[1] - 2));
    }
}

// ---------------------------------------------------------------------------
// the closed forms

inline TriChart closed_form_equivariant(int k, int m, Window win)
{
    if (k < 0 || m < 0)
        throw std::invalid_argument("closed_form_equivariant: negative parameters");
    TriChart ch;
    ch.win = win;

    if (k <= m) {
        int n = m - k;
        for (int i = 0; i < n; ++i) {
            E0CopyOptions o;
            o.base = {2 * i, 0, i};
            o.copy = i;
            append_e0_m2m2(ch, o);
        }
        E1CopyOptions o1;
        o1.base = {2 * n, 0, n};
        o1.copy = n;
        append_e1_m2m2(ch, o1);
        for (int i = 0; i + 1 <= n; ++i)
            install_v1_extensions(
                ch, [i](const ChartClass& c) { return c.copy == i; },
                [i](const ChartClass& c) { return c.copy == i + 1; });
    }
    else {
        int q = k - m;
        E1CopyOptions o1;
        o1.base = {-2 * q, 0, -q};
        o1.copy = 0;
        o1.q = q;
        append_e1_m2m2(ch, o1);
        for (int j = 0; j < q; ++j) {
            int qq = q - j;
            YLeftoverOptions yo;
            yo.base = ExtDeg{-3, 0, -1} + ExtDeg{-2 * j, 0, -j};
            yo.cap_t4 = qq - 1;
            yo.cap_t2 = qq;
            yo.cap_nc3 = std::max(0, qq - 2);
            yo.cap_nc1 = qq - 1;
            yo.age = j;
            append_y_leftover(ch, yo);
        }
        // v1 y_i = v0 y_{i+1}: edges run from older copies into newer ones
        for (int j = q - 1; j >= 1; --j)
            install_v1_extensions(
                ch, [j](const ChartClass& c) { return c.age == j; },
                [j](const ChartClass& c) { return c.age == j - 1; });
    }

    // W cones and phase-1 leftovers, one batch per induction step
    auto socles = [&]() {
        std::vector<ExtDeg> out;
        if (m > 0) {
            auto split = split_free_summands(restrict_to_e0(lightning_flash(m)));
            for (auto& [deg, cnt] : split.free_gens.ranks) {
                Degree socle = deg - q_op_degree(0);
                for (long long i = 0; i < cnt; ++i)
                    out.push_back(ExtDeg{socle.stem - 3, 0, socle.weight - 1});
            }
        }
        return out;
    }();
    for (int kp = 1; kp <= k; ++kp) {
        ExtDeg S{-2 * (k - kp), 0, -(k - kp)};
        for (auto& b : socles)
            append_w_cone(ch, b + S);
        if (kp <= m) {
            YLeftoverOptions yo;
            yo.base = ExtDeg{-3, 0, -1} + S;
            append_y_leftover(ch, yo);
            append_x0_leftover(ch, ExtDeg{-2, 0, -1} + S);
        }
    }
    return ch;
}

inline TriChart closed_form_equivariant_base(Window win) { return ext_m2_m2(1, win); }

}  // namespace kur
