#pragma once

// Trigraded F2 charts: named classes with (stem, filtration, weight) and cone
// data, partial operator actions for rho, v0, v1, tau^4 and tau^2 v0, and the
// derived bookkeeping (v1-freeness, Part A/B assignment, divisible families).

#include "kur/ext_classical.hpp"
#include "kur/grading.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace kur {

enum Op : int { OP_RHO = 0, OP_V0 = 1, OP_V1 = 2, OP_TAU4 = 3, OP_TAU2V0 = 4, OP_COUNT = 5 };

inline ExtDeg op_deg(int op)
{
    switch (op) {
        case OP_RHO: return {-1, 0, -1};
        case OP_V0: return {0, 1, 0};
        case OP_V1: return {2, 1, 1};
        case OP_TAU4: return {0, 0, -4};
        default: return {0, 1, -2};
    }
}

inline const char* op_name(int op)
{
    static const char* names[] = {"rho", "v0", "v1", "tau4", "tau2v0"};
    return names[op];
}

// Engine bookkeeping tags; carried through homology untouched.
enum SeedTag : uint8_t {
    TAG_NONE = 0,
    TAG_E0_F0,    // filtration-0 seed of an E(0) copy
    TAG_E1_UNIT,  // the unit of an E(1) copy
    TAG_E1_NC_ODD,  // gamma/tau^odd basis class of an E(1) copy
    TAG_E1_B2,      // gamma/(rho^2 tau^{4t+2}) class of an E(1) copy
    TAG_X_GEN,      // current x generator (k > m phase)
    TAG_XP_GEN,     // current x' generator family member
};

struct ChartClass {
    ExtDeg deg;
    Cone cone = Cone::positive;
    std::string name;
    int copy = -1;   // staircase copy index; -1 for everything else
    int age = -1;    // y-copy age in the k > m phase; -1 for non-y classes
    uint8_t tag = TAG_NONE;
    bool ext_src = false;         // eligible source of a v1 extension edge
    bool underlying_keep = false;  // survives the comparison with the underlying chart
};

struct TriChart {
    Window win;
    std::vector<ChartClass> cls;
    std::array<std::map<int, int>, OP_COUNT> act;  // class index -> class index

    int add(ExtDeg d, Cone c, std::string name)
    {
        if (!win.contains(d))
            return -1;
        ChartClass cc;
        cc.deg = d;
        cc.cone = c;
        cc.name = std::move(name);
        cls.push_back(std::move(cc));
        return (int)cls.size() - 1;
    }

    void edge(int op, int from, int to)
    {
        if (from < 0 || to < 0)
            return;
        act[op][from] = to;
    }

    int action(int op, int idx) const
    {
        auto it = act[op].find(idx);
        return it == act[op].end() ? -1 : it->second;
    }

    std::map<ExtDeg, std::vector<int>> by_position() const
    {
        std::map<ExtDeg, std::vector<int>> out;
        for (int i = 0; i < (int)cls.size(); ++i)
            out[cls[i].deg].push_back(i);
        return out;
    }
};

// Shift every class; classes leaving the window are dropped together with
// their edges.
inline TriChart suspend_chart(const TriChart& c, ExtDeg shift)
{
    TriChart out;
    out.win = c.win;
    std::vector<int> remap(c.cls.size(), -1);
    for (int i = 0; i < (int)c.cls.size(); ++i) {
        ExtDeg d = c.cls[i].deg + shift;
        if (!out.win.contains(d))
            continue;
        ChartClass cc = c.cls[i];
        cc.deg = d;
        remap[i] = (int)out.cls.size();
        out.cls.push_back(std::move(cc));
    }
    for (int op = 0; op < OP_COUNT; ++op)
        for (auto& [a, b] : c.act[op])
            if (remap[a] >= 0 && remap[b] >= 0)
                out.act[op][remap[a]] = remap[b];
    return out;
}

inline void merge_into(TriChart& dst, const TriChart& src)
{
    int off = (int)dst.cls.size();
    for (auto& c : src.cls)
        dst.cls.push_back(c);
    for (int op = 0; op < OP_COUNT; ++op)
        for (auto& [a, b] : src.act[op])
            dst.act[op][a + off] = b + off;
}

// v1 torsion state from the edge graph.  A chain ending at a missing edge is
// torsion when the would-be target position is still inside the window and
// undecidable when the chain runs off the window edge (in stem, filtration or
// weight).
enum class V1State : uint8_t { torsion, free_chain, unknown };

inline std::vector<V1State> chart_v1_state(const TriChart& c)
{
    std::vector<uint8_t> state(c.cls.size(), 255);
    std::function<V1State(int)> eval = [&](int i) -> V1State {
        if (state[i] != 255)
            return (V1State)state[i];
        state[i] = (uint8_t)V1State::torsion;  // cycles impossible: degree increases
        V1State r;
        int j = c.action(OP_V1, i);
        if (j >= 0)
            r = eval(j);
        else
            r = c.win.contains(c.cls[i].deg + op_deg(OP_V1)) ? V1State::torsion : V1State::unknown;
        state[i] = (uint8_t)r;
        return r;
    };
    std::vector<V1State> out(c.cls.size());
    for (int i = 0; i < (int)c.cls.size(); ++i)
        out[i] = eval(i);
    return out;
}

// Two-valued view: unknown chains (window-edge chains) count as free.
inline std::vector<bool> chart_v1_free(const TriChart& c)
{
    auto st = chart_v1_state(c);
    std::vector<bool> out(c.cls.size());
    for (std::size_t i = 0; i < st.size(); ++i)
        out[i] = st[i] != V1State::torsion;
    return out;
}

// Part A/B assignment: walk to the rho-base of the class (multiplication for
// the positive cone, division for the negative cone), then apply the mod-4
// weight rules for v1-tower generators and rho-tower bases.
inline std::vector<char> chart_parts(const TriChart& c)
{
    auto v1f = chart_v1_free(c);
    // reverse rho edges for positive-cone walks
    std::map<int, int> rho_in;
    for (auto& [a, b] : c.act[OP_RHO])
        rho_in[b] = a;
    std::vector<char> out(c.cls.size(), '?');
    for (int i = 0; i < (int)c.cls.size(); ++i) {
        int base = i;
        if (c.cls[i].cone == Cone::positive) {
            for (int guard = 0; guard < 256; ++guard) {
                auto it = rho_in.find(base);
                if (it == rho_in.end())
                    break;
                base = it->second;
            }
        }
        else {
            for (int guard = 0; guard < 256; ++guard) {
                int j = c.action(OP_RHO, base);
                if (j < 0)
                    break;
                base = j;
            }
            // the base of a divisible family is its least divided member,
            // which is where the rho-multiplication chain ends
        }
        int s = c.cls[base].deg.s;
        int w = c.cls[base].deg.w;
        int n = (s % 2 == 0) ? s / 2 : (s + 1) / 2;
        int r = ((w - n) % 4 + 4) % 4;
        // v1-tower generators land on r = 0 (A) or r = 2 (B); rho-tower and
        // divisible-family bases use n, n+3 -> A and n+1, n+2 -> B.  The two
        // rules agree where both apply, so a single residue test suffices.
        out[i] = (r == 0 || r == 3) ? 'A' : 'B';
    }
    return out;
}

// Divisible-family metadata derived from the class/edge structure: maximal
// rho-chains of filtration-0 negative-cone classes, reported by their least
// divided member visible in the window.
struct FamilyDesc {
    ExtDeg base;
    int length;  // members materialized in the window
    bool open_right;  // still divisible at the window edge
};

inline std::vector<FamilyDesc> chart_divisible_families(const TriChart& c)
{
    std::map<int, int> rho_in;
    for (auto& [a, b] : c.act[OP_RHO])
        if (c.cls[a].cone == Cone::negative)
            rho_in[b] = a;
    std::vector<FamilyDesc> out;
    for (int i = 0; i < (int)c.cls.size(); ++i) {
        if (c.cls[i].cone != Cone::negative || c.cls[i].deg.f != 0)
            continue;
        if (c.action(OP_RHO, i) >= 0)
            continue;  // not the least divided member
        int len = 1;
        int cur = i;
        while (true) {
            auto it = rho_in.find(cur);
            if (it == rho_in.end())
                break;
            cur = it->second;
            ++len;
        }
        if (len < 2)
            continue;
        bool open = !c.win.contains(c.cls[cur].deg + ExtDeg{1, 0, 1});
        out.push_back({c.cls[i].deg, len, open});
    }
    std::sort(out.begin(), out.end(), [](const FamilyDesc& a, const FamilyDesc& b) {
        if (a.base != b.base)
            return a.base < b.base;
        return a.length < b.length;
    });
    return out;
}

// Chart equality up to relabeling: equal dimensions per (degree, cone) and
// equal counts of completed operator words out of every position.
inline bool tricharts_equal(const TriChart& a, const TriChart& b, int max_word = 4,
                            std::string* why = nullptr)
{
    using Key = std::pair<ExtDeg, Cone>;
    auto dims = [](const TriChart& c) {
        std::map<Key, int> d;
        for (auto& cc : c.cls)
            ++d[{cc.deg, cc.cone}];
        return d;
    };
    auto da = dims(a), db = dims(b);
    if (da != db) {
        if (why) {
            *why = "dimension tables differ";
            for (auto& [k, v] : da) {
                auto it = db.find(k);
                if (it == db.end() || it->second != v) {
                    *why += " at (" + std::to_string(k.first.s) + "," + std::to_string(k.first.f) + "," +
                            std::to_string(k.first.w) + (k.second == Cone::negative ? ",nc)" : ",pc)");
                    break;
                }
            }
            for (auto& [k, v] : db)
                if (!da.count(k)) {
                    *why += " extra (" + std::to_string(k.first.s) + "," + std::to_string(k.first.f) + "," +
                            std::to_string(k.first.w) + (k.second == Cone::negative ? ",nc)" : ",pc)");
                    break;
                }
        }
        return false;
    }

    // enumerate words over the five operators
    std::vector<std::vector<int>> words;
    std::vector<std::vector<int>> frontier{{}};
    for (int l = 0; l < max_word; ++l) {
        std::vector<std::vector<int>> next;
        for (auto& w : frontier)
            for (int op = 0; op < OP_COUNT; ++op) {
                auto w2 = w;
                w2.push_back(op);
                words.push_back(w2);
                next.push_back(w2);
            }
        frontier = std::move(next);
        if (words.size() > 4000)
            break;
    }

    auto counts = [&](const TriChart& c) {
        std::map<Key, std::vector<int>> byk;
        for (int i = 0; i < (int)c.cls.size(); ++i)
            byk[{c.cls[i].deg, c.cls[i].cone}].push_back(i);
        // word -> key -> completed count
        std::map<Key, std::vector<int>> fp;
        for (auto& [k, idxs] : byk) {
            std::vector<int> v;
            v.reserve(words.size());
            for (auto& w : words) {
                int n = 0;
                for (int i : idxs) {
                    int cur = i;
                    bool ok = true;
                    for (int op : w) {
                        cur = c.action(op, cur);
                        if (cur < 0) {
                            ok = false;
                            break;
                        }
                    }
                    if (ok)
                        ++n;
                }
                v.push_back(n);
            }
            fp[k] = std::move(v);
        }
        return fp;
    };
    auto fa = counts(a), fb = counts(b);
    for (auto& [k, v] : fa) {
        auto it = fb.find(k);
        if (it == fb.end() || it->second != v) {
            if (why)
                *why = "action fingerprint differs at (" + std::to_string(k.first.s) + "," +
                       std::to_string(k.first.f) + "," + std::to_string(k.first.w) +
                       (k.second == Cone::negative ? ",nc)" : ",pc)");
            return false;
        }
    }
    return true;
}

// Forget weight and negative cone, keep the classes marked as visible to the
// underlying comparison, and read the v0/v1 edges between kept classes.
inline BigradedChart underlying_comparison(const TriChart& c)
{
    BigradedChart out;
    std::map<int, std::pair<std::pair<int, int>, int>> pos;  // class -> ((s,f), slot)
    for (int i = 0; i < (int)c.cls.size(); ++i) {
        if (!c.cls[i].underlying_keep || c.cls[i].cone == Cone::negative)
            continue;
        auto key = std::make_pair(c.cls[i].deg.s, c.cls[i].deg.f);
        pos[i] = {key, out.dims[key]++};
    }
    for (int op : {OP_V0, OP_V1}) {
        int target_op = op == OP_V0 ? 0 : 1;
        for (auto& [a, b] : c.act[op]) {
            auto ia = pos.find(a);
            auto ib = pos.find(b);
            if (ia == pos.end() || ib == pos.end())
                continue;
            auto from = ia->second.first;
            auto& m = out.action[target_op][from];
            auto to = BigradedChart::op_shift(target_op, from);
            if (m.rows() == 0)
                m = F2Matrix(out.dims[to], out.dims[from]);
            m.set(ib->second.second, ia->second.second, true);
        }
    }
    return out;
}

}  // namespace kur
