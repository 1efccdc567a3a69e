#pragma once

// Serialization: TSV and JSON for charts, modules and reports, and the SVG
// chart renderer with the Part A / Part B split.

#include "kur/assembly.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace kur {

// ---------------------------------------------------------------------------
// TSV

// Classes then edges, lexicographically sorted, byte-stable.
inline std::string emit_tsv(const TriChart& ch)
{
    auto parts = chart_parts(ch);
    std::vector<std::size_t> order(ch.cls.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    auto key = [&](std::size_t i) {
        const auto& c = ch.cls[i];
        return std::make_tuple(c.deg.s, c.deg.f, c.deg.w, (int)c.cone, c.name);
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    std::vector<std::size_t> rank(ch.cls.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        rank[order[i]] = i;

    std::ostringstream out;
    out << "# class\ts\tf\tw\tcone\tpart\tname\n";
    for (std::size_t i : order) {
        const auto& c = ch.cls[i];
        out << "class\t" << c.deg.s << '\t' << c.deg.f << '\t' << c.deg.w << '\t'
            << (c.cone == Cone::negative ? "nc" : "pc") << '\t' << parts[i] << '\t' << c.name << '\n';
    }
    std::vector<std::string> edges;
    for (int op = 0; op < OP_COUNT; ++op)
        for (auto& [a, b] : ch.act[op]) {
            std::ostringstream e;
            e << "edge\t" << op_name(op) << '\t' << rank[a] << '\t' << rank[b];
            edges.push_back(e.str());
        }
    std::sort(edges.begin(), edges.end());
    for (auto& e : edges)
        out << e << '\n';
    return out.str();
}

inline TriChart parse_tsv(const std::string& text, Window win)
{
    TriChart ch;
    ch.win = win;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::string kind;
        std::getline(ls, kind, '\t');
        if (kind == "class") {
            std::string s, f, w, cone, part, name;
            std::getline(ls, s, '\t');
            std::getline(ls, f, '\t');
            std::getline(ls, w, '\t');
            std::getline(ls, cone, '\t');
            std::getline(ls, part, '\t');
            std::getline(ls, name, '\t');
            int idx = ch.add({std::stoi(s), std::stoi(f), std::stoi(w)},
                             cone == "nc" ? Cone::negative : Cone::positive, name);
            (void)idx;
        }
        else if (kind == "edge") {
            std::string op, a, b;
            std::getline(ls, op, '\t');
            std::getline(ls, a, '\t');
            std::getline(ls, b, '\t');
            for (int o = 0; o < OP_COUNT; ++o)
                if (op == op_name(o))
                    ch.edge(o, std::stoi(a), std::stoi(b));
        }
    }
    return ch;
}

inline std::string emit_tsv(const BigradedChart& ch)
{
    std::ostringstream out;
    out << "s\tf\tdim\n";
    for (auto& [pos, d] : ch.dims)
        out << pos.first << '\t' << pos.second << '\t' << d << '\n';
    return out.str();
}

inline std::string emit_tsv(const MargolisResult& r)
{
    std::ostringstream out;
    out << "stem\tweight\tdim\n";
    for (auto& [d, n] : r.dims)
        out << d.stem << '\t' << d.weight << '\t' << n << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json monomial_to_json(const SteenrodMonomial& m)
{
    nlohmann::json j;
    j["xi_exps"] = m.xi_exps;
    j["tau_flags"] = nlohmann::json::array();
    for (char f : m.tau_flags)
        j["tau_flags"].push_back((int)f);
    j["name"] = m.str();
    Degree d = m.degree();
    j["degree"] = {d.stem, d.weight};
    j["weight"] = m.weight();
    return j;
}

inline nlohmann::json module_to_json(const EModule& m)
{
    nlohmann::json j;
    j["variant"] = m.variant == Variant::classical ? "classical" : "equivariant";
    j["height"] = m.height;
    j["basis"] = nlohmann::json::array();
    for (std::size_t i = 0; i < m.dim(); ++i)
        j["basis"].push_back({{"name", m.names[i]}, {"stem", m.degs[i].stem}, {"weight", m.degs[i].weight}});
    auto mat = [&](const F2Matrix& a) {
        nlohmann::json t = nlohmann::json::array();
        for (std::size_t r = 0; r < a.rows(); ++r)
            for (std::size_t c = 0; c < a.cols(); ++c)
                if (a.get(r, c))
                    t.push_back({r, c});
        return t;
    };
    j["q0"] = mat(m.q0);
    if (m.height == 1)
        j["q1"] = mat(m.q1);
    return j;
}

inline EModule module_from_json(const nlohmann::json& j)
{
    EModule m;
    m.variant = j.at("variant") == "classical" ? Variant::classical : Variant::equivariant;
    m.height = j.at("height");
    for (auto& b : j.at("basis")) {
        m.names.push_back(b.at("name"));
        m.degs.push_back({b.at("stem"), b.at("weight")});
    }
    std::size_t n = m.names.size();
    m.q0 = F2Matrix(n, n);
    m.q1 = m.height == 1 ? F2Matrix(n, n) : F2Matrix();
    for (auto& e : j.at("q0"))
        m.q0.set(e.at(0), e.at(1), true);
    if (m.height == 1)
        for (auto& e : j.at("q1"))
            m.q1.set(e.at(0), e.at(1), true);
    validate(m);
    return m;
}

inline nlohmann::json chart_to_json(const TriChart& ch)
{
    auto parts = chart_parts(ch);
    nlohmann::json j;
    j["window"] = {{"stem_min", ch.win.stem_min}, {"stem_max", ch.win.stem_max},
                   {"f_max", ch.win.f_max},       {"weight_min", ch.win.weight_min},
                   {"weight_max", ch.win.weight_max}};
    j["classes"] = nlohmann::json::array();
    for (std::size_t i = 0; i < ch.cls.size(); ++i) {
        const auto& c = ch.cls[i];
        j["classes"].push_back({{"s", c.deg.s},
                                {"f", c.deg.f},
                                {"w", c.deg.w},
                                {"cone", c.cone == Cone::negative ? "nc" : "pc"},
                                {"part", std::string(1, parts[i])},
                                {"name", c.name}});
    }
    j["actions"] = nlohmann::json::object();
    for (int op = 0; op < OP_COUNT; ++op) {
        nlohmann::json edges = nlohmann::json::array();
        for (auto& [a, b] : ch.act[op])
            edges.push_back({a, b});
        j["actions"][op_name(op)] = edges;
    }
    j["divisible_families"] = nlohmann::json::array();
    for (auto& fam : chart_divisible_families(ch))
        j["divisible_families"].push_back({{"s", fam.base.s},
                                           {"f", fam.base.f},
                                           {"w", fam.base.w},
                                           {"length", fam.length},
                                           {"open", fam.open_right}});
    return j;
}

inline nlohmann::json bigraded_to_json(const BigradedChart& ch)
{
    nlohmann::json j;
    j["classes"] = nlohmann::json::array();
    for (auto& [pos, d] : ch.dims)
        j["classes"].push_back({{"s", pos.first}, {"f", pos.second}, {"dim", d}});
    j["actions"] = nlohmann::json::object();
    for (int op : {0, 1}) {
        nlohmann::json edges = nlohmann::json::array();
        for (auto& [pos, m] : ch.action[op])
            for (std::size_t r = 0; r < m.rows(); ++r)
                for (std::size_t c = 0; c < m.cols(); ++c)
                    if (m.get(r, c))
                        edges.push_back({{"s", pos.first}, {"f", pos.second}, {"from", c}, {"to", r}});
        j["actions"][op == 0 ? "v0" : "v1"] = edges;
    }
    return j;
}

inline nlohmann::json margolis_to_json(const MargolisResult& r)
{
    nlohmann::json j = nlohmann::json::array();
    for (auto& [d, n] : r.dims)
        j.push_back({{"stem", d.stem}, {"weight", d.weight}, {"dim", n}});
    return j;
}

inline nlohmann::json report_to_json(const CollapseReport& rep)
{
    nlohmann::json j = nlohmann::json::array();
    for (auto& e : rep.entries)
        j.push_back({{"assertion", e.assertion},
                     {"k", e.k},
                     {"m", e.m},
                     {"location", {e.at.s, e.at.f, e.at.w}},
                     {"expected", e.expected},
                     {"found", e.found},
                     {"pass", e.pass}});
    return j;
}

// ---------------------------------------------------------------------------
// SVG

struct RenderSpec {
    Window win{-8, 8, 8, -20, 20};
    bool split_parts = true;
    bool show_weights = false;
    double dot_radius = 3.0;
    double cell = 24.0;
};

namespace svgdetail {

inline std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace svgdetail

// Two panels (Part A, Part B) of dots and structure lines.  Vertical lines
// are v0-multiplications, horizontal lines rho-multiplications, diagonals v1;
// rho-towers end in a leftward arrow, rho-divisible families in a rightward
// one.  Layout is deterministic: classes at one (s, f) spot are fanned out by
// fixed sub-offsets in their sorted order.
inline std::string emit_svg(const TriChart& ch, const RenderSpec& spec)
{
    auto parts = chart_parts(ch);
    const Window& w = spec.win;
    int cols = w.stem_max - w.stem_min + 1;
    int rows = w.f_max + 1;
    double cell = spec.cell;
    double margin = 2 * cell;
    double panel_w = cols * cell + margin;
    double panel_h = rows * cell + 2 * margin;
    int npanels = spec.split_parts ? 2 : 1;

    // deterministic order and per-position offsets
    std::vector<std::size_t> order(ch.cls.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        auto ka = std::make_tuple(ch.cls[a].deg.s, ch.cls[a].deg.f, ch.cls[a].deg.w, (int)ch.cls[a].cone,
                                  ch.cls[a].name);
        auto kb = std::make_tuple(ch.cls[b].deg.s, ch.cls[b].deg.f, ch.cls[b].deg.w, (int)ch.cls[b].cone,
                                  ch.cls[b].name);
        return ka < kb;
    });
    std::map<std::pair<int, int>, int> seen;
    std::vector<std::pair<double, double>> xy(ch.cls.size(), {-1, -1});
    std::vector<bool> drawn(ch.cls.size(), false);
    auto panel_of = [&](std::size_t i) { return spec.split_parts && parts[i] == 'B' ? 1 : 0; };
    for (std::size_t i : order) {
        const auto& c = ch.cls[i];
        if (!(c.deg.s >= w.stem_min && c.deg.s <= w.stem_max && c.deg.f >= 0 && c.deg.f <= w.f_max &&
              c.deg.w >= w.weight_min && c.deg.w <= w.weight_max))
            continue;
        int slot = seen[{c.deg.s, c.deg.f + 1000 * (int)panel_of(i)}]++;
        double dx = (slot % 3) * 2.5 * spec.dot_radius - 2.5 * spec.dot_radius;
        double dy = (slot / 3) * 2.5 * spec.dot_radius;
        double px = panel_of(i) * panel_w;
        xy[i] = {px + margin / 2 + (c.deg.s - w.stem_min) * cell + cell / 2 + dx,
                 panel_h - margin + 0.0 - c.deg.f * cell - cell / 2 - dy};
        drawn[i] = true;
    }

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svgdetail::fmt(npanels * panel_w)
        << "\" height=\"" << svgdetail::fmt(panel_h) << "\">\n";
    out << "<defs><marker id=\"arr\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" "
           "orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\"/></marker></defs>\n";
    for (int p = 0; p < npanels; ++p) {
        out << "<text x=\"" << svgdetail::fmt(p * panel_w + margin / 2) << "\" y=\"" << svgdetail::fmt(cell)
            << "\" font-size=\"14\">Part " << (p == 0 ? 'A' : 'B') << "</text>\n";
        // axes
        out << "<line x1=\"" << svgdetail::fmt(p * panel_w + margin / 2) << "\" y1=\""
            << svgdetail::fmt(panel_h - margin) << "\" x2=\"" << svgdetail::fmt(p * panel_w + panel_w - margin / 2)
            << "\" y2=\"" << svgdetail::fmt(panel_h - margin) << "\" stroke=\"#888\"/>\n";
    }
    // structure lines
    struct Line {
        int op;
        std::size_t a, b;
    };
    for (int op : {OP_V0, OP_RHO, OP_V1}) {
        for (auto& [a, b] : ch.act[op]) {
            if (!drawn[a] || !drawn[b])
                continue;
            if (spec.split_parts && panel_of(a) != panel_of(b))
                continue;
            out << "<line x1=\"" << svgdetail::fmt(xy[a].first) << "\" y1=\"" << svgdetail::fmt(xy[a].second)
                << "\" x2=\"" << svgdetail::fmt(xy[b].first) << "\" y2=\"" << svgdetail::fmt(xy[b].second)
                << "\" stroke=\"" << (op == OP_V1 ? "#55a" : "#333") << "\" stroke-width=\"1\"/>\n";
        }
    }
    // family arrows: rho-towers leftward (positive cone chains that reach the
    // window edge), divisible families rightward
    for (std::size_t i = 0; i < ch.cls.size(); ++i) {
        if (!drawn[i] || ch.cls[i].deg.f != 0 || ch.cls[i].cone != Cone::positive)
            continue;
        // a rho-tower runs off the left edge: draw the leftward arrow
        if (ch.action(OP_RHO, (int)i) < 0 && !w.contains(ch.cls[i].deg + op_deg(OP_RHO)))
            out << "<line x1=\"" << svgdetail::fmt(xy[i].first) << "\" y1=\"" << svgdetail::fmt(xy[i].second)
                << "\" x2=\"" << svgdetail::fmt(xy[i].first - cell * 0.8) << "\" y2=\""
                << svgdetail::fmt(xy[i].second) << "\" stroke=\"#333\" marker-end=\"url(#arr)\"/>\n";
    }
    for (auto& fam : chart_divisible_families(ch)) {
        // draw a rightward arrow at the base of each open divisible family
        if (!fam.open_right)
            continue;
        for (std::size_t i = 0; i < ch.cls.size(); ++i)
            if (drawn[i] && ch.cls[i].deg == fam.base && ch.cls[i].cone == Cone::negative) {
                out << "<line x1=\"" << svgdetail::fmt(xy[i].first) << "\" y1=\""
                    << svgdetail::fmt(xy[i].second) << "\" x2=\"" << svgdetail::fmt(xy[i].first + cell * 0.8)
                    << "\" y2=\"" << svgdetail::fmt(xy[i].second)
                    << "\" stroke=\"#a33\" marker-end=\"url(#arr)\"/>\n";
                break;
            }
    }
    // dots
    for (std::size_t i = 0; i < ch.cls.size(); ++i) {
        if (!drawn[i])
            continue;
        out << "<circle cx=\"" << svgdetail::fmt(xy[i].first) << "\" cy=\"" << svgdetail::fmt(xy[i].second)
            << "\" r=\"" << svgdetail::fmt(spec.dot_radius) << "\" fill=\""
            << (ch.cls[i].cone == Cone::negative ? "#a33" : "#226") << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace kur
