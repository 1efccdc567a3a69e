#include "kur/charts_io.hpp"

#include <doctest.h>

using namespace kur;

namespace {
Window win{-6, 6, 5, -8, 8};
}

TEST_CASE("TSV round trip and stability")
{
    auto c = ext_m2_m2(1, win);
    auto tsv = emit_tsv(c);
    CHECK(tsv == emit_tsv(c));  // byte-stable
    auto back = parse_tsv(tsv, win);
    CHECK(tricharts_equal(back, c, 3));

    // empty chart: header only
    TriChart empty;
    empty.win = win;
    CHECK(emit_tsv(empty) == "# class\ts\tf\tw\tcone\tpart\tname\n");
}

TEST_CASE("TSV row count matches classes plus edges")
{
    Window small{-2, 2, 2, -4, 4};
    auto c = ext_m2_m2(0, small);
    auto tsv = emit_tsv(c);
    std::size_t rows = 0;
    for (char ch : tsv)
        if (ch == '\n')
            ++rows;
    std::size_t edges = 0;
    for (int op = 0; op < OP_COUNT; ++op)
        edges += c.act[op].size();
    CHECK(rows == 1 + c.cls.size() + edges);
}

TEST_CASE("module JSON round trip")
{
    for (auto m : {lightning_flash(3), bg_homology_module(4, 0), bg_homology_module(3, -1)}) {
        auto j = module_to_json(m);
        auto back = module_from_json(j);
        CHECK(back.names == m.names);
        CHECK(back.degs == m.degs);
        CHECK(back.q0 == m.q0);
        if (m.height == 1)
            CHECK(back.q1 == m.q1);
    }
}

TEST_CASE("chart JSON carries classes, actions and families")
{
    auto c = ext_m2_m2(1, win);
    auto j = chart_to_json(c);
    CHECK(j["classes"].size() == c.cls.size());
    CHECK(j.contains("divisible_families"));
    CHECK(j["actions"].contains("v1"));
}

TEST_CASE("SVG is structurally sound")
{
    auto c = ext_m2_m2(1, win);
    RenderSpec spec;
    spec.win = win;
    auto svg = emit_svg(c, spec);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("Part A") != std::string::npos);
    CHECK(svg.find("Part B") != std::string::npos);
    // every circle element is closed, and the counts match the window classes
    std::size_t circles = 0, pos = 0;
    while ((pos = svg.find("<circle", pos)) != std::string::npos) {
        ++circles;
        pos += 7;
    }
    std::size_t expected = 0;
    for (auto& cc : c.cls)
        if (spec.win.contains(cc.deg))
            ++expected;
    CHECK(circles == expected);
    CHECK(svg == emit_svg(c, spec));  // deterministic

    // an empty chart still renders valid panels
    TriChart empty;
    empty.win = win;
    auto esvg = emit_svg(empty, spec);
    CHECK(esvg.rfind("<svg", 0) == 0);
    CHECK(esvg.find("</svg>") != std::string::npos);
    CHECK(esvg.find("<circle") == std::string::npos);
}

TEST_CASE("SVG structural counts for a closed form with a rho pair")
{
    Window w{-6, 4, 5, -10, 10};
    auto c = closed_form_equivariant(2, 0, w);
    RenderSpec spec;
    spec.win = w;
    auto svg = emit_svg(c, spec);
    // the pair classes at stems -3 and -4 are present and rho-linked; count
    // the dots at their filtration-1 row in part A
    CHECK(svg.find("marker-end") != std::string::npos);  // tower/divisibility arrows exist
    CHECK(svg.find("<line") != std::string::npos);
}

TEST_CASE("margolis TSV")
{
    auto r = margolis_homology(lightning_flash(2), 1);
    auto tsv = emit_tsv(r);
    CHECK(tsv.find("stem\tweight\tdim") == 0);
    CHECK(tsv.find("4\t2\t1") != std::string::npos);
}

TEST_CASE("bigraded and Margolis JSON")
{
    auto chart = closed_form_classical(1, 0, -6, 6, 4);
    auto j = bigraded_to_json(chart);
    CHECK(j["classes"].size() == chart.dims.size());
    CHECK(j["actions"].contains("v0"));

    auto r = margolis_homology(lightning_flash(2), 0);
    auto mj = margolis_to_json(r);
    CHECK(mj.size() == r.dims.size());
}

TEST_CASE("monomial JSON uses two exponent lists")
{
    SteenrodMonomial m;
    m.set_xi(1, 2);
    m.set_tau(2, true);
    auto j = monomial_to_json(m);
    CHECK(j["xi_exps"] == nlohmann::json::array({2}));
    CHECK(j["tau_flags"] == nlohmann::json::array({0, 0, 1}));
    CHECK(j["name"] == "xi1^2 tau2");
}
