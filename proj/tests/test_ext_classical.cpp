#include "kur/ext_classical.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace kur;

namespace {

EModule classical_trivial(int height)
{
    EModule m;
    m.variant = Variant::classical;
    m.height = height;
    m.names = {"1"};
    m.degs = {{0, 0}};
    m.q0 = F2Matrix(1, 1);
    m.q1 = height == 1 ? F2Matrix(1, 1) : F2Matrix();
    return m;
}

EModule classical_free(int height)
{
    // free rank 1 on a generator in degree 0
    EModule m;
    m.variant = Variant::classical;
    m.height = height;
    if (height == 0) {
        m.names = {"g", "gQ0"};
        m.degs = {{0, 0}, {-1, 0}};
        m.q0 = F2Matrix(2, 2);
        m.q0.set(1, 0, true);
    }
    else {
        m.names = {"g", "gQ0", "gQ1", "gQ01"};
        m.degs = {{0, 0}, {-1, 0}, {-3, 0}, {-4, 0}};
        m.q0 = F2Matrix(4, 4);
        m.q1 = F2Matrix(4, 4);
        m.q0.set(1, 0, true);
        m.q0.set(3, 2, true);
        m.q1.set(2, 0, true);
        m.q1.set(3, 1, true);
    }
    validate(m);
    return m;
}

}  // namespace

TEST_CASE("minimal resolution of F2 over E(0) is the Koszul tower")
{
    auto res = minimal_resolution(classical_trivial(0), 8);
    REQUIRE(res.stages() == 9);
    for (int f = 0; f <= 8; ++f) {
        REQUIRE(res.gen_deg[f].size() == 1);
        CHECK(res.gen_deg[f][0] == -f);
    }
}

TEST_CASE("minimal resolution of a free module stops at stage 0")
{
    for (int h : {0, 1}) {
        auto res = minimal_resolution(classical_free(h), 5);
        CHECK(res.gen_deg[0].size() == 1);
        for (int f = 1; f <= 5; ++f)
            CHECK(res.gen_deg[f].empty());
    }
}

TEST_CASE("resolution differentials compose to zero, expanded over F2")
{
    auto M = lightning_flash(3, Variant::classical);
    auto res = minimal_resolution(M, 6);
    int nebasis = 4;
    for (int f = 2; f < res.stages(); ++f) {
        auto slots1 = detail::make_slots(res.gen_deg[f - 1], 1);
        auto slots2 = detail::make_slots(res.gen_deg[f - 2], 1);
        for (std::size_t g = 0; g < res.gen_deg[f].size(); ++g) {
            F2Vec mid(slots1.tdeg.size());
            for (std::size_t g1 = 0; g1 < res.gen_deg[f - 1].size(); ++g1)
                for (int e = 0; e < nebasis; ++e)
                    if (res.d[f][g][g1].c[e])
                        mid.flip(slots1.slot((int)g1, e));
            F2Vec out(slots2.tdeg.size());
            for (std::size_t g1 = 0; g1 < res.gen_deg[f - 1].size(); ++g1)
                for (int e1 = 0; e1 < nebasis; ++e1) {
                    if (!mid.get(slots1.slot((int)g1, e1)))
                        continue;
                    for (std::size_t g2 = 0; g2 < res.gen_deg[f - 2].size(); ++g2)
                        for (int e2 = 0; e2 < nebasis; ++e2)
                            if (res.d[f - 1][g1][g2].c[e2]) {
                                int r = ebasis_mul(e2, e1);
                                if (r >= 0)
                                    out.flip(slots2.slot((int)g2, r));
                            }
                }
            CHECK(out.is_zero());
        }
    }
}

TEST_CASE("resolution generator counts of L(1) match the closed form")
{
    auto res = minimal_resolution(lightning_flash(1, Variant::classical), 3);
    auto cf = closed_form_classical(1, 0, -14, 14, 3);
    for (int f = 0; f <= 3; ++f) {
        int total = 0;
        for (auto& [pos, d] : cf.dims)
            if (pos.second == f)
                total += d;
        CHECK((int)res.gen_deg[f].size() == total);
    }
}

TEST_CASE("Ext(F2, F2) over E(1) is the polynomial algebra F2[v0, v1]")
{
    auto t = classical_trivial(1);
    auto chart = ext_classical(t, t, -6, 10, 6);
    for (int s = -6; s <= 10; ++s)
        for (int f = 0; f <= 6; ++f) {
            int want = (s >= 0 && s % 2 == 0 && f >= s / 2) ? 1 : 0;
            CHECK(chart.dim_at(s, f) == want);
        }
    auto ko = oracle::koszul_ext(t, t, -6, 10, 6);
    for (auto& [pos, d] : chart.dims)
        CHECK(ko.at(pos.first, pos.second) == d);
}

TEST_CASE("Ext charts against the Koszul oracle for small lightning flashes")
{
    for (int k = 0; k <= 2; ++k)
        for (int m = 0; m <= 2; ++m) {
            auto M = lightning_flash(k, Variant::classical);
            auto N = lightning_flash(m, Variant::classical);
            auto chart = ext_classical(M, N, -10, 8, 5);
            auto ko = oracle::koszul_ext(M, N, -10, 8, 5);
            for (int s = -10; s <= 8; ++s)
                for (int f = 0; f <= 5; ++f) {
                    if (chart.dim_at(s, f) != ko.at(s, f))
                        MESSAGE("k=", k, " m=", m, " s=", s, " f=", f);
                    CHECK(chart.dim_at(s, f) == ko.at(s, f));
                }
        }
}

TEST_CASE("closed form versus engine, with actions")
{
    for (int k = 0; k <= 3; ++k)
        for (int m = 0; m <= 3; ++m) {
            auto chart = ext_classical(lightning_flash(k, Variant::classical),
                                       lightning_flash(m, Variant::classical), -10, 10, 6);
            auto cf = closed_form_classical(k, m, -10, 10, 6);
            std::string why;
            bool eq = charts_equal(chart, cf, 4, &why);
            if (!eq)
                MESSAGE("k=", k, " m=", m, ": ", why);
            CHECK(eq);
        }
}

TEST_CASE("known generators: Ext(L(3), F2) and Ext(F2, L(3))")
{
    auto l3 = lightning_flash(3, Variant::classical);
    auto t = classical_trivial(1);

    // lone v1-tower generator x at (0, 3)
    auto a = ext_classical(l3, t, -10, 6, 6);
    CHECK(a.dim_at(0, 3) == 1);
    CHECK(a.dim_at(0, 2) == 0);
    CHECK(a.dim_at(2, 4) == 1);
    // triangle: y_i at stem -2(3-i)-1 with tower height i+1
    CHECK(a.dim_at(-7, 0) == 1);
    CHECK(a.dim_at(-5, 0) == 1);
    CHECK(a.dim_at(-5, 1) == 1);
    CHECK(a.dim_at(-5, 2) == 0);
    CHECK(a.dim_at(-3, 0) == 1);
    CHECK(a.dim_at(-3, 1) == 1);
    CHECK(a.dim_at(-3, 2) == 1);
    CHECK(a.dim_at(-3, 3) == 0);

    // generators x_i at (2i, 0) for Ext(F2, L(3))
    auto b = ext_classical(t, l3, -4, 10, 4);
    for (int i = 0; i <= 3; ++i)
        CHECK(b.dim_at(2 * i, 0) == 1);
    CHECK(b.dim_at(8, 0) == 0);
    CHECK(b.dim_at(-1, 0) == 0);
}

TEST_CASE("additivity in the first argument")
{
    auto l1 = lightning_flash(1, Variant::classical);
    auto l2 = lightning_flash(2, Variant::classical);
    auto n = lightning_flash(1, Variant::classical);
    auto sum = direct_sum(l1, l2);
    auto cs = ext_classical(sum, n, -8, 6, 4);
    auto c1 = ext_classical(l1, n, -8, 6, 4);
    auto c2 = ext_classical(l2, n, -8, 6, 4);
    for (int s = -8; s <= 6; ++s)
        for (int f = 0; f <= 4; ++f)
            CHECK(cs.dim_at(s, f) == c1.dim_at(s, f) + c2.dim_at(s, f));
}

TEST_CASE("Ext over E(0): F2[v0]")
{
    auto t = classical_trivial(0);
    auto chart = ext_classical(t, t, -4, 4, 5);
    for (int f = 0; f <= 5; ++f)
        CHECK(chart.dim_at(0, f) == 1);
    CHECK(chart.dim_at(2, 1) == 0);
    CHECK(chart.dim_at(-1, 0) == 0);
}
