#include "kur/steenrod.hpp"

#include <doctest.h>
#include <set>

using namespace kur;

namespace {

SteenrodMonomial xi(int i, int e = 1)
{
    SteenrodMonomial m;
    m.set_xi(i, e);
    return m;
}
SteenrodMonomial tau(int i)
{
    SteenrodMonomial m;
    m.set_tau(i, true);
    return m;
}

}  // namespace

TEST_CASE("weights")
{
    SteenrodMonomial m = xi(1);
    m.set_tau(2, true);
    CHECK(m.weight() == 6);  // 2 + 4
    CHECK(SteenrodMonomial{}.weight() == 0);
    CHECK(tau(0).weight() == 1);
}

TEST_CASE("generator degrees")
{
    CHECK(xi(1).degree() == Degree{2, 1});
    CHECK(xi(2).degree() == Degree{6, 3});
    CHECK(tau(0).degree() == Degree{1, 0});
    CHECK(tau(1).degree() == Degree{3, 1});
    CHECK(tau(2).degree() == Degree{7, 3});
}

TEST_CASE("basis enumeration")
{
    // full dual Steenrod algebra up to weight 2
    auto b = enumerate_basis(QuotientBasisSpec{-1}, 2);
    std::set<SteenrodMonomial> got(b.begin(), b.end());
    std::set<SteenrodMonomial> want = {SteenrodMonomial{}, tau(0), xi(1), tau(1)};
    CHECK(got == want);

    // A//E(0)*: tau_0 excluded
    auto b0 = enumerate_basis(QuotientBasisSpec{0}, 2);
    std::set<SteenrodMonomial> got0(b0.begin(), b0.end());
    std::set<SteenrodMonomial> want0 = {SteenrodMonomial{}, xi(1), tau(1)};
    CHECK(got0 == want0);

    CHECK(enumerate_basis(QuotientBasisSpec{3}, 0).size() == 1);

    // count check: weight <= 4 over A//E(0)*: 1, xi1, tau1, xi1^2, xi1 tau1, xi2, tau2
    CHECK(enumerate_basis(QuotientBasisSpec{0}, 4).size() == 7);
}

TEST_CASE("weight components of A//E(n)*")
{
    auto m10 = weight_component(1, 0);
    REQUIRE(m10.size() == 1);
    CHECK(m10[0].is_one());

    // M_1(1): weight exactly 2 in A//E(1)* is just xi1
    auto m11 = weight_component(1, 1);
    REQUIRE(m11.size() == 1);
    CHECK(m11[0] == xi(1));

    // M_1(2): weight exactly 4 is {xi1^2, xi2, tau2}
    auto m12 = weight_component(1, 2);
    std::set<SteenrodMonomial> got(m12.begin(), m12.end());
    std::set<SteenrodMonomial> want = {xi(1, 2), xi(2), tau(2)};
    CHECK(got == want);

    // M_0(1): weight 2 in A//E(0)* is {xi1, tau1}
    auto m01 = weight_component(0, 1);
    std::set<SteenrodMonomial> got01(m01.begin(), m01.end());
    std::set<SteenrodMonomial> want01 = {xi(1), tau(1)};
    CHECK(got01 == want01);

    // partition: basis of A//E(1)* up to weight 2K is the disjoint union of
    // the weight components
    for (int K = 0; K <= 6; ++K) {
        auto all = enumerate_basis(QuotientBasisSpec{1}, 2 * K);
        std::size_t total = 0;
        for (int k = 0; k <= K; ++k)
            total += weight_component(1, k).size();
        CHECK(all.size() == total);
    }
}

TEST_CASE("index-raising shift map")
{
    // 1 in N_0(k) maps to xi1^k
    for (int k = 0; k <= 5; ++k) {
        auto img = bg_shift_iso(1, k, SteenrodMonomial{});
        CHECK(img == xi(1, k));
        CHECK(img.degree() == deg_rho_rep * k);
    }

    // tau1 in N_0(2) maps to tau2, a shift by 2 rho
    auto img = bg_shift_iso(1, 2, tau(1));
    CHECK(img == tau(2));
    CHECK(img.degree() - tau(1).degree() == deg_rho_rep * 2);

    // bijection onto the weight component, for n = 1 and k <= 8
    for (int k = 0; k <= 8; ++k) {
        auto dom = enumerate_basis(QuotientBasisSpec{0}, k);
        auto img_set = weight_component(1, k);
        std::set<SteenrodMonomial> got;
        for (auto& x : dom) {
            auto y = bg_shift_iso(1, k, x);
            CHECK(y.degree() - x.degree() == deg_rho_rep * k);
            CHECK(y.weight() == 2 * k);
            got.insert(y);
        }
        CHECK(got.size() == dom.size());
        CHECK(got == std::set<SteenrodMonomial>(img_set.begin(), img_set.end()));
    }

    CHECK_THROWS(bg_shift_iso(1, 1, tau(1)));  // weight 2 > 1
}

TEST_CASE("Q-action generator rules")
{
    QuotientBasisSpec full{-1};

    auto r = q_action(full, tau(1), 0);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == xi(1));

    CHECK(q_action(full, xi(2), 1).empty());

    // tau1 Q1 = xi0^2 = 1
    auto r2 = q_action(full, tau(1), 1);
    REQUIRE(r2.size() == 1);
    CHECK(r2[0].is_one());

    // tau0 Q0 = 1, tau0 Q1 = 0
    auto r3 = q_action(full, tau(0), 0);
    REQUIRE(r3.size() == 1);
    CHECK(r3[0].is_one());
    CHECK(q_action(full, tau(0), 1).empty());

    // derivation: tau1 tau2 Q0 = xi1 tau2 + tau1 xi2
    SteenrodMonomial t12 = tau(1);
    t12.set_tau(2, true);
    auto r4 = q_action(full, t12, 0);
    SteenrodMonomial a = xi(1);
    a.set_tau(2, true);
    SteenrodMonomial b = xi(2);
    b.set_tau(1, true);
    MonomialSum want;
    fsum_add(want, a);
    fsum_add(want, b);
    CHECK(r4 == want);
}

TEST_CASE("Q-action properties on bases")
{
    for (int height : {-1, 0, 1}) {
        QuotientBasisSpec spec{height};
        auto basis = enumerate_basis(spec, 12);
        for (auto& m : basis) {
            for (int i : {0, 1}) {
                // Weight preservation.  The one exception is the diagonal rule
                // tau_i Q_i = 1, which drops the weight by exactly 2^i; it can
                // only fire when the monomial carries a tau_i factor.
                for (auto& t : q_action(spec, m, i)) {
                    if (t.weight() == m.weight())
                        continue;
                    CHECK(m.tau(i));
                    CHECK(t.weight() == m.weight() - (1 << i));
                }
                // Q_i^2 = 0
                MonomialSum sq;
                for (auto& t : q_action(spec, m, i))
                    for (auto& u : q_action(spec, t, i))
                        fsum_add(sq, u);
                CHECK(sq.empty());
            }
            // Q0 Q1 = Q1 Q0
            MonomialSum ab, ba;
            for (auto& t : q_action(spec, m, 1))
                for (auto& u : q_action(spec, t, 0))
                    fsum_add(ab, u);
            for (auto& t : q_action(spec, m, 0))
                for (auto& u : q_action(spec, t, 1))
                    fsum_add(ba, u);
            CHECK(ab == ba);
        }
    }
}

TEST_CASE("shift map intertwines the Q-action up to the rho-degree shift")
{
    // For each basis element x of N_0(k), Q_i(shift(x)) = shift'(Q_i(x)) where
    // shift' pads with the same xi_1 power (weights match since Q_i preserves
    // weight).
    QuotientBasisSpec dom{0}, cod{1};
    for (int k = 0; k <= 6; ++k) {
        auto basis = enumerate_basis(dom, k);
        for (auto& x : basis) {
            for (int i : {0, 1}) {
                MonomialSum lhs;
                for (auto& t : q_action(cod, bg_shift_iso(1, k, x), i))
                    fsum_add(lhs, t);
                MonomialSum rhs;
                for (auto& t : q_action(dom, x, i)) {
                    // pad the image of t so total weight is 2k again
                    SteenrodMonomial y = bg_shift_iso(1, k, t);
                    fsum_add(rhs, y);
                }
                CHECK(lhs == rhs);
            }
        }
    }
}
