#pragma once

// RO(C2) degrees in the motivic (stem, weight) convention, windows, and the
// coefficient ring M2 of the C2-equivariant point: F2[tau, rho] in the
// positive cone plus an infinitely divisible square-zero negative cone.

#include <cassert>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace kur {

struct Degree {
    int stem = 0;
    int weight = 0;

    friend Degree operator+(Degree a, Degree b) { return {a.stem + b.stem, a.weight + b.weight}; }
    friend Degree operator-(Degree a, Degree b) { return {a.stem - b.stem, a.weight - b.weight}; }
    Degree operator*(int k) const { return {stem * k, weight * k}; }
    auto operator<=>(const Degree&) const = default;

    int milnor_witt() const { return stem - weight; }
};

// Suspension degrees: the regular representation rho = 1 + sigma and the sign
// representation sigma, in motivic (stem, weight) coordinates.
inline constexpr Degree deg_rho_rep{2, 1};
inline constexpr Degree deg_sigma_rep{1, 1};
inline constexpr Degree deg_one{1, 0};

// additive RO(C2) notation: the degree of a * 1 + b * sigma
inline constexpr Degree ro_c2(int a, int b) { return {a + b, b}; }

struct ExtDeg {
    int s = 0;
    int f = 0;
    int w = 0;

    friend ExtDeg operator+(ExtDeg a, ExtDeg b) { return {a.s + b.s, a.f + b.f, a.w + b.w}; }
    friend ExtDeg operator-(ExtDeg a, ExtDeg b) { return {a.s - b.s, a.f - b.f, a.w - b.w}; }
    auto operator<=>(const ExtDeg&) const = default;

    int milnor_witt() const { return s - w; }
};

// Trigraded box. filtration runs over [0, f_max].
struct Window {
    int stem_min = 0, stem_max = 0;
    int f_max = 0;
    int weight_min = 0, weight_max = 0;

    bool contains(ExtDeg d) const
    {
        return d.s >= stem_min && d.s <= stem_max && d.f >= 0 && d.f <= f_max && d.w >= weight_min &&
               d.w <= weight_max;
    }
    bool contains(Degree d) const
    {
        return d.stem >= stem_min && d.stem <= stem_max && d.weight >= weight_min && d.weight <= weight_max;
    }
    Window padded(int stems, int fs, int weights) const
    {
        return {stem_min - stems, stem_max + stems, f_max + fs, weight_min - weights, weight_max + weights};
    }
};

enum class Cone : uint8_t { positive, negative };

// A monomial of M2.  Positive cone: rho^a tau^b with a, b >= 0 and degree
// (-a, -a-b).  Negative cone: gamma/(rho^a tau^b) with a >= 0, b >= 1 and
// degree (a, 1+a+b).  gamma itself is never a value.
struct M2Monomial {
    Cone cone = Cone::positive;
    int rho_exp = 0;  // exponent of rho (positive cone) or of its divisor (negative cone)
    int tau_exp = 0;  // likewise for tau; negative cone requires tau_exp >= 1

    bool is_unit() const { return cone == Cone::positive && rho_exp == 0 && tau_exp == 0; }

    Degree degree() const
    {
        if (cone == Cone::positive)
            return {-rho_exp, -rho_exp - tau_exp};
        return {rho_exp, 1 + rho_exp + tau_exp};
    }

    auto operator<=>(const M2Monomial&) const = default;

    std::string str() const
    {
        auto pw = [](const std::string& v, int e) {
            if (e == 0)
                return std::string{};
            if (e == 1)
                return v;
            return v + "^" + std::to_string(e);
        };
        if (cone == Cone::positive) {
            std::string s = pw("rho", rho_exp);
            std::string t = pw("tau", tau_exp);
            if (s.empty() && t.empty())
                return "1";
            if (s.empty())
                return t;
            if (t.empty())
                return s;
            return s + " " + t;
        }
        std::string d = pw("rho", rho_exp);
        std::string t = pw("tau", tau_exp);
        std::string div = d.empty() ? t : (t.empty() ? d : d + " " + t);
        return "g/(" + div + ")";
    }
};

inline M2Monomial m2_one() { return {}; }
inline M2Monomial m2_rho(int a = 1) { return {Cone::positive, a, 0}; }
inline M2Monomial m2_tau(int b = 1) { return {Cone::positive, 0, b}; }
inline M2Monomial m2_nc(int a, int b)
{
    assert(a >= 0 && b >= 1);
    return {Cone::negative, a, b};
}

// The unique monomial in a given degree, when the degree lies in one of the
// two cones of M2.
inline std::optional<M2Monomial> m2_basis_in_degree(Degree d)
{
    if (d.stem <= 0 && d.weight <= d.stem)
        return M2Monomial{Cone::positive, -d.stem, d.stem - d.weight};
    if (d.stem >= 0 && d.weight >= d.stem + 2)
        return M2Monomial{Cone::negative, d.stem, d.weight - 1 - d.stem};
    return std::nullopt;
}

// Product of monomials; nullopt encodes zero.  NC * NC = 0, and a positive
// monomial acts on the negative cone by dividing out exponents; the result is
// zero as soon as a divisor exponent leaves its legal range.
inline std::optional<M2Monomial> m2_mono_multiply(M2Monomial x, M2Monomial y)
{
    if (x.cone == Cone::positive && y.cone == Cone::positive)
        return M2Monomial{Cone::positive, x.rho_exp + y.rho_exp, x.tau_exp + y.tau_exp};
    if (x.cone == Cone::negative && y.cone == Cone::negative)
        return std::nullopt;
    const M2Monomial& pos = x.cone == Cone::positive ? x : y;
    const M2Monomial& neg = x.cone == Cone::negative ? x : y;
    int a = neg.rho_exp - pos.rho_exp;
    int b = neg.tau_exp - pos.tau_exp;
    if (a < 0 || b < 1)
        return std::nullopt;
    return M2Monomial{Cone::negative, a, b};
}

// A formal F2-sum of M2 monomials.  Since M2 is at most one-dimensional per
// bidegree, sums are just supports.
struct M2Element {
    std::set<M2Monomial> terms;

    M2Element() = default;
    M2Element(M2Monomial m) { terms.insert(m); }

    bool is_zero() const { return terms.empty(); }

    void add(const M2Monomial& m)
    {
        auto [it, inserted] = terms.insert(m);
        if (!inserted)
            terms.erase(it);
    }
    void operator+=(const M2Element& o)
    {
        for (const auto& m : o.terms)
            add(m);
    }
    bool operator==(const M2Element& o) const = default;
};

inline M2Element m2_multiply(const M2Element& x, const M2Element& y)
{
    M2Element out;
    for (const auto& a : x.terms)
        for (const auto& b : y.terms)
            if (auto p = m2_mono_multiply(a, b))
                out.add(*p);
    return out;
}

// Coefficient action of the Milnor primitives on M2, dual to the right unit
// of the equivariant dual Steenrod algebroid: Q0(tau) = rho, Q1(tau^2) = rho^3,
// extended with the exponent rules below.  Treat tau exponents as integers
// (negative in the divided cone) and clamp illegal monomials to zero.
namespace detail {

// tau-exponent as a signed integer and back, with legality clamping
inline std::optional<M2Monomial> shift_mono(M2Monomial m, int drho, int dtau)
{
    // Signed exponents: positive cone (a, b) -> (a, b); negative (a, b) -> (-a, -b).
    int a = m.cone == Cone::positive ? m.rho_exp : -m.rho_exp;
    int b = m.cone == Cone::positive ? m.tau_exp : -m.tau_exp;
    a += drho;
    b += dtau;
    if (a >= 0 && b >= 0)
        return M2Monomial{Cone::positive, a, b};
    if (a <= 0 && b <= -1)
        return M2Monomial{Cone::negative, -a, -b};
    return std::nullopt;  // mixed signs: zero in M2
}

inline int signed_tau_exp(const M2Monomial& m) { return m.cone == Cone::positive ? m.tau_exp : -m.tau_exp; }

}  // namespace detail

// Q0 on a coefficient monomial: b * rho tau^{b-1} rho^a, i.e. nonzero iff the
// tau exponent is odd.
inline M2Element m2_q0_coeff(const M2Monomial& m)
{
    int b = detail::signed_tau_exp(m);
    M2Element out;
    if ((b & 1) == 0)
        return out;
    if (auto t = detail::shift_mono(m, 1, -1))
        out.add(*t);
    return out;
}

// Q1 on a coefficient monomial: C(b,2) rho^3 tau^{b-2}.
inline M2Element m2_q1_coeff(const M2Monomial& m)
{
    long long b = detail::signed_tau_exp(m);
    long long c2 = b * (b - 1) / 2;
    M2Element out;
    if ((c2 & 1) == 0)
        return out;
    if (auto t = detail::shift_mono(m, 3, -2))
        out.add(*t);
    return out;
}

// Cross term in the twisted Leibniz rule for Q1: Q1(c m) also picks up
// b rho^2 tau^{b-1} . Q0(m).
inline M2Element m2_q1_cross_coeff(const M2Monomial& m)
{
    int b = detail::signed_tau_exp(m);
    M2Element out;
    if ((b & 1) == 0)
        return out;
    if (auto t = detail::shift_mono(m, 2, -1))
        out.add(*t);
    return out;
}

}  // namespace kur
