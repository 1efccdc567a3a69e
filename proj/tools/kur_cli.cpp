// Command-line surface: basis enumeration, module round trips, Margolis
// homology, free-summand splitting, the classical and equivariant Ext
// engines, the rho-Bockstein, the LES induction and its verification ledger,
// cooperations/E1-page bookkeeping and chart output.

#include "kur/charts_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace kur;

namespace {

struct WindowFlags {
    int stem_min = -10, stem_max = 10, f_max = 8, weight_min = -14, weight_max = 14;
    Window win() const { return {stem_min, stem_max, f_max, weight_min, weight_max}; }
};

void add_window_flags(CLI::App* app, WindowFlags& w)
{
    app->add_option("--stem-min", w.stem_min, "lowest stem");
    app->add_option("--stem-max", w.stem_max, "highest stem");
    app->add_option("--f-max", w.f_max, "highest filtration");
    app->add_option("--weight-min", w.weight_min, "lowest weight");
    app->add_option("--weight-max", w.weight_max, "highest weight");
}

int write_out(const std::string& path, const std::string& data)
{
    if (path.empty() || path == "-") {
        std::cout << data;
        return 0;
    }
    std::ofstream f(path);
    if (!f) {
        std::cerr << "cannot open " << path << "\n";
        return 1;
    }
    f << data;
    return 0;
}

std::string join_out(const std::string& out)
{
    if (out.empty() || out == "-")
        return out;
    const char* dir = std::getenv("KUR_OUT_DIR");
    if (!dir || out.find('/') != std::string::npos)
        return out;
    return std::string(dir) + "/" + out;
}

std::string chart_text(const TriChart& ch, const std::string& format, const WindowFlags& wf)
{
    if (format == "tsv")
        return emit_tsv(ch);
    if (format == "json")
        return chart_to_json(ch).dump(2) + "\n";
    RenderSpec spec;
    spec.win = wf.win();
    return emit_svg(ch, spec);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact Ext-chart engine for the C2-equivariant ku splitting"};
    app.require_subcommand(1);

    WindowFlags wf;
    std::string out;
    std::string format = "tsv";

    auto* basis = app.add_subcommand("basis", "enumerate dual Steenrod monomials by weight");
    int b_height = 0;
    long long b_maxw = 4;
    basis->add_option("--height", b_height, "quotient height (-1 for the full algebra)");
    basis->add_option("--max-weight", b_maxw, "weight cutoff");
    basis->add_option("--format", format, "tsv | json");
    basis->add_option("--out", out, "output file");

    auto* module = app.add_subcommand("module", "build a module and emit or round-trip its JSON");
    std::string m_kind = "lightning";
    int m_k = 2;
    std::string m_load;
    module->add_option("--kind", m_kind, "lightning | bg-integral | bg-mod2");
    module->add_option("--k", m_k, "parameter (lightning index or weight cutoff)");
    module->add_option("--load", m_load, "round-trip a module JSON file");
    module->add_option("--out", out, "output file");

    auto* marg = app.add_subcommand("margolis", "Margolis homology of a built-in module");
    std::string g_kind = "bg-integral";
    int g_k = 4, g_i = 0;
    marg->add_option("--kind", g_kind, "lightning | bg-integral | bg-mod2");
    marg->add_option("--k", g_k, "module parameter");
    marg->add_option("--i", g_i, "which Milnor primitive (0 or 1)")->check(CLI::Range(0, 1));
    marg->add_option("--chart", format, "tsv | json");
    marg->add_option("--out", out, "output file");

    auto* split = app.add_subcommand("split", "split free summands off a built-in module");
    std::string s_kind = "bg-integral";
    int s_k = 6;
    split->add_option("--kind", s_kind, "lightning | bg-integral | bg-mod2");
    split->add_option("--k", s_k, "module parameter");
    split->add_option("--out", out, "output file");

    auto* extc = app.add_subcommand("ext-classical", "Ext over classical E(1) between lightning flashes");
    int ec_k = 1, ec_m = 0;
    extc->add_option("--k", ec_k, "first lightning index");
    extc->add_option("--m", ec_m, "second lightning index");
    extc->add_option("--chart", format, "tsv | json");
    add_window_flags(extc, wf);
    extc->add_option("--out", out, "output file");

    auto* exteq = app.add_subcommand("ext-eq", "equivariant closed-form Ext chart");
    int eq_k = 1, eq_m = 0;
    exteq->add_option("--k", eq_k, "first lightning index");
    exteq->add_option("--m", eq_m, "second lightning index");
    exteq->add_option("--chart", format, "tsv | json | svg");
    add_window_flags(exteq, wf);
    exteq->add_option("--out", out, "output file");

    auto* bock = app.add_subcommand("bockstein-e0", "run the rho-Bockstein for E(0)");
    bock->add_option("--chart", format, "tsv | json | svg");
    add_window_flags(bock, wf);
    bock->add_option("--out", out, "output file");

    auto* induct = app.add_subcommand("induct", "LES-engine derivation of an equivariant Ext chart");
    int in_k = 1, in_m = 0;
    induct->add_option("--k", in_k, "first lightning index");
    induct->add_option("--m", in_m, "second lightning index");
    induct->add_option("--chart", format, "tsv | json | svg");
    add_window_flags(induct, wf);
    induct->add_option("--out", out, "output file");

    auto* verify = app.add_subcommand("verify", "cross-derivation and collapse bookkeeping");
    int v_kmax = 2, v_mmax = 2;
    verify->add_option("--k-max", v_kmax, "largest first index");
    verify->add_option("--m-max", v_mmax, "largest second index");
    add_window_flags(verify, wf);
    verify->add_option("--out", out, "ledger output file");

    auto* coop = app.add_subcommand("cooperations", "cooperations summand decomposition");
    int c_k = 1;
    coop->add_option("--k", c_k, "summand parameter");
    add_window_flags(coop, wf);
    coop->add_option("--out", out, "output file");

    auto* e1 = app.add_subcommand("e1-page", "E1-page of the ku-based Adams spectral sequence");
    int e_nmax = 2;
    e1->add_option("--n-max", e_nmax, "deepest smash power");
    add_window_flags(e1, wf);
    e1->add_option("--out", out, "output file");

    auto* chart = app.add_subcommand("chart", "render a point chart");
    int ch_height = 1;
    chart->add_option("--height", ch_height, "0 or 1")->check(CLI::Range(0, 1));
    chart->add_option("--chart", format, "tsv | json | svg");
    add_window_flags(chart, wf);
    chart->add_option("--out", out, "output file");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto build_module = [&](const std::string& kind, int k) -> EModule {
        if (kind == "lightning")
            return lightning_flash(k);
        if (kind == "bg-integral")
            return bg_homology_module(k, 0);
        if (kind == "bg-mod2")
            return bg_homology_module(k, -1);
        throw std::invalid_argument("unknown module kind " + kind);
    };

    try {
        if (basis->parsed()) {
            auto monos = enumerate_basis(QuotientBasisSpec{b_height}, b_maxw);
            if (format == "json") {
                nlohmann::json j = nlohmann::json::array();
                for (auto& m : monos)
                    j.push_back(monomial_to_json(m));
                return write_out(join_out(out), j.dump(2) + "\n");
            }
            std::ostringstream os;
            os << "name\tstem\tweight\tmahowald_weight\n";
            for (auto& m : monos) {
                Degree d = m.degree();
                os << m.str() << '\t' << d.stem << '\t' << d.weight << '\t' << m.weight() << '\n';
            }
            return write_out(join_out(out), os.str());
        }
        if (module->parsed()) {
            EModule m = m_load.empty() ? build_module(m_kind, m_k) : [&] {
                std::ifstream f(m_load);
                if (!f)
                    throw std::invalid_argument("cannot open " + m_load);
                nlohmann::json j;
                f >> j;
                return module_from_json(j);
            }();
            return write_out(join_out(out), module_to_json(m).dump(2) + "\n");
        }
        if (marg->parsed()) {
            auto m = build_module(g_kind, g_k);
            if (g_i > m.height)
                throw std::invalid_argument("module has no such operator");
            auto r = margolis_homology(m, g_i);
            return write_out(join_out(out),
                             format == "json" ? margolis_to_json(r).dump(2) + "\n" : emit_tsv(r));
        }
        if (split->parsed()) {
            auto m = build_module(s_kind, s_k);
            auto r = split_free_summands(m);
            nlohmann::json j;
            j["reduced"] = module_to_json(r.reduced);
            j["free_generators"] = nlohmann::json::array();
            for (auto& [d, n] : r.free_gens.ranks)
                j["free_generators"].push_back({{"stem", d.stem}, {"weight", d.weight}, {"count", n}});
            return write_out(join_out(out), j.dump(2) + "\n");
        }
        if (extc->parsed()) {
            auto w = wf.win();
            auto chart2 = ext_classical(lightning_flash(ec_k, Variant::classical),
                                        lightning_flash(ec_m, Variant::classical), w.stem_min, w.stem_max,
                                        w.f_max);
            return write_out(join_out(out), format == "json" ? bigraded_to_json(chart2).dump(2) + "\n"
                                                             : emit_tsv(chart2));
        }
        if (exteq->parsed())
            return write_out(join_out(out),
                             chart_text(closed_form_equivariant(eq_k, eq_m, wf.win()), format, wf));
        if (bock->parsed())
            return write_out(join_out(out), chart_text(rho_bockstein_E0(wf.win()), format, wf));
        if (induct->parsed())
            return write_out(join_out(out), chart_text(induct_ext(in_k, in_m, wf.win()), format, wf));
        if (verify->parsed()) {
            auto w = wf.win();
            nlohmann::json ledger = nlohmann::json::array();
            bool ok = true;
            for (int k = 0; k <= v_kmax; ++k)
                for (int m = 0; m <= v_mmax; ++m) {
                    std::string why;
                    bool eq =
                        tricharts_equal(induct_ext(k, m, w), closed_form_equivariant(k, m, w), 3, &why);
                    ok = ok && eq;
                    ledger.push_back(
                        {{"assertion", "cross-derivation"}, {"k", k}, {"m", m}, {"pass", eq}, {"detail", why}});
                    std::cout << "cross-derivation k=" << k << " m=" << m << ": "
                              << (eq ? "pass" : "FAIL " + why) << "\n";
                }
            auto rep = verify_collapse_bookkeeping(v_kmax, v_mmax, w);
            for (auto& e : rep.entries)
                std::cout << e.assertion << " k=" << e.k << " m=" << e.m << ": "
                          << (e.pass ? "pass" : "FAIL") << "\n";
            for (auto& e : report_to_json(rep))
                ledger.push_back(e);
            ok = ok && rep.all_pass();
            if (!out.empty())
                write_out(join_out(out), ledger.dump(2) + "\n");
            return ok ? 0 : 1;
        }
        if (coop->parsed()) {
            auto dec = cooperations(c_k, wf.win());
            nlohmann::json j;
            j["k"] = c_k;
            j["parts"] = nlohmann::json::array();
            for (auto& p : dec.parts) {
                const char* kind = p.kind == SummandKind::hz_tower     ? "hz-tower"
                                   : p.kind == SummandKind::ku_tower   ? "ku-tower"
                                   : p.kind == SummandKind::free_class ? "free-class"
                                                                       : "adams-cover";
                j["parts"].push_back({{"kind", kind},
                                      {"shift", {p.shift.s, p.shift.f, p.shift.w}},
                                      {"index", p.index},
                                      {"provenance", p.provenance}});
            }
            j["extensions"] = nlohmann::json::array();
            for (auto& e : dec.extensions)
                j["extensions"].push_back({{"rule", e.op}, {"from", e.from}, {"to", e.to}});
            return write_out(join_out(out), j.dump(2) + "\n");
        }
        if (e1->parsed()) {
            auto page = e1_page(e_nmax, wf.win());
            nlohmann::json j;
            j["rows"] = nlohmann::json::array();
            for (auto& r : page.rows)
                j["rows"].push_back({{"n", r.n},
                                     {"I", r.I.parts},
                                     {"lightning_index", r.lightning_index},
                                     {"shift", {r.shift.s, r.shift.f, r.shift.w}}});
            j["totals"] = nlohmann::json::array();
            for (auto& [key, n] : page.totals)
                j["totals"].push_back({{"s", std::get<0>(key)},
                                       {"f", std::get<1>(key)},
                                       {"w", std::get<2>(key)},
                                       {"cone", std::get<3>(key) ? "nc" : "pc"},
                                       {"dim", n}});
            return write_out(join_out(out), j.dump(2) + "\n");
        }
        if (chart->parsed())
            return write_out(join_out(out), chart_text(ext_m2_m2(ch_height, wf.win()), format, wf));
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
