// Command-line front end.
//
// Exit codes: 0 success, 1 unexpected failure, 2 parse or usage error,
// 3 validation failure, 4 data insufficient for the requested page.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cohomolab/cechgeom.hpp"
#include "cohomolab/clifford.hpp"
#include "cohomolab/io.hpp"
#include "cohomolab/spectral.hpp"

using namespace cohomolab;
using io::Json;

namespace {

struct Report {
    std::vector<std::string> lines;
    Json json = Json::object();

    void line(const std::string& s) { lines.push_back(s); }
};

std::string fixed(double x, int digits = 12)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string sci(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

// In [0, 1), with values a rounding step below 1 folded to 0.
double unit_interval(double x)
{
    double v = mod1(x);
    return v > 1.0 - 5e-13 ? 0.0 : v;
}

double default_tolerance()
{
    const char* env = std::getenv("COHOMOLAB_TOLERANCE");
    if (!env || !*env) return 1e-9;
    char* end = nullptr;
    double t = std::strtod(env, &end);
    if (*end || !(t > 0)) throw ParseError("COHOMOLAB_TOLERANCE must be a positive number");
    return t;
}

Coefficients coefficients_of(const std::string& s)
{
    if (s == "z") return Coefficients::integers;
    if (s == "q") return Coefficients::rationals;
    if (s == "z2") return Coefficients::mod2;
    throw ParseError("unknown coefficients '" + s + "'");
}

std::string group_string(const FPAbelianGroup& g, Coefficients k)
{
    if (k != Coefficients::rationals || g.is_trivial()) return g.to_string();
    return g.free_rank == 1 ? "Q" : "Q^" + std::to_string(g.free_rank);
}

// ---------------------------------------------------------------------------

struct HomologyArgs {
    std::string file, relative, coeff = "z";
    bool reduced = false;
    std::vector<int> degrees;
};

Report cmd_homology(const HomologyArgs& a)
{
    Report r;
    const Coefficients k = coefficients_of(a.coeff);
    SimplicialComplex K = io::complex_from_json(io::read_file(a.file), a.file);
    std::optional<SimplicialPair> pair;
    if (!a.relative.empty()) {
        SimplicialComplex L = io::complex_from_json(io::read_file(a.relative), a.relative);
        if (L.vertex_count() != K.vertex_count()) throw DimensionMismatch("subcomplex has a different vertex range");
        pair = SimplicialPair(K, L);
    }
    std::vector<int> degrees = a.degrees;
    if (degrees.empty())
        for (int n = 0; n <= std::max(K.dimension(), 0); ++n) degrees.push_back(n);
    Json groups = Json::object();
    for (int n : degrees) {
        FPAbelianGroup g = pair ? pair_homology(*pair, n, k) : simplicial_homology(K, n, k, a.reduced);
        const std::string s = group_string(g, k);
        r.line(std::string(a.reduced && !pair ? "reduced " : "") + "H_" + std::to_string(n) + " = " + s);
        Json e;
        e["free_rank"] = g.free_rank;
        Json t = Json::array();
        for (auto& x : g.torsion) t.push_back(static_cast<long long>(x));
        e["torsion"] = t;
        e["text"] = s;
        groups[std::to_string(n)] = e;
    }
    r.json["coefficients"] = a.coeff;
    r.json["reduced"] = a.reduced;
    r.json["relative"] = pair.has_value();
    r.json["homology"] = groups;
    return r;
}

// ---------------------------------------------------------------------------

struct SpectralArgs {
    std::string file, mode = "filtered", theory = "z";
    int pages = 2;
    bool check_limit = false;
};

void print_page(Report& r, Json& pages, const Page& P)
{
    int pmin = 0, pmax = 0, qmin = 0, qmax = 0;
    bool first = true;
    for (auto& [k, e] : P.entries) {
        if (first) {
            pmin = pmax = k.first;
            qmin = qmax = k.second;
            first = false;
        }
        pmin = std::min(pmin, k.first);
        pmax = std::max(pmax, k.first);
        qmin = std::min(qmin, k.second);
        qmax = std::max(qmax, k.second);
    }
    std::size_t width = 4;
    for (auto& [k, e] : P.entries) width = std::max(width, e.group().to_string().size() + 2);
    r.line("E_" + std::to_string(P.r) + ":");
    Json entries = Json::object();
    for (int q = qmax; q >= qmin && !first; --q) {
        std::string row = "  q=" + std::to_string(q);
        row.resize(8, ' ');
        for (int p = pmin; p <= pmax; ++p) {
            std::string cell = P.group(p, q).to_string();
            cell.resize(width, ' ');
            row += cell;
        }
        while (!row.empty() && row.back() == ' ') row.pop_back();
        r.line(row);
    }
    if (!first) {
        std::string foot(8, ' ');
        for (int p = pmin; p <= pmax; ++p) {
            std::string cell = "p=" + std::to_string(p);
            cell.resize(width, ' ');
            foot += cell;
        }
        while (!foot.empty() && foot.back() == ' ') foot.pop_back();
        r.line(foot);
    }
    for (auto& [k, e] : P.entries)
        entries[std::to_string(k.first) + "," + std::to_string(k.second)] = e.group().to_string();
    Json pj;
    pj["r"] = P.r;
    pj["entries"] = entries;
    pj["differentials_known"] = P.differentials_known;
    pages.push_back(pj);
}

void limit_line(Report& r, const FilteredComplex& F)
{
    LimitReport L = limit_vs_total(F);
    r.line(std::string("limit check: ") + (L.ok ? "PASS" : "FAIL"));
    r.json["limit_check"] = L.ok ? "PASS" : "FAIL";
}

Report cmd_spectral(const SpectralArgs& a)
{
    Report r;
    if (a.pages < 1) throw ParseError("--pages must be at least 1");
    Json j = io::read_file(a.file);
    Json pages = Json::array();
    r.json["mode"] = a.mode;
    auto run_filtered = [&](const FilteredComplex& F) {
        for (int k = 1; k <= a.pages; ++k) print_page(r, pages, page(F, k));
        r.json["pages"] = pages;
        if (a.check_limit) limit_line(r, F);
    };
    if (a.mode == "filtered") {
        run_filtered(io::filtered_from_json(j, a.file));
    } else if (a.mode == "double-first" || a.mode == "double-second") {
        DoubleComplex D = io::double_from_json(j, a.file);
        ValidationReport v = validate_double_complex(D);
        if (!v.ok) throw NotADoubleComplex(v.message);
        run_filtered(total_complex(D, a.mode == "double-first" ? Filtration::first : Filtration::second));
    } else if (a.mode == "axiomatic") {
        FilteredComplex F = io::filtered_from_json(j, a.file);
        AxiomaticSystem S = axiomatic_system(F);
        for (int k = 1; k <= a.pages; ++k) print_page(r, pages, axiomatic_pages(S, k));
        r.json["pages"] = pages;
        if (a.check_limit) limit_line(r, F);
    } else if (a.mode == "ahss") {
        SimplicialComplex X = io::complex_from_json(j, a.file);
        CoefficientTheory t;
        if (a.theory == "z")
            t = CoefficientTheory::ordinary(FPAbelianGroup(1, {}));
        else if (a.theory == "k")
            t = CoefficientTheory::k_theory();
        else
            throw ParseError("unknown theory '" + a.theory + "'");
        AhssSequence seq(X, t);
        r.json["theory"] = a.theory;
        if (seq.up_to_extensions()) {
            r.line("note: E_infinity is determined only up to extensions");
            r.json["extension_ambiguity"] = true;
        }
        for (int k = 1; k <= a.pages; ++k) {
            Page P = seq.page(k);
            print_page(r, pages, P);
            r.json["pages"] = pages;
        }
        r.json["pages"] = pages;
        if (a.check_limit) {
            if (!seq.ordinary()) throw InsufficientData("no limit check for tabular coefficient data");
            limit_line(r, seq.filtered());
        }
    } else {
        throw ParseError("unknown mode '" + a.mode + "'");
    }
    return r;
}

// ---------------------------------------------------------------------------

struct HolonomyArgs {
    std::string data, path, type = "line-loop";
    std::optional<double> tolerance;
    bool force = false;
};

void validation(Report& r, const CocycleReport& c, bool force)
{
    r.json["cocycle_ok"] = c.ok;
    r.json["cocycle_max_error"] = c.max_error;
    if (c.ok) {
        r.line("cocycle check: OK (max error " + sci(c.max_error) + ")");
        return;
    }
    std::string what;
    for (auto& v : c.violations) what += (what.empty() ? "" : "; ") + v;
    if (!force) throw NotACocycle("cocycle check failed: " + what);
    r.line("warning: cocycle check failed (" + what + "), evaluating anyway");
}

void holonomy_line(Report& r, double h)
{
    const double v = unit_interval(h);
    r.line("holonomy = " + fixed(v));
    r.json["holonomy"] = v;
}

Report cmd_holonomy(const HolonomyArgs& a)
{
    Report r;
    const double tol = a.tolerance ? *a.tolerance : default_tolerance();
    io::CechData d = io::data_from_json(io::read_file(a.data), a.data);
    Json pj = io::read_file(a.path);
    const Cover& U = d.cover;
    r.json["type"] = a.type;
    r.json["tolerance"] = tol;
    auto loop = [&] { return io::path_from_json(U, io::field(pj, "loop", a.path), a.path + ".loop"); };
    auto surface = [&] { return io::surface_from_json(U, io::field(pj, "surface", a.path), a.path + ".surface"); };

    if (a.type == "line-loop" || a.type == "line-path") {
        if (d.gerbe) throw ParseError(a.data + ": expected line data, found gerbe data");
        LineData L = d.line();
        const CocycleReport check = validate_line_cocycle(U, L, tol);
        validation(r, check, a.force);
        if (pj.contains("loop")) {
            ChartedPath g = loop();
            if (a.type == "line-loop") {
                if (!g.closed) throw NotClosed("line-loop needs a closed loop");
                holonomy_line(r, holonomy_loop(U, L, g));
            } else {
                holonomy_line(r, holonomy_path(U, L, d.get("trivialization"), g, tol));
            }
        }
        if (pj.contains("surface") && a.type == "line-loop" && !check.ok) {
            r.line("chern pairing: undefined for data that is not a cocycle");
        } else if (pj.contains("surface") && a.type == "line-loop") {
            ChartedSurface S = surface();
            const double c = surface_pairing(U, chern_class(U, L, tol).c, S);
            if (!near_integer(c, tol)) throw NotWellDefined("Chern pairing is not an integer: " + fixed(c));
            auto F = curvature(U, L, tol);
            double total = 0;
            for (auto& x : S.triangles()) {
                Simplex s{x[0], x[1], x[2]};
                const int sg = sort_with_sign(s);
                total += sg * F.at(s);
            }
            const long long n = std::llround(c);
            r.line("chern pairing = " + std::to_string(n));
            r.line("curvature pairing = " + fixed(total));
            r.json["chern_pairing"] = n;
            r.json["curvature_pairing"] = total;
        }
    } else if (a.type == "gerbe-closed" || a.type == "gerbe-open") {
        if (!d.gerbe) throw ParseError(a.data + ": expected gerbe data (Lambda, B)");
        GerbeData G = d.gerbe_data();
        validation(r, validate_gerbe_cocycle(U, G, tol), a.force);
        ChartedSurface S = surface();
        if (a.type == "gerbe-closed") {
            holonomy_line(r, holonomy_surface(U, G, S));
        } else {
            holonomy_line(r, holonomy_open_surface(U, G, d.get("h"), d.get("A"), S, tol));
        }
    } else {
        throw ParseError("unknown holonomy type '" + a.type + "'");
    }
    return r;
}

// ---------------------------------------------------------------------------

struct CliffordArgs {
    std::string lift_case, pin, rep, tables;
};

std::string matrix_string(const CMatrix& m)
{
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s += i ? "; " : "";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            auto z = m(i, j);
            std::string cell = fixed(z.real(), 6);
            if (std::abs(z.imag()) > 5e-7) cell += (z.imag() < 0 ? "-" : "+") + fixed(std::abs(z.imag()), 6) + "i";
            s += (j ? " " : "") + cell;
        }
    }
    return s + "]";
}

std::string gauss_string(const GMatrix& m)
{
    auto entry = [](GaussInt z) {
        if (z.im == 0) return std::to_string(z.re);
        std::string im = z.im == 1 ? "i" : z.im == -1 ? "-i" : std::to_string(z.im) + "i";
        if (z.re == 0) return im;
        return std::to_string(z.re) + (z.im > 0 ? "+" : "") + im;
    };
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s += i ? "; " : "";
        for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? " " : "") + entry(m(i, j));
    }
    return s + "]";
}

Report cmd_clifford(const CliffordArgs& a)
{
    Report r;
    const int chosen = !a.lift_case.empty() + !a.rep.empty() + !a.tables.empty();
    if (chosen != 1) throw ParseError("choose exactly one of --case, --rep, --tables");
    if (!a.lift_case.empty()) {
        if (a.pin.empty()) throw ParseError("--case needs --pin plus|minus");
        LiftCase c = lift_case_from_name(a.lift_case);
        PinSign p = pin_sign_from_name(a.pin);
        LiftSquare s = lift_square_report(c, p);
        const int v = dtau_square(c, p);
        r.line(a.lift_case + " (pin " + a.pin + "): " + (v > 0 ? "+1" : "-1"));
        r.line("angle deviation = " + sci(s.deviation));
        r.json["case"] = a.lift_case;
        r.json["pin"] = a.pin;
        r.json["value"] = v;
        r.json["deviation"] = s.deviation;
    } else if (!a.rep.empty()) {
        SmallRep s = small_rep(rep_case_from_name(a.rep));
        r.line(s.rep.name + ", matrices of size " + std::to_string(s.rep.dimension()));
        for (std::size_t i = 0; i < s.rep.generators.size(); ++i)
            r.line("  e" + std::to_string(i + 1) + " (square " + (s.rep.signature.diag()[i] > 0 ? "+1" : "-1") +
                   ") -> " + gauss_string(s.rep.generators[i]));
        auto ok = [](bool b) { return b ? std::string("OK") : std::string("FAIL"); };
        std::string summary = "relations: " + ok(s.report.passed("relations"));
        std::string basis;
        Json checks = Json::object();
        for (auto& [name, pass] : s.report.checks) {
            checks[name] = pass;
            if (name == "relations") continue;
            if (name == "multiplicative" || name == "injective")
                basis += (basis.empty() ? "" : ", ") + name + ": " + ok(pass);
            else
                summary += ", " + name + ": " + ok(pass);
        }
        r.line(summary);
        r.line(basis);
        r.json["rep"] = a.rep;
        r.json["dimension"] = s.rep.dimension();
        r.json["checks"] = checks;
        r.json["ok"] = s.report.ok();
        if (!s.report.ok()) throw AxiomViolation("representation check failed for " + a.rep);
    } else {
        SpinTables t = spin2_tables(spin_kind_from_name(a.tables));
        Json rows = Json::object();
        for (auto& row : t.rows) {
            r.line(row.name + ": max error " + sci(row.max_error) + (row.max_error <= 1e-9 ? " OK" : " FAIL"));
            rows[row.name] = row.max_error;
        }
        Json samples = Json::array();
        for (auto& s : t.samples) {
            r.line("  " + s.name + " at " + fixed(s.parameter, 6) + ": element " + matrix_string(s.element) +
                   ", action " + matrix_string(s.action));
            Json sj;
            sj["name"] = s.name;
            sj["parameter"] = s.parameter;
            sj["element"] = matrix_string(s.element);
            sj["action"] = matrix_string(s.action);
            samples.push_back(sj);
        }
        r.json["tables"] = a.tables;
        r.json["rows"] = rows;
        r.json["samples"] = samples;
        r.json["ok"] = t.ok();
        if (!t.ok()) throw AxiomViolation("spin table row mismatch");
    }
    return r;
}

void emit(const Report& r, const std::string& format)
{
    if (format == "json") {
        std::cout << io::dump(r.json);
        return;
    }
    for (auto& l : r.lines) std::cout << l << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"cohomolab: homology, spectral sequences, holonomy and Clifford algebra tables"};
    app.require_subcommand(1);
    std::string format = "text";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));

    HomologyArgs ha;
    auto* hom = app.add_subcommand("homology", "simplicial homology of a complex file");
    hom->add_option("file", ha.file, "complex JSON")->required();
    hom->add_option("--coeff", ha.coeff, "coefficients")->check(CLI::IsMember({"z", "q", "z2"}));
    hom->add_option("--relative", ha.relative, "subcomplex JSON");
    hom->add_flag("--reduced", ha.reduced, "reduced homology");
    hom->add_option("--degree", ha.degrees, "degree (repeatable)");
    hom->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));

    SpectralArgs sa;
    auto* sseq = app.add_subcommand("spectral", "spectral sequence pages");
    sseq->add_option("file", sa.file, "input JSON")->required();
    sseq->add_option("--pages", sa.pages, "last page to print");
    sseq->add_option("--mode", sa.mode, "input kind")
        ->check(CLI::IsMember({"filtered", "double-first", "double-second", "axiomatic", "ahss"}));
    sseq->add_option("--theory", sa.theory, "ahss coefficients: z or k")->check(CLI::IsMember({"z", "k"}));
    sseq->add_flag("--check-limit", sa.check_limit, "compare E_infinity with the filtered cohomology");
    sseq->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));

    HolonomyArgs la;
    double tol = 0;
    auto* hol = app.add_subcommand("holonomy", "holonomy of line and gerbe data");
    hol->add_option("data", la.data, "cover and cochain data JSON")->required();
    hol->add_option("path", la.path, "loop or surface JSON")->required();
    hol->add_option("--type", la.type, "what to evaluate")
        ->check(CLI::IsMember({"line-loop", "line-path", "gerbe-closed", "gerbe-open"}));
    auto* tol_opt = hol->add_option("--tolerance", tol, "comparison tolerance");
    hol->add_flag("--force", la.force, "evaluate even if the cocycle check fails");
    hol->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));

    CliffordArgs ca;
    auto* cl = app.add_subcommand("clifford", "Clifford algebra tables");
    cl->add_option("--case", ca.lift_case, "lift-square case");
    cl->add_option("--pin", ca.pin, "plus or minus");
    cl->add_option("--rep", ca.rep, "representation case");
    cl->add_option("--tables", ca.tables, "euclidean or minkowskian");
    cl->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Report r;
        if (*hom)
            r = cmd_homology(ha);
        else if (*sseq)
            r = cmd_spectral(sa);
        else if (*hol) {
            if (*tol_opt) la.tolerance = tol;
            r = cmd_holonomy(la);
        } else
            r = cmd_clifford(ca);
        emit(r, format);
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InsufficientData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
