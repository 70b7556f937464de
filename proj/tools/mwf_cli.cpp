// mwf: command-line front end for the multiwavelet filter toolkit.
#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <regex>
#include <sstream>

#include "mwf/analysis.hpp"
#include "mwf/bauer.hpp"
#include "mwf/errors.hpp"
#include "mwf/filters.hpp"
#include "mwf/io.hpp"
#include "mwf/mwt.hpp"
#include "mwf/recover.hpp"

using json = nlohmann::ordered_json;
using namespace mwf;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::string digest(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_text_file(path, text);
}

json mat_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json input_entry(const std::string& label, const std::string& path) {
    json j;
    j["name"] = label;
    j["path"] = path;
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const IoError&) {
        j["digest"] = "builtin";
        return j;
    }
    j["digest"] = digest(text);
    return j;
}

// Named banks: the built-in set, plus sa4-exact (closed form) and sa4-approx
// (approximate recovery at f = 21). Anything else is read as a document.
FilterBank load_bank(const std::string& spec) {
    if (spec == "sa4-exact") return builtin("sa4");
    if (spec == "sa4-approx") {
        const ProductFilter p = product_filter(builtin("sa4").lowpass);
        return recover_approximate(spectral_factor(p, 21)).bank;
    }
    for (const char* n : {"sa4", "ghm", "cl", "haar-scalar"})
        if (spec == n) return builtin(spec);
    return deserialize_bank(read_text_file(spec));
}

ProductFilter load_product(const std::string& path) {
    const std::string text = read_text_file(path);
    // a bank document is accepted too and turned into its product
    try {
        return deserialize_product(text);
    } catch (const ShapeError&) {
        return product_filter(deserialize_bank(text).lowpass);
    }
}

// "10..100", "10..100:5", "4269,9139,12042", or empty
std::vector<int> parse_sizes(const std::string& s) {
    std::vector<int> out;
    if (s.empty()) return out;
    static const std::regex range(R"(\s*(\d+)\s*\.\.\s*(\d+)\s*(?::\s*(\d+))?\s*)");
    std::smatch m;
    if (std::regex_match(s, m, range)) {
        const int a = std::stoi(m[1]), b = std::stoi(m[2]);
        const int step = m[3].matched ? std::stoi(m[3]) : 1;
        if (step < 1) throw UsageError("sizes: step must be >= 1");
        for (int f = a; f <= b; f += step) out.push_back(f);
        return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            const int f = std::stoi(item, &pos);
            if (pos != item.size() && item.find_first_not_of(" ", pos) != std::string::npos) throw 0;
            out.push_back(f);
        } catch (...) {
            throw UsageError("sizes: cannot parse '" + item + "'");
        }
    }
    return out;
}

std::vector<double> numbers_in(const std::string& text) {
    static const std::regex num(R"([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?|[-+]?(?:inf|nan))");
    std::vector<double> v;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), num); it != std::sregex_iterator(); ++it)
        v.push_back(std::stod(it->str()));
    return v;
}

void flatten(const json& j, const std::string& path, std::vector<std::pair<std::string, double>>& out) {
    if (j.is_number()) {
        out.emplace_back(path, j.get<double>());
    } else if (j.is_array()) {
        for (size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "/" + std::to_string(i), out);
    } else if (j.is_object()) {
        std::vector<std::string> keys;
        for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
        std::sort(keys.begin(), keys.end());
        for (const auto& k : keys) flatten(j.at(k), path + "/" + k, out);
    }
}

// JSON documents are compared leaf by leaf, anything else cell by cell.
std::vector<std::pair<std::string, double>> cells(const std::string& text) {
    std::vector<std::pair<std::string, double>> out;
    try {
        flatten(json::parse(text), "", out);
        return out;
    } catch (const json::parse_error&) {
    }
    const auto v = numbers_in(text);
    for (size_t i = 0; i < v.size(); ++i) out.emplace_back("#" + std::to_string(i), v[i]);
    return out;
}

// Golden comparison: every numeric cell of the output must match the golden
// file within tol. Returns true on match.
bool compare_golden(const std::string& produced, const std::string& golden_path, double tol) {
    const auto a = cells(produced);
    const auto b = cells(read_text_file(golden_path));
    if (a.size() != b.size()) {
        std::cerr << "compare: " << a.size() << " numeric cells, golden has " << b.size() << "\n";
        return false;
    }
    size_t bad = 0;
    double worst = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].first != b[i].first) {
            std::cerr << "compare: cell " << a[i].first << " has no counterpart (" << b[i].first << ")\n";
            return false;
        }
        const double d = std::abs(a[i].second - b[i].second);
        if (!(d <= tol) && !(std::isnan(a[i].second) && std::isnan(b[i].second))) {
            if (bad < 10)
                std::cerr << "compare: " << a[i].first << ": " << fmt(a[i].second) << " vs " << fmt(b[i].second) << "\n";
            ++bad;
        }
        if (std::isfinite(d)) worst = std::max(worst, d);
    }
    std::cerr << "compare: " << a.size() << " cells, " << bad << " outside tol " << fmt(tol) << ", max diff "
              << fmt(worst) << "\n";
    return bad == 0;
}

struct Common {
    std::string out;
    std::string report;
    std::string compare;
    double compare_tol = 1e-9;
    std::string precision = "quad";
};

void add_common(CLI::App* c, Common& o, bool with_compare) {
    c->add_option("--out,-o", o.out, "output path (stdout when omitted)");
    if (with_compare) {
        c->add_option("--compare", o.compare, "golden file; numeric cells are compared to --tol");
        c->add_option("--tol", o.compare_tol, "per-cell tolerance for --compare")->check(CLI::NonNegativeNumber);
    }
}

int finish(const std::string& text, const Common& o) {
    emit(o.out, text);
    if (!o.compare.empty() && !compare_golden(text, o.compare, o.compare_tol)) return 2;
    return 0;
}

void print_report(const json& r, const std::string& path) {
    const std::string text = r.dump(2) + "\n";
    if (path.empty())
        std::cerr << text;
    else
        write_text_file(path, text);
}

json error_json(const ErrorReport& e) {
    json j;
    j["mae_mf"] = e.mae_mf;
    j["mse_mf"] = e.mse_mf;
    if (e.has_highpass) {
        j["mae_mwf"] = e.mae_mwf;
        j["mse_mwf"] = e.mse_mwf;
    }
    j["mae_per_lowpass_tap"] = e.mae_mc;
    j["mse_per_lowpass_tap"] = e.mse_mc;
    if (e.has_highpass) {
        j["mae_per_highpass_tap"] = e.mae_wc;
        j["mse_per_highpass_tap"] = e.mse_wc;
    }
    return j;
}

bool ends_with(const std::string& s, const std::string& tail) {
    return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiwavelet product filters, spectral factorization and transforms"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "mwf 1.0");

    // gen
    Common gen_o;
    std::string gen_family, gen_name;
    double gen_t = 0;
    auto* gen = app.add_subcommand("gen", "write a filter-bank document");
    gen->add_option("--family", gen_family, "parametric family (sa4)");
    gen->add_option("--t", gen_t, "family parameter");
    gen->add_option("--name", gen_name, "built-in bank: sa4, ghm, cl, haar-scalar");
    add_common(gen, gen_o, true);

    // product
    Common prod_o;
    std::string prod_bank;
    auto* prod = app.add_subcommand("product", "lowpass product filter P(z) = H(z) H*(z)");
    prod->add_option("--bank", prod_bank, "bank document or built-in name")->required();
    add_common(prod, prod_o, true);

    // factorize
    Common fac_o;
    std::string fac_product, fac_sv_out;
    int fac_size = 0;
    bool fac_residual = false, fac_sv = false;
    auto* fac = app.add_subcommand("factorize", "spectral factor from the banded block Cholesky recursion");
    fac->add_option("--product", fac_product, "product or bank document")->required();
    fac->add_option("--size", fac_size, "truncation size f")->required();
    fac->add_flag("--report-residual", fac_residual, "print the residual max|P - H H*|");
    fac->add_flag("--singular-values", fac_sv, "write singular values of T^(f) as CSV");
    fac->add_option("--sv-out", fac_sv_out, "path for the singular-value CSV (default stdout)");
    fac->add_option("--precision", fac_o.precision, "double, extended or quad")
        ->check(CLI::IsMember({"double", "extended", "quad"}));
    fac->add_option("--report", fac_o.report, "JSON report path (default stderr)");
    add_common(fac, fac_o, true);

    // sweep
    Common sw_o;
    std::string sw_product, sw_sizes, sw_method = "approx", sw_reference;
    auto* sw = app.add_subcommand("sweep", "factor and recover over a range of sizes, CSV of errors");
    sw->add_option("--product", sw_product, "product or bank document")->required();
    sw->add_option("--sizes", sw_sizes, "a..b[:step] or comma list");
    sw->add_option("--recover", sw_method, "approx or exact")->check(CLI::IsMember({"approx", "exact"}));
    sw->add_option("--reference", sw_reference, "reference bank (default: closed-form sa4)");
    sw->add_option("--precision", sw_o.precision, "double, extended or quad")
        ->check(CLI::IsMember({"double", "extended", "quad"}));
    add_common(sw, sw_o, true);

    // recover
    Common rec_o;
    std::string rec_product, rec_method = "exact", rec_reference;
    int rec_size = 0;
    auto* rec = app.add_subcommand("recover", "recover an SA4 bank from the spectral factor");
    rec->add_option("--product", rec_product, "product or bank document")->required();
    rec->add_option("--size", rec_size, "truncation size f")->required();
    rec->add_option("--method", rec_method, "approx, exact or rotated")
        ->check(CLI::IsMember({"approx", "exact", "rotated"}));
    rec->add_option("--reference", rec_reference, "reference bank for the error report");
    rec->add_option("--precision", rec_o.precision, "double, extended or quad")
        ->check(CLI::IsMember({"double", "extended", "quad"}));
    rec->add_option("--report", rec_o.report, "JSON report path (default stderr)");
    add_common(rec, rec_o, true);

    // analyze
    Common an_o;
    std::string an_bank, an_metrics = "cg,sobolev,gmp,order,balance,symmetry";
    double an_rho = 0.95, an_tol = 1e-8;
    int an_grid = 129;
    bool an_balanced = false;
    auto* an = app.add_subcommand("analyze", "filter-quality metrics");
    an->add_option("--bank", an_bank, "bank document or built-in name")->required();
    an->add_option("--metrics", an_metrics, "comma list of cg,sobolev,gmp,order,balance,symmetry,freq,defect");
    an->add_option("--rho", an_rho, "AR(1) correlation for coding gain");
    an->add_option("--metric-tol", an_tol, "tolerance for gmp, order and balance")->check(CLI::PositiveNumber);
    an->add_option("--grid", an_grid, "frequency grid points on [0, pi]");
    an->add_flag("--balanced", an_balanced, "analyze the Haar-balanced bank");
    add_common(an, an_o, true);

    // transform
    Common tr_o;
    std::string tr_input, tr_bank = "sa4-exact";
    int tr_levels = 1;
    bool tr_balanced = false;
    auto* tr = app.add_subcommand("transform", "decompose and reconstruct a signal or image");
    tr->add_option("--input", tr_input, "CSV signal or PGM image")->required();
    tr->add_option("--bank", tr_bank, "bank document or name (sa4-exact, sa4-approx, ghm, cl, ...)");
    tr->add_option("--levels", tr_levels, "decomposition levels J")->check(CLI::NonNegativeNumber);
    tr->add_flag("--balanced", tr_balanced, "Haar pre/postfilter");
    tr->add_option("--report", tr_o.report, "per-level error CSV (default stderr)");
    add_common(tr, tr_o, false);

    // denoise
    Common dn_o;
    std::string dn_input, dn_bank = "sa4-exact", dn_noisy_out;
    int dn_levels = 3;
    double dn_sigma = 10.0;
    std::uint64_t dn_seed = 1;
    bool dn_balanced = false, dn_estimate = false, dn_no_noise = false;
    auto* dn = app.add_subcommand("denoise", "vector hard-threshold denoising");
    dn->add_option("--input", dn_input, "PGM image or CSV signal")->required();
    dn->add_option("--bank", dn_bank, "bank document or name");
    dn->add_option("--levels", dn_levels, "decomposition levels J")->check(CLI::PositiveNumber);
    dn->add_option("--sigma", dn_sigma, "noise standard deviation")->check(CLI::NonNegativeNumber);
    dn->add_option("--seed", dn_seed, "noise seed");
    dn->add_flag("--balanced", dn_balanced, "Haar pre/postfilter");
    dn->add_flag("--estimate-sigma", dn_estimate, "threshold with the MAD estimate instead of --sigma");
    dn->add_flag("--no-noise", dn_no_noise, "input is already noisy");
    dn->add_option("--noisy-out", dn_noisy_out, "write the noisy input here");
    dn->add_option("--report", dn_o.report, "JSON report path (default stderr)");
    add_common(dn, dn_o, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*gen) {
            FilterBank b;
            if (!gen_family.empty()) {
                if (gen_family != "sa4") throw UsageError("unknown family: " + gen_family);
                if (gen->count("--t") == 0) throw UsageError("--family sa4 needs --t");
                b = sa4_family(gen_t);
            } else if (!gen_name.empty()) {
                b = builtin(gen_name);
            } else {
                throw UsageError("gen needs --family or --name");
            }
            return finish(serialize(b), gen_o);
        }

        if (*prod) return finish(serialize(product_filter(load_bank(prod_bank).lowpass)), prod_o);

        if (*fac) {
            const ProductFilter p = load_product(fac_product);
            const Precision prec = parse_precision(fac_o.precision);
            if (fac_sv) {
                std::string csv = "index,sigma\n";
                const auto sv = toeplitz_singular_values(p, fac_size);
                for (size_t i = 0; i < sv.size(); ++i) csv += std::to_string(i + 1) + "," + fmt(sv[i]) + "\n";
                if (!fac_sv_out.empty() || fac_o.out.empty()) {
                    emit(fac_sv_out, csv);
                    if (fac_o.out.empty()) return 0;
                }
            }
            const SpectralFactor s = spectral_factor(p, fac_size, prec);
            FilterBank b;
            b.name = "factor-f" + std::to_string(fac_size);
            b.r = p.r;
            b.lowpass = s.taps;
            json rep;
            rep["command"] = "factorize";
            rep["inputs"] = json::array({input_entry("product", fac_product)});
            rep["size"] = fac_size;
            rep["precision"] = fac_o.precision;
            rep["residual"] = s.residual;
            if (fac_residual || !fac_o.report.empty()) print_report(rep, fac_o.report);
            return finish(serialize(b), fac_o);
        }

        if (*sw) {
            const ProductFilter p = load_product(sw_product);
            const FilterBank ref = sw_reference.empty() ? builtin("sa4") : load_bank(sw_reference);
            const auto sizes = parse_sizes(sw_sizes);
            const bool exact = sw_method == "exact";
            std::string csv = "f,residual,mae_mf,mse_mf,mae_mwf,mse_mwf,theta,error\n";
            const auto recs = sweep(p, sizes, parse_precision(sw_o.precision));
            for (const auto& r : recs) {
                std::string row = std::to_string(r.f) + ",";
                if (!r.ok) {
                    csv += row + "nan,nan,nan,nan,nan,nan," + r.error + "\n";
                    continue;
                }
                try {
                    RecoveryResult res;
                    if (exact)
                        res = recover_exact(r.factor).averaged;
                    else
                        res = recover_approximate(r.factor);
                    const ErrorReport e = error_report(res.bank, ref);
                    row += fmt(r.factor.residual) + "," + fmt(e.mae_mf) + "," + fmt(e.mse_mf) + "," +
                           (e.has_highpass ? fmt(e.mae_mwf) + "," + fmt(e.mse_mwf) : std::string("nan,nan")) + "," +
                           (res.theta ? fmt(*res.theta) : std::string("nan")) + ",\n";
                } catch (const std::exception& ex) {
                    std::string msg = ex.what();
                    for (auto& c : msg)
                        if (c == ',' || c == '\n') c = ' ';
                    row += fmt(r.factor.residual) + ",nan,nan,nan,nan,nan," + msg + "\n";
                }
                csv += row;
            }
            return finish(csv, sw_o);
        }

        if (*rec) {
            const ProductFilter p = load_product(rec_product);
            const SpectralFactor s = spectral_factor(p, rec_size, parse_precision(rec_o.precision));
            RecoveryResult res;
            json rep;
            rep["command"] = "recover";
            rep["inputs"] = json::array({input_entry("product", rec_product)});
            rep["size"] = rec_size;
            rep["method"] = rec_method;
            rep["precision"] = rec_o.precision;
            rep["residual"] = s.residual;
            if (rec_method == "approx") {
                res = recover_approximate(s);
                const auto m = averaged_magnitudes(s.flat());
                rep["magnitudes"] = {{"m06", m.m06}, {"m17", m.m17}, {"m24", m.m24}, {"m35", m.m35}};
            } else {
                const ExactRecovery ex = recover_exact(s);
                res = rec_method == "exact" ? ex.averaged : ex.rotated;
                rep["even"] = ex.even;
                rep["odd"] = ex.odd;
                rep["theta"] = ex.theta;
            }
            if (!rec_reference.empty()) {
                rep["reference"] = input_entry("reference", rec_reference);
                rep["errors"] = error_json(error_report(res.bank, load_bank(rec_reference)));
            }
            rep["orthogonality_defect"] = orthogonality_defect(res.bank);
            print_report(rep, rec_o.report);
            return finish(serialize(res.bank), rec_o);
        }

        if (*an) {
            FilterBank b = load_bank(an_bank);
            if (an_balanced) b = conjugate(b, haar_prefilter());
            json rep;
            rep["command"] = "analyze";
            rep["bank"] = input_entry(b.name, an_bank);
            rep["balanced"] = an_balanced;
            rep["metric_tol"] = an_tol;
            std::stringstream ss(an_metrics);
            std::string m;
            std::vector<std::string> list;
            while (std::getline(ss, m, ',')) list.push_back(m);
            for (const auto& name : list)
                if (name != "cg" && name != "sobolev" && name != "gmp" && name != "order" && name != "balance" &&
                    name != "symmetry" && name != "freq" && name != "defect")
                    throw UsageError("unknown metric: " + name);
            for (const auto& name : list) {
                if (name == "cg") {
                    const auto cg = coding_gain(b, an_rho);
                    rep["cg"] = {{"rho", an_rho}, {"db", cg.db}, {"ratio", cg.ratio}, {"variances", cg.variances}};
                } else if (name == "sobolev") {
                    const auto s = sobolev(b);
                    rep["sobolev"] = {{"s", s.s}, {"rho", s.rho}, {"p", s.p}};
                } else if (name == "gmp") {
                    const auto g = gmp_residuals(b.r == 2 ? conjugate(b, haar_prefilter()) : b);
                    rep["gmp"] = {{"gmp_111", gmp_order_111(b, an_tol)},
                                  {"lowpass_dc", g.lowpass_dc},
                                  {"lowpass_pi", g.lowpass_pi},
                                  {"highpass_dc", g.highpass_dc}};
                } else if (name == "order") {
                    rep["approximation_order"] = approximation_order(b, 6, an_tol);
                } else if (name == "balance") {
                    rep["balance_order"] = balance_order(b, 3, an_tol);
                } else if (name == "symmetry") {
                    const auto s = symmetry(b);
                    rep["symmetry"] = {{"symmetric", s.symmetric}, {"centers", s.centers}, {"signs", s.signs}};
                } else if (name == "defect") {
                    rep["orthogonality_defect"] = orthogonality_defect(b);
                    if (b.r == 2) rep["balanced_defect"] = mat_json(balanced_orthogonality_defect(b.lowpass, haar_prefilter()));
                } else if (name == "freq") {
                    json rows = json::array();
                    for (const auto& r : frequency_response(b, an_grid)) {
                        json row = {{"omega", r.omega}, {"h", mat_json(r.h)}};
                        if (r.g.size()) row["g"] = mat_json(r.g);
                        rows.push_back(row);
                    }
                    rep["frequency_response"] = rows;
                }
            }
            return finish(rep.dump(2) + "\n", an_o);
        }

        if (*tr) {
            const FilterBank b = load_bank(tr_bank);
            const Mat q = haar_prefilter();
            const bool image = ends_with(tr_input, ".pgm");
            if (tr_levels == 0) {
                // identity: output is the input
                emit(tr_o.out, read_text_file(tr_input));
                return 0;
            }
            if (image) {
                const Mat img = read_pgm(tr_input);
                std::string csv = "levels,mae,psnr\n";
                Mat last;
                for (int j = 1; j <= tr_levels; ++j) {
                    const Mat co = analyze2d(img, b, j, tr_balanced ? &q : nullptr);
                    last = synthesize2d(co, b, j, tr_balanced ? &q : nullptr);
                    csv += std::to_string(j) + "," + fmt(mae(img, last)) + "," + fmt(psnr(img, last)) + "\n";
                }
                if (tr_o.out.empty()) throw UsageError("transform of an image needs --out");
                write_pgm(tr_o.out, last);
                if (tr_o.report.empty())
                    std::cerr << csv;
                else
                    write_text_file(tr_o.report, csv);
                return 0;
            }
            const Vec x = read_signal_csv(tr_input);
            std::string csv = "levels,mae\n";
            Vec last;
            for (int j = 1; j <= tr_levels; ++j) {
                Vec y;
                if (tr_balanced) {
                    y = postfilter(synthesize(analyze(prefilter(x, q), b, j), b), q);
                } else {
                    if (x.size() % b.r) throw ShapeError("signal length must be a multiple of r");
                    const Mat v = Eigen::Map<const Mat>(x.data(), b.r, x.size() / b.r);
                    const Mat w = synthesize(analyze(v, b, j), b);
                    y = Eigen::Map<const Vec>(w.data(), w.size());
                }
                csv += std::to_string(j) + "," + fmt((x - y).cwiseAbs().maxCoeff()) + "\n";
                last = y;
            }
            if (!tr_o.out.empty()) write_signal_csv(tr_o.out, last);
            if (tr_o.report.empty())
                std::cout << csv;
            else
                write_text_file(tr_o.report, csv);
            return 0;
        }

        if (*dn) {
            const FilterBank b = load_bank(dn_bank);
            const Mat q = haar_prefilter();
            const Mat* qp = dn_balanced ? &q : nullptr;
            json rep;
            rep["command"] = "denoise";
            rep["inputs"] = json::array({input_entry("input", dn_input), input_entry("bank", dn_bank)});
            rep["levels"] = dn_levels;
            rep["balanced"] = dn_balanced;
            rep["sigma"] = dn_sigma;
            rep["seed"] = dn_seed;
            rep["noise"] = dn_no_noise ? "none" : "gaussian, mt19937_64";
            if (!ends_with(dn_input, ".pgm")) throw UsageError("denoise expects a PGM image");
            const Mat img = read_pgm(dn_input);
            const Mat noisy = dn_no_noise ? img : add_noise(img, dn_sigma, dn_seed);
            const Mat co = analyze2d(noisy, b, dn_levels, qp);
            const double thr_sigma = dn_estimate ? estimate_sigma2d(co, dn_levels) : dn_sigma;
            const Mat out = synthesize2d(hard_threshold2d(co, b.r, dn_levels, thr_sigma), b, dn_levels, qp);
            rep["threshold_sigma"] = thr_sigma;
            rep["threshold_rule"] = "sigma * sqrt(2 ln N_j)";
            if (!dn_no_noise) {
                rep["psnr_noisy"] = psnr(img, noisy);
                rep["psnr_denoised"] = psnr(img, out);
            }
            if (!dn_noisy_out.empty()) write_pgm(dn_noisy_out, noisy);
            if (dn_o.out.empty()) throw UsageError("denoise needs --out");
            write_pgm(dn_o.out, out);
            print_report(rep, dn_o.report);
            return 0;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const ShapeError& e) {
        std::cerr << "shape error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
