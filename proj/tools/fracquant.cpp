// fracquant: exact quantization of the four condensation measures on [0,1].
//
// Subcommands: moments, optimal-set, error-table, oracle-check, dimension,
// coefficient, plot.  Exit codes: 0 success, 1 usage error, 2 verification
// failure.

#include "fracquant/json_io.hpp"
#include "fracquant/svg.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace fracquant;

namespace {

struct RunConfig {
    std::string variant = "nu1";
    std::string format;  // default depends on command
    std::string out;     // empty = stdout
    unsigned precision_bits = 128;
    int digits = 12;
};

void write_output(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw CLI::ValidationError("--out", "cannot open " + cfg.out);
    f << text;
}

CondensationSystem make_system(const RunConfig& cfg) {
    auto v = parse_variant(cfg.variant);
    if (!v) throw CLI::ValidationError("--variant", "expected one of nu1, nu2, nu3, nu4");
    return CondensationSystem::make(*v);
}

std::string csv_escape(const std::string& s) { return s; }  // fields never contain commas

std::string moments_csv(const RunConfig& cfg, const CondensationSystem& sys) {
    std::ostringstream out;
    out << "quantity,exact,decimal\n";
    out << "E," << csv_escape(sys.mean.to_string()) << "," << sys.mean.to_decimal(cfg.digits) << "\n";
    out << "W," << csv_escape(sys.nu.w.to_string()) << "," << sys.nu.w.to_decimal(cfg.digits) << "\n";
    out << "V," << csv_escape(sys.v.to_string()) << "," << sys.v.to_decimal(cfg.digits) << "\n";
    return out.str();
}

Json family_state_json(const CondensationSystem& sys, const GreedyState& st) {
    auto structural = [](const Family& f) {
        switch (f.kind) {
            case FamilyKind::NuBlock:
                return "nu-block(d=" + std::to_string(f.s_depth) +
                       ",e=" + std::to_string(f.nu_exp) + ")";
            case FamilyKind::PCenters: return "p-centers(d=" + std::to_string(f.s_depth) + ")";
            case FamilyKind::TwoMeans: return "two-means(d=" + std::to_string(f.s_depth) + ")";
        }
        return std::string("?");
    };
    Json arr = Json::array();
    for (const auto& f : st.families) arr.push_back(family_json(sys, f, structural(f)));
    if (st.partial_family) {
        Json j = family_json(sys, *st.partial_family, structural(*st.partial_family));
        j["partially_split"] = st.partial_count.str();
        arr.push_back(std::move(j));
    }
    return arr;
}

int cmd_moments(const RunConfig& cfg) {
    auto sys = make_system(cfg);
    if (cfg.format == "csv") {
        write_output(cfg, moments_csv(cfg, sys));
        return 0;
    }
    Json j;
    j["variant"] = cfg.variant;
    j["E"] = scalar_json(sys.mean, cfg.digits);
    j["W"] = scalar_json(sys.nu.w, cfg.digits);
    j["V"] = scalar_json(sys.v, cfg.digits);
    j["E_exact"] = sys.mean.to_string();
    j["W_exact"] = sys.nu.w.to_string();
    j["V_exact"] = sys.v.to_string();
    write_output(cfg, j.dump(2));
    return 0;
}

int cmd_optimal_set(const RunConfig& cfg, std::uint64_t m) {
    auto sys = make_system(cfg);
    auto bundle = build_alpha_m(sys, m);
    auto walk = greedy_walk(sys, m);
    Json j;
    j["m"] = m;
    j["variant"] = cfg.variant;
    j["error"] = scalar_json(bundle.error, cfg.digits);
    j["multiplicity"] = bundle.multiplicity.str();
    if (!bundle.chosen_beta.empty()) j["chosen_beta"] = bundle.chosen_beta;
    Json pts = Json::array();
    for (const auto& p : bundle.points.points()) {
        Json pj = p.provenance ? address_json(*p.provenance) : Json::object();
        pj["value"] = p.value.to_string();
        pj["decimal"] = p.value.to_decimal(cfg.digits);
        pts.push_back(std::move(pj));
    }
    j["points"] = pts;
    j["families"] = family_state_json(sys, walk);
    j["ladder_error"] = scalar_json(walk.total_error, cfg.digits);
    write_output(cfg, j.dump(2));
    return 0;
}

int cmd_error_table(const RunConfig& cfg, long max_n) {
    auto sys = make_system(cfg);
    const Regime regime = regime_of(*sys.variant());
    if (cfg.format == "json") {
        Json rows = Json::array();
        for (long n = 1; n <= max_n; ++n) {
            Json r;
            r["n"] = n;
            r["F_n"] = f_of(regime, n).str();
            r["V_Fn"] = scalar_json(closed_V_F(sys, n), cfg.digits);
            rows.push_back(std::move(r));
        }
        Json j;
        j["variant"] = cfg.variant;
        j["rows"] = rows;
        write_output(cfg, j.dump(2));
        return 0;
    }
    std::ostringstream out;
    out << "n,F_n,V_Fn_exact,V_Fn_decimal\n";
    for (long n = 1; n <= max_n; ++n) {
        const Scalar v = closed_V_F(sys, n);
        out << n << "," << f_of(regime, n).str() << "," << v.to_string() << ","
            << v.to_decimal(cfg.digits) << "\n";
    }
    write_output(cfg, out.str());
    return 0;
}

int cmd_oracle_check(const RunConfig& cfg, std::uint64_t m, int depth_p, int depth_nu,
                     double tol) {
    auto sys = make_system(cfg);
    auto rep = verify_optimality(sys, m, depth_p, depth_nu, tol);
    Json j = verify_json(rep);
    j["variant"] = cfg.variant;
    j["m"] = m;
    write_output(cfg, j.dump(2));
    return rep.pass ? 0 : 2;
}

int cmd_dimension(const RunConfig& cfg, long max_n) {
    auto sys = make_system(cfg);
    auto rows = dimension_table(sys, max_n);
    const Regime regime = regime_of(*sys.variant());
    std::ostringstream out;
    out << "n,F_n,V_Fn_decimal,dim_estimate,dim_slope,coeff\n";
    out.precision(10);
    for (const auto& r : rows) {
        out << r.n << "," << f_of(regime, r.n).str() << "," << r.v.to_decimal(cfg.digits) << ","
            << r.dim_estimate << "," << r.dim_slope << "," << r.coeff << "\n";
    }
    write_output(cfg, out.str());
    return 0;
}

int cmd_coefficient(const RunConfig& cfg, double dim, long max_n) {
    auto sys = make_system(cfg);
    const double d = dim > 0 ? dim : d_p(*sys.variant());
    auto rows = coefficient_table(sys, d, max_n);
    const Regime regime = regime_of(*sys.variant());
    std::ostringstream out;
    out << "n,F_n,V_Fn_decimal,coeff\n";
    out.precision(10);
    for (const auto& r : rows)
        out << r.n << "," << f_of(regime, r.n).str() << "," << r.v.to_decimal(cfg.digits) << ","
            << r.coeff << "\n";
    auto lim = subsequence_limits(sys);
    if (lim.diverges) {
        out << "# coefficient diverges at the natural dimension\n";
    } else {
        out.precision(10);
        out << "# odd-limit," << lim.odd_limit << "," << lim.odd_expr << "\n";
        out << "# even-limit," << lim.even_limit << "," << lim.even_expr << "\n";
        out << "# liminf-lower," << lim.liminf_lower << ",limsup-upper," << lim.limsup_upper
            << "\n";
    }
    write_output(cfg, out.str());
    return 0;
}

int cmd_plot(const RunConfig& cfg, const std::string& kind, long max_n, int width, int height) {
    auto sys = make_system(cfg);
    ChartOptions opt;
    opt.width = width;
    opt.height = height;
    std::vector<Series> series;
    if (kind == "error") {
        Series s;
        s.name = std::string(cfg.variant) + " V_F(n)";
        for (long n = 1; n <= max_n; ++n)
            s.pts.push_back({static_cast<double>(n), closed_V_F(sys, n).to_double()});
        series.push_back(std::move(s));
        opt.log_y = true;
        opt.title = "Quantization error along the canonical ladder";
        opt.x_label = "n";
        opt.y_label = "V_F(n)";
    } else if (kind == "dimension") {
        auto rows = dimension_table(sys, max_n);
        Series est{"2 log F / -log V", {}}, slope{"two-point slope", {}};
        for (const auto& r : rows) {
            est.pts.push_back({static_cast<double>(r.n), r.dim_estimate});
            slope.pts.push_back({static_cast<double>(r.n), r.dim_slope});
        }
        series = {est, slope};
        opt.title = std::string("Dimension estimates (target ") +
                    std::to_string(d_p(*sys.variant())) + ")";
        opt.x_label = "n";
        opt.y_label = "estimate";
    } else if (kind == "coefficient") {
        auto rows = coefficient_table(sys, d_p(*sys.variant()), max_n);
        Series s{std::string(cfg.variant) + " F(n)^(2/d) V_F(n)", {}};
        for (const auto& r : rows) s.pts.push_back({static_cast<double>(r.n), r.coeff});
        series.push_back(std::move(s));
        opt.title = "Quantization coefficient along the ladder";
        opt.x_label = "n";
        opt.y_label = "coefficient";
    } else {
        throw CLI::ValidationError("--kind", "expected error, dimension, or coefficient");
    }
    write_output(cfg, render_line_chart(series, opt));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact optimal quantization for condensation measures on [0,1]"};
    app.require_subcommand(1);
    app.set_config("--config");

    RunConfig cfg;
    if (const char* env = std::getenv("FRACQUANT_PRECISION_BITS"))
        cfg.precision_bits = static_cast<unsigned>(std::atoi(env));
    app.add_option("--variant", cfg.variant, "measure variant: nu1, nu2, nu3, nu4")
        ->capture_default_str();
    app.add_option("--format", cfg.format, "output format: json or csv");
    app.add_option("--out", cfg.out, "output path (default: stdout)");
    app.add_option("--precision-bits", cfg.precision_bits,
                   "binary digits for float export (>= 53)")
        ->capture_default_str();
    auto* digits_opt =
        app.add_option("--digits", cfg.digits, "significant decimal digits in output "
                                               "(default: from --precision-bits, capped at 12)")
            ->capture_default_str();

    auto* moments = app.add_subcommand("moments", "exact E(nu), W, V(P) for a variant");

    std::uint64_t m = 4;
    auto* optimal = app.add_subcommand("optimal-set", "optimal set of m-means with exact error");
    optimal->add_option("--m", m, "number of means (exact DP is quadratic in m)")
        ->required()
        ->check(CLI::Range(1ull, 2000ull));

    long max_n = 10;
    auto* table = app.add_subcommand("error-table", "F(n) ladder with exact V_F(n)");
    table->add_option("--max-n", max_n, "last ladder index")->check(CLI::Range(1L, 400L));

    std::uint64_t om = 4;
    int depth_p = 8, depth_nu = 8;
    double tol = 1e-6;
    auto* oracle = app.add_subcommand("oracle-check",
                                      "compare a constructed set against the k-means DP oracle");
    oracle->add_option("--m", om, "number of means")->required()->check(CLI::Range(1ull, 64ull));
    oracle->add_option("--depth-p", depth_p, "P-tree depth")->check(CLI::Range(1, 12));
    oracle->add_option("--depth-nu", depth_nu, "nu-tree depth")->check(CLI::Range(1, 12));
    oracle->add_option("--tol", tol, "cost tolerance");

    long dim_n = 25;
    auto* dimension = app.add_subcommand("dimension", "quantization-dimension estimates");
    dimension->add_option("--max-n", dim_n, "last ladder index")->check(CLI::Range(2L, 400L));

    double dim_d = 0.0;
    long coeff_n = 32;
    auto* coefficient = app.add_subcommand("coefficient", "quantization-coefficient sequence");
    coefficient->add_option("--dim", dim_d, "dimension d (default: D(P) of the variant)");
    coefficient->add_option("--max-n", coeff_n, "last ladder index")->check(CLI::Range(1L, 400L));

    std::string kind = "error";
    long plot_n = 20;
    int width = 720, height = 480;
    auto* plot = app.add_subcommand("plot", "static SVG chart");
    plot->add_option("--kind", kind, "error, dimension, or coefficient");
    plot->add_option("--max-n", plot_n, "last ladder index")->check(CLI::Range(2L, 400L));
    plot->add_option("--width", width, "SVG width");
    plot->add_option("--height", height, "SVG height");

    // global flags may follow the subcommand name
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cfg.precision_bits < 53)
            throw CLI::ValidationError("--precision-bits", "must be at least 53");
        if (digits_opt->count() == 0)
            cfg.digits = std::min(12, std::max(6, static_cast<int>(cfg.precision_bits * 0.30103)));
        if (moments->parsed()) return cmd_moments(cfg);
        if (optimal->parsed()) return cmd_optimal_set(cfg, m);
        if (table->parsed()) return cmd_error_table(cfg, max_n);
        if (oracle->parsed()) return cmd_oracle_check(cfg, om, depth_p, depth_nu, tol);
        if (dimension->parsed()) return cmd_dimension(cfg, dim_n);
        if (coefficient->parsed()) return cmd_coefficient(cfg, dim_d, coeff_n);
        if (plot->parsed()) return cmd_plot(cfg, kind, plot_n, width, height);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
