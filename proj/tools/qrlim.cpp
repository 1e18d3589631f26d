#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "qrlim/capacity.hpp"
#include "qrlim/constants.hpp"
#include "qrlim/envelopes.hpp"
#include "qrlim/geometry.hpp"
#include "qrlim/maps.hpp"
#include "qrlim/metrics.hpp"

namespace {

using namespace qrlim;
using nlohmann::json;

struct GlobalArgs {
    int n = 2;
    std::string config;
    std::uint64_t seed = 1;
    std::string out_dir;
};

ConstantsContext load_context(const GlobalArgs& g, double K = 1.0) {
    if (g.config.empty()) return ConstantsContext(g.n, K);
    try {
        return ConstantsContext::from_file(g.config);
    } catch (const std::exception& e) {
        throw std::invalid_argument("config error: " + std::string(e.what()));
    }
}

// stdout by default; a file under --out when given
class Output {
  public:
    Output(const GlobalArgs& g, const std::string& filename) {
        if (!g.out_dir.empty()) {
            std::filesystem::create_directories(g.out_dir);
            file_.open(std::filesystem::path(g.out_dir) / filename);
            if (!file_) throw std::invalid_argument("cannot open output file in " + g.out_dir);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<std::vector<Point>> sample_pairs(int n, std::size_t count, std::uint64_t seed) {
    BallSpec ball(Point(n, 0.0), 1.0);
    auto pts = sample_region(ball, 2 * count, seed);
    std::vector<Point> xs(pts.begin(), pts.begin() + count);
    std::vector<Point> ys(pts.begin() + count, pts.end());
    return {xs, ys};
}

int cmd_metrics(const GlobalArgs& g, bool want_rho, bool want_j, bool want_k, bool chain,
                std::size_t samples, double k_tol, const std::vector<double>& coords) {
    Output out(g, "metrics.csv");
    if (chain) {
        auto pairs = sample_pairs(g.n, samples, g.seed);
        Domain dom = Domain::unit_ball(g.n);
        out.stream() << "j,k,rho,two_j\n";
        for (std::size_t i = 0; i < samples; ++i) {
            const Point &x = pairs[0][i], &y = pairs[1][i];
            double jv = j_dist(dom, x, y);
            double kv = k_dist_estimate(dom, x, y, k_tol);
            double rv = rho(x, y);
            out.stream() << fmt(jv) << ',' << fmt(kv) << ',' << fmt(rv) << ',' << fmt(2 * jv)
                         << '\n';
        }
        return 0;
    }
    if (coords.size() < 4 || coords.size() % 2 != 0)
        throw CLI::ValidationError("metrics", "expected an even number (>= 4) of coordinates");
    std::size_t dim = coords.size() / 2;
    Point x(coords.begin(), coords.begin() + dim);
    Point y(coords.begin() + dim, coords.end());
    Domain dom = Domain::unit_ball(static_cast<int>(dim));
    if (!want_rho && !want_j && !want_k) want_rho = true;
    if (want_rho) out.stream() << "rho=" << fmt(rho(x, y)) << '\n';
    if (want_j) out.stream() << "j=" << fmt(j_dist(dom, x, y)) << '\n';
    if (want_k) out.stream() << "k=" << fmt(k_dist_estimate(dom, x, y, k_tol)) << '\n';
    return 0;
}

json check(const std::string& name, double observed, double bound, double tolerance) {
    bool pass = observed <= bound + tolerance;
    return {{"name", name},
            {"pass", pass},
            {"observed", observed},
            {"bound", bound},
            {"tolerance", tolerance}};
}

int cmd_verify(const GlobalArgs& g) {
    ConstantsContext ctx = load_context(g);
    json report = json::array();

    for (int n : {2, 3}) {
        auto pairs = sample_pairs(n, 200, g.seed + n);
        Domain dom = Domain::unit_ball(n);
        double jk = -1e300, krho = -1e300, rho2j = -1e300;
        for (std::size_t i = 0; i < pairs[0].size(); ++i) {
            const Point &x = pairs[0][i], &y = pairs[1][i];
            double jv = j_dist(dom, x, y);
            double kv = k_dist_estimate(dom, x, y, 1e-3);
            double rv = rho(x, y);
            jk = std::max(jk, jv - kv);
            krho = std::max(krho, kv - rv);
            rho2j = std::max(rho2j, rv - 2 * jv);
        }
        std::string suffix = "_n" + std::to_string(n);
        report.push_back(check("chain_j_le_k" + suffix, jk, 0.0, 1e-3));
        report.push_back(check("chain_k_le_rho" + suffix, krho, 0.0, 1e-3));
        report.push_back(check("chain_rho_le_2j" + suffix, rho2j, 0.0, 1e-9));
    }

    {  // Proposition 2.1 dominance on a few parameter triples
        Domain dom = Domain::unit_ball(g.n);
        double worst = -1e300;
        int idx = 0;
        for (double a : {0.25, 0.5})
            for (double phi : {0.3, 0.9})
                for (double r : {0.05, 0.2}) {
                    if (!(r < std::cos(phi))) continue;
                    ConeSpec cone(e1(g.n), phi);
                    TruncatedConeSpec rc(cone, r, a * r);
                    auto pts = sample_region(rc, 200, g.seed + 100 + idx++);
                    double diam = set_diameter(dom, MetricKind::J, pts);
                    worst = std::max(worst, diam - j_cone_diameter_bound(a, phi, r));
                }
        report.push_back(check("prop21_j_diameter_dominance", worst, 0.0, 0.0));
    }

    {  // Lemma 2.3 sandwich
        double worst = -1e300;
        int idx = 0;
        for (double phi : {0.3, 0.9})
            for (double r : {0.05, 0.2}) {
                ConeSpec cone(e1(g.n), phi);
                TruncatedConeSpec shell(cone, r, r * (1 - 1e-9));
                std::vector<Point> pts;
                try {
                    pts = sample_region(shell, 50, g.seed + 200 + idx++);
                } catch (const SamplingError&) {
                    TruncatedConeSpec thick(cone, r, r * 0.999);
                    pts = sample_region(thick, 50, g.seed + 200 + idx++);
                }
                double lower = rho_radial(0.0, 1.0 - r);
                double s = s_bound(r, phi);
                for (const auto& x : pts) {
                    double rx = rho(Point(g.n, 0.0), x);
                    worst = std::max(worst, lower - rx);
                    worst = std::max(worst, rx - s);
                }
            }
        report.push_back(check("lemma23_rho_sandwich", worst, 0.0, 1e-6));
    }

    {  // ring capacity, plane, modest resolution
        auto grid = make_ring_grid(2, 1.0, std::exp(1.0), 96);
        double est = capacity_estimate(grid, 1e-7);
        double exact = ring_capacity_exact(2, 1.0, std::exp(1.0));
        report.push_back(check("ring_capacity_n2_rel_err", std::fabs(est / exact - 1.0), 0.05, 0.0));
    }

    report.push_back(check("b2_anchor", std::fabs(b_n(2) - 1.0 / (2.0 * M_PI)), 0.0, 1e-10));
    report.push_back(check("c1_identity",
                           std::fabs(ctx.c1 - 1.0 / std::log1p(ctx.lambda_K)), 0.0, 1e-12));
    report.push_back(
        check("c3_identity", std::fabs(ctx.c3 - std::pow(2.0, ctx.n) * ctx.bn), 0.0, 1e-12));

    {  // beta saturation and monotonicity
        double N = n_bound(0.25, 0.5, false, ctx);
        double thr = ctx.c3 * N / (2.0 * ctx.c1);
        double sat = std::fabs(beta(thr, N, ctx) - ctx.beta0);
        report.push_back(check("beta_saturation_at_threshold", sat, 0.0, 1e-15));
        double prev = 0.0, worst = -1e300;
        for (int i = 1; i <= 100; ++i) {
            double b = beta(thr * 2.0 * i / 100.0, N, ctx);
            worst = std::max(worst, prev - b);
            prev = b;
        }
        report.push_back(check("beta_monotone_in_delta", worst, 0.0, 0.0));
    }

    Output out(g, "verify.json");
    out.stream() << report.dump(2) << '\n';
    for (const auto& c : report)
        if (!c["pass"].get<bool>()) return 1;
    return 0;
}

int cmd_scan(const GlobalArgs& g, const std::string& theorem, const std::string& profile_path,
             double phi, ScanOptions opts) {
    ConstantsContext ctx = load_context(g);
    std::ifstream in(profile_path);
    if (!in) throw std::invalid_argument("cannot open profile " + profile_path);
    RateProfile profile = RateProfile::load_csv(in);
    ScanVerdict v;
    if (theorem == "lindelof")
        v = scan_lindelof(profile, phi, ctx, opts);
    else if (theorem == "tangential")
        v = scan_tangential(profile, ctx, opts);
    else if (theorem == "koebe")
        v = scan_koebe(profile, phi, ctx, opts);
    else
        throw CLI::ValidationError("scan", "unknown theorem " + theorem);
    Output out(g, "scan.csv");
    v.save_csv(out.stream());
    for (const auto& [key, value] : v.report())
        if (key != "verdict") out.stream() << "# " << key << "=" << value << '\n';
    out.stream() << "verdict=" << to_string(v.verdict) << '\n';
    return 0;
}

int cmd_boundary(const GlobalArgs& g, const std::string& map_kind, double alpha,
                 const std::vector<double>& a, const std::string& curve_kind, double angle,
                 const std::vector<double>& b_in, double r_max, std::size_t count) {
    MapSpec m = MapSpec::singular_inner();
    if (map_kind == "mobius")
        m = MapSpec::mobius(a.empty() ? Point(g.n, 0.0) : Point(a));
    else if (map_kind == "stretch")
        m = MapSpec::radial_stretch(alpha);
    else if (map_kind != "inner")
        throw CLI::ValidationError("boundary", "unknown map " + map_kind);

    Point b = b_in.empty() ? e1(map_kind == "inner" ? 2 : g.n) : Point(b_in);
    ApproachCurve curve = ApproachCurve::radial(b);
    if (curve_kind == "cone")
        curve = ApproachCurve::cone_ray(b, angle);
    else if (curve_kind == "parabola")
        curve = ApproachCurve::tangential_parabola(b);
    else if (curve_kind != "radial")
        throw CLI::ValidationError("boundary", "unknown curve " + curve_kind);

    std::vector<double> radii;
    for (std::size_t i = 0; i < count; ++i) radii.push_back(r_max * std::pow(0.5, double(i) / 4));

    auto scan = boundary_scan(m, curve, radii);
    Output out(g, "boundary.csv");
    out.stream() << "# map=" << map_kind << " curve=" << curve_kind << '\n' << "r,abs_f\n";
    for (const auto& [r, v] : scan) out.stream() << fmt(r) << ',' << fmt(v) << '\n';
    return 0;
}

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::PaperPinned: return "paper-pinned";
        case Provenance::ConfiguredFile: return "configured-file";
        default: return "configured-default";
    }
}

int cmd_constants(const GlobalArgs& g, double K, const std::string& theorem, double phi,
                  double r) {
    ConstantsContext ctx = load_context(g, K);
    Output out(g, "constants.txt");
    auto& os = out.stream();
    os << "n=" << ctx.n << "\nK=" << fmt(ctx.K) << "\nlambda_K=" << fmt(ctx.lambda_K) << "  # "
       << provenance_name(ctx.lambda_provenance) << "\nc0=" << fmt(ctx.c0) << "  # "
       << provenance_name(ctx.c0_provenance) << "\nc2=" << fmt(ctx.c2) << "  # "
       << provenance_name(ctx.c2_provenance) << "\nc1=" << fmt(ctx.c1) << "\nb_n=" << fmt(ctx.bn)
       << "\nc3=" << fmt(ctx.c3) << "\nbeta0=" << fmt(ctx.beta0) << '\n';
    if (!theorem.empty()) {
        TheoremKind kind = TheoremKind::Lindelof;
        if (theorem == "tangential")
            kind = TheoremKind::Tangential;
        else if (theorem == "koebe")
            kind = TheoremKind::Koebe;
        else if (theorem != "lindelof")
            throw CLI::ValidationError("constants", "unknown theorem " + theorem);
        for (const auto& [name, value] : theorem_constants(kind, phi, r, ctx))
            os << name << '=' << fmt(value) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperbolic-type metrics, condenser capacity, and decay-envelope scans "
                 "in the unit ball"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--n", g.n, "ambient dimension")->check(CLI::Range(2, 16));
    app.add_option("--config", g.config, "constants config file");
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--out", g.out_dir, "output directory (default: stdout)");

    auto* metrics = app.add_subcommand("metrics", "evaluate metrics between two points");
    bool want_rho = false, want_j = false, want_k = false, chain = false;
    std::size_t samples = 100;
    double k_tol = 1e-3;
    std::vector<double> coords;
    metrics->add_flag("--rho", want_rho, "hyperbolic distance");
    metrics->add_flag("--j", want_j, "distance-ratio metric");
    metrics->add_flag("--k", want_k, "quasihyperbolic estimate");
    metrics->add_flag("--chain", chain, "sample pairs and emit j,k,rho,2j columns");
    metrics->add_option("--samples", samples, "pair count for --chain");
    metrics->add_option("--k-tol", k_tol, "tolerance of the k estimator");
    metrics->add_option("coords", coords, "x then y coordinates");

    auto* verify = app.add_subcommand("verify", "run the invariant suite, JSON report");

    auto* scan = app.add_subcommand("scan", "hypothesis scan over a rate profile");
    std::string theorem = "lindelof", profile_path;
    double scan_phi = 0.5;
    ScanOptions scan_opts;
    scan->add_option("--theorem", theorem, "lindelof | tangential | koebe");
    scan->add_option("--profile", profile_path, "rate profile CSV")->required();
    scan->add_option("--phi", scan_phi, "cone half-angle");
    scan->add_option("--window", scan_opts.window, "trailing window length");
    scan->add_option("--threshold", scan_opts.threshold, "divergence threshold on T");
    scan->add_option("--delta-floor", scan_opts.delta_floor, "tangential delta lower bound");
    scan->add_flag("--proof-normalization", scan_opts.proof_normalization,
                   "divide delta by c0*gamma as in the proofs");

    auto* boundary = app.add_subcommand("boundary", "|f| along an approach curve");
    std::string map_kind = "inner", curve_kind = "radial";
    double alpha = 2.0, angle = 0.3, r_max = 0.5;
    std::size_t bcount = 40;
    std::vector<double> mobius_a, target_b;
    boundary->add_option("--map", map_kind, "mobius | stretch | inner");
    boundary->add_option("--alpha", alpha, "stretch exponent");
    boundary->add_option("--a", mobius_a, "mobius center coordinates");
    boundary->add_option("--curve", curve_kind, "radial | cone | parabola");
    boundary->add_option("--angle", angle, "cone ray angle");
    boundary->add_option("--b", target_b, "boundary target coordinates");
    boundary->add_option("--r-max", r_max, "largest curve parameter");
    boundary->add_option("--count", bcount, "number of radii (quarter-dyadic)");

    auto* constants = app.add_subcommand("constants", "dump the constant ledger");
    double K = 1.0, cphi = 0.5, cr = std::numeric_limits<double>::quiet_NaN();
    std::string ctheorem;
    constants->add_option("--K", K, "distortion constant");
    constants->add_option("--theorem", ctheorem, "also dump lindelof | tangential | koebe");
    constants->add_option("--phi", cphi, "cone half-angle");
    constants->add_option("--r", cr, "radius (koebe)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*metrics)
            return cmd_metrics(g, want_rho, want_j, want_k, chain, samples, k_tol, coords);
        if (*verify) return cmd_verify(g);
        if (*scan) {
            try {
                return cmd_scan(g, theorem, profile_path, scan_phi, scan_opts);
            } catch (const std::invalid_argument& e) {
                std::cerr << "error: " << e.what() << '\n';
                return 2;
            }
        }
        if (*boundary)
            return cmd_boundary(g, map_kind, alpha, mobius_a, curve_kind, angle, target_b, r_max,
                                bcount);
        if (*constants) return cmd_constants(g, K, ctheorem, cphi, cr);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        // configuration problems are usage errors, computation problems are not
        return std::string(e.what()).find("config") != std::string::npos ? 2 : 1;
    }
    return 2;
}
