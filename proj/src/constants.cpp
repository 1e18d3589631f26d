#include "qrlim/constants.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qrlim/capacity.hpp"  // sphere_surface_area
#include "qrlim/metrics.hpp"   // s_bound

namespace qrlim {

namespace {

// Double-exponential quadrature on (0, b); handles the integrable endpoint
// singularity of the b_n integrand.
template <typename F>
double tanh_sinh(F f, double b, double abs_tol) {
    const double tmax = 5.0;
    auto eval = [&](double t) {
        double u = (M_PI / 2.0) * std::sinh(t);
        // x = (b/2)(1 + tanh u), kept away from exact 0/b.
        double e2u = std::exp(2.0 * std::min(u, 350.0));
        double x = b * e2u / (1.0 + e2u);
        if (x <= 0.0 || x >= b) return 0.0;
        double sech = 1.0 / std::cosh(u);
        double w = (b / 2.0) * (M_PI / 2.0) * std::cosh(t) * sech * sech;
        return w * f(x);
    };
    double h = 0.5;
    double sum = eval(0.0);
    for (double t = h; t <= tmax; t += h) sum += eval(t) + eval(-t);
    double integral = sum * h;
    for (int level = 0; level < 10; ++level) {
        h *= 0.5;
        double add = 0.0;
        for (double t = h; t <= tmax; t += 2.0 * h) add += eval(t) + eval(-t);
        double next = integral / 2.0 + add * h;
        if (level >= 2 && std::fabs(next - integral) < abs_tol) return next;
        integral = next;
    }
    return integral;
}

}  // namespace

double b_n(int n) {
    require(n >= 2, "b_n: n must be >= 2");
    const double expo = (2.0 - n) / (n - 1.0);
    double integral = tanh_sinh([&](double t) { return std::pow(std::sin(t), expo); },
                                M_PI / 2.0, 1e-13);
    // omega_{n-2} = (n-1) * Omega_{n-1}
    double omega = sphere_surface_area(n - 1);
    return std::pow(2.0, 1.0 - 2.0 * n) * omega * std::pow(integral, 1.0 - n);
}

ConstantsContext::ConstantsContext(int n_, double K_, double lambda, double c0_, double c2_)
    : n(n_), K(K_), lambda_K(lambda), c0(c0_), c2(c2_) {
    require(n >= 2, "ConstantsContext: n must be >= 2");
    require(K >= 1.0, "ConstantsContext: K must be >= 1");
    require(lambda_K > 0.0 && lambda_K < 0.5, "ConstantsContext: lambda_K must lie in (0, 1/2)");
    require(c0 > 0.0, "ConstantsContext: c0 must be positive");
    require(c2 > 0.0, "ConstantsContext: c2 must be positive");
    c1 = 1.0 / std::log1p(lambda_K);
    bn = b_n(n);
    c3 = std::pow(2.0, n) * bn;
    beta0 = c2 * std::pow(c3 / (2.0 * c1), 1.0 / (n - 1.0));
}

ConstantsContext ConstantsContext::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("constants: cannot open config file " + path);
    int n = 2;
    double K = 1.0, lambda = 0.25, c0 = 1.0, c2 = 1.0;
    bool saw_lambda = false, saw_c0 = false, saw_c2 = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string key, eq, value;
        std::istringstream ls(line);
        if (!(ls >> key)) continue;
        auto eqpos = key.find('=');
        if (eqpos != std::string::npos) {
            value = key.substr(eqpos + 1);
            key.erase(eqpos);
            if (value.empty()) ls >> value;
        } else {
            ls >> eq;
            if (eq == "=")
                ls >> value;
            else
                value = eq;
        }
        if (key.empty() || value.empty())
            throw std::invalid_argument("constants: malformed line " + std::to_string(lineno));
        try {
            if (key == "n")
                n = std::stoi(value);
            else if (key == "K")
                K = std::stod(value);
            else if (key == "lambda_K") {
                lambda = std::stod(value);
                saw_lambda = true;
            } else if (key == "c0") {
                c0 = std::stod(value);
                saw_c0 = true;
            } else if (key == "c2") {
                c2 = std::stod(value);
                saw_c2 = true;
            } else
                throw std::invalid_argument("constants: unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("constants: bad value on line " + std::to_string(lineno));
        }
    }
    ConstantsContext ctx(n, K, lambda, c0, c2);
    if (saw_lambda) ctx.lambda_provenance = Provenance::ConfiguredFile;
    if (saw_c0) ctx.c0_provenance = Provenance::ConfiguredFile;
    if (saw_c2) ctx.c2_provenance = Provenance::ConfiguredFile;
    return ctx;
}

double beta(double delta, double N, const ConstantsContext& ctx) {
    require(delta > 0.0 && N > 0.0, "beta: delta and N must be positive");
    double small = std::pow(delta / N, 1.0 / (ctx.n - 1.0));
    double cap = std::pow(ctx.c3 / (2.0 * ctx.c1), 1.0 / (ctx.n - 1.0));
    return ctx.c2 * std::min(small, cap);
}

double n_bound(double a, double phi_or_r, bool use_r_form, const ConstantsContext& ctx) {
    require(a > 0.0 && a < 1.0, "n_bound: a must lie in (0,1)");
    double q;
    if (use_r_form) {
        double r = phi_or_r;
        require(r > 0.0 && r < 1.0, "n_bound: r must lie in (0,1)");
        q = (2.0 + a * r) * (1.0 + a) / (a * (2.0 - a) * r * r * ctx.lambda_K);
    } else {
        double phi = phi_or_r;
        require(phi > 0.0 && phi < M_PI / 2.0, "n_bound: phi must lie in (0, pi/2)");
        double c = std::cos(phi);
        q = (2.0 + a * c) * (1.0 + a) / (a * (2.0 - a) * c * c * ctx.lambda_K);
    }
    return ctx.c0 * std::pow(2.0 + q, ctx.n);
}

LindelofConstants lindelof_constants(double phi, const ConstantsContext& ctx) {
    require(phi > 0.0 && phi < M_PI / 2.0, "lindelof_constants: phi must lie in (0, pi/2)");
    double c = std::cos(phi);
    LindelofConstants out;
    out.alpha1 = (24.0 * ctx.c1 / c + 1.0) / (ctx.n - 1.0);
    out.gamma1 = std::pow((14.0 * ctx.lambda_K * c * c + 5.0 * c + 40.0) /
                              (7.0 * ctx.lambda_K * c * c),
                          ctx.n);
    return out;
}

TangentialConstants tangential_constants(double phi, const ConstantsContext& ctx) {
    require(phi > 0.0 && phi < M_PI / 2.0, "tangential_constants: phi must lie in (0, pi/2)");
    double c = std::cos(phi);
    TangentialConstants out;
    out.alpha2 = 2.0 * ctx.c1 * std::log1p((4.0 + c) / (c * c)) + 1.0;
    double inner = (2.0 * ctx.lambda_K * c * c + c + 4.0) / (ctx.lambda_K * c * c);
    out.gamma2 = std::pow(inner, ctx.n);
    out.gamma3 = std::pow(inner, ctx.n / (1.0 - ctx.n));
    return out;
}

KoebeConstants koebe_constants(double r, double phi, const ConstantsContext& ctx) {
    require(phi > 0.0 && phi < M_PI / 2.0, "koebe_constants: phi must lie in (0, pi/2)");
    require(r > 0.0 && r < std::cos(phi), "koebe_constants: need 0 < r < cos(phi)");
    KoebeConstants out;
    out.alpha3 = (s_bound(r, phi) * ctx.c1 + 1.0) / (ctx.n - 1.0);
    out.gamma4 = std::pow((2.0 * ctx.lambda_K * r * r + r + 4.0) / (ctx.lambda_K * r * r), ctx.n);
    return out;
}

std::vector<std::pair<std::string, double>> theorem_constants(TheoremKind which, double phi,
                                                              double r,
                                                              const ConstantsContext& ctx) {
    switch (which) {
        case TheoremKind::Lindelof: {
            auto c = lindelof_constants(phi, ctx);
            return {{"alpha1", c.alpha1}, {"gamma1", c.gamma1}};
        }
        case TheoremKind::Tangential: {
            auto c = tangential_constants(phi, ctx);
            return {{"alpha2", c.alpha2}, {"gamma2", c.gamma2}, {"gamma3", c.gamma3}};
        }
        default: {
            require(std::isfinite(r), "theorem_constants: r is required for the Koebe constants");
            auto c = koebe_constants(r, phi, ctx);
            return {{"alpha3", c.alpha3}, {"gamma4", c.gamma4}};
        }
    }
}

}  // namespace qrlim
