#include "qrlim/envelopes.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace qrlim {

namespace {

[[noreturn]] void row_error(std::size_t row, const std::string& what) {
    throw std::invalid_argument("profile csv row " + std::to_string(row) + ": " + what);
}

// log of a positive decimal literal; handles exponents far outside the double
// range (e.g. 1e-5000000) by splitting mantissa and exponent.
double log_of_decimal(const std::string& token, std::size_t row) {
    std::string s = token;
    auto epos = s.find_first_of("eE");
    double expo10 = 0.0;
    if (epos != std::string::npos) {
        try {
            expo10 = std::stod(s.substr(epos + 1));
        } catch (const std::exception&) {
            row_error(row, "bad exponent in '" + token + "'");
        }
        s.erase(epos);
    }
    double mant = 0.0;
    std::size_t used = 0;
    try {
        mant = std::stod(s, &used);
    } catch (const std::exception&) {
        row_error(row, "bad number '" + token + "'");
    }
    if (used != s.size()) row_error(row, "bad number '" + token + "'");
    if (!(mant > 0.0)) row_error(row, "value must be positive: '" + token + "'");
    return std::log(mant) + expo10 * std::log(10.0);
}

double parse_field(const std::string& token, std::size_t row) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        row_error(row, "bad number '" + token + "'");
    }
    if (used != token.size()) row_error(row, "bad number '" + token + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) {
        std::size_t b = field.find_first_not_of(" \t\r");
        std::size_t e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    return out;
}

void write_log_value(std::ostream& os, double log_value) {
    if (log_value > -700.0) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", std::exp(log_value));
        os << buf;
        return;
    }
    double x = log_value / std::log(10.0);
    double e = std::floor(x);
    double mant = std::pow(10.0, x - e);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12ge%.0f", mant, e);
    os << buf;
}

struct Statistic {
    double log_abs_t;
    CaseLabel label;
};

ScanVerdict assemble(const RateProfile& profile, const std::vector<Statistic>& stats,
                     const ScanOptions& opts) {
    const std::size_t count = profile.samples.size();
    require(opts.window >= 3, "scan: window must be >= 3");
    if (count < static_cast<std::size_t>(opts.window))
        throw std::invalid_argument("scan: profile has fewer samples than the window");
    require(opts.threshold < 0.0, "scan: threshold must be negative");

    ScanVerdict out;
    out.stats.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.stats.push_back({profile.samples[i].r, stats[i].log_abs_t, stats[i].label});

    const std::size_t w = static_cast<std::size_t>(opts.window);
    bool trending = true;
    for (std::size_t i = count - w + 1; i < count; ++i)
        if (!(out.stats[i].log_abs_t > out.stats[i - 1].log_abs_t)) trending = false;

    // least-squares slope of log|T| against sample index over the window
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = count - w; i < count; ++i) {
        double x = static_cast<double>(i);
        sx += x;
        sy += out.stats[i].log_abs_t;
        sxx += x * x;
        sxy += x * out.stats[i].log_abs_t;
    }
    out.trend_slope = (w * sxy - sx * sy) / (w * sxx - sx * sx);

    bool past_threshold = out.stats.back().log_abs_t > std::log(-opts.threshold);
    if (trending && past_threshold)
        out.verdict = Verdict::Diverges;
    else if (trending)
        out.verdict = Verdict::Inconclusive;
    else
        out.verdict = Verdict::Fails;
    return out;
}

double log_abs_statistic(double log_base_num, double log_base_den, double exponent,
                         double log_epsilon) {
    // |T| = (num/den)^exponent * (-log eps), all in logs
    return exponent * (log_base_num - log_base_den) + std::log(-log_epsilon);
}

}  // namespace

void RateProfile::validate() const {
    require(!samples.empty(), "profile: no samples");
    double prev_r = 1.0;
    double prev_phi = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        auto bad = [&](const std::string& what) { row_error(i + 1, what); };
        if (!(s.r > 0.0 && s.r < 1.0)) bad("r must lie in (0,1)");
        if (!(s.r < prev_r)) bad("radii must be strictly decreasing");
        if (!(s.delta > 0.0)) bad("delta must be positive");
        if (!(std::isfinite(s.log_epsilon) && s.log_epsilon < 0.0))
            bad("epsilon must lie in (0,1)");
        if (s.has_phi() != has_phi) bad("phi column must be all-or-none");
        if (s.has_phi()) {
            if (!(s.phi > 0.0 && s.phi < M_PI / 2.0)) bad("phi must lie in (0, pi/2)");
            if (!(s.phi >= prev_phi)) bad("phi must be nondecreasing as r decreases");
            if (!(s.r < std::cos(s.phi))) bad("need r < cos(phi)");
            prev_phi = s.phi;
        }
        prev_r = s.r;
    }
}

RateProfile RateProfile::load_csv(std::istream& is) {
    RateProfile out;
    std::string line;
    std::size_t row = 0;
    bool saw_header = false;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_csv(line);
        if (!saw_header) {
            if (fields.size() == 4 && fields[3] == "phi")
                out.has_phi = true;
            else if (fields.size() != 3)
                row_error(row, "expected header r,delta,epsilon[,phi]");
            if (fields[0] != "r" || fields[1] != "delta" || fields[2] != "epsilon")
                row_error(row, "expected header r,delta,epsilon[,phi]");
            saw_header = true;
            continue;
        }
        if (fields.size() != (out.has_phi ? 4u : 3u))
            row_error(row, "wrong field count");
        RateSample s;
        s.r = parse_field(fields[0], row);
        s.delta = parse_field(fields[1], row);
        s.log_epsilon = log_of_decimal(fields[2], row);
        if (out.has_phi) s.phi = parse_field(fields[3], row);
        out.samples.push_back(s);
    }
    if (!saw_header) throw std::invalid_argument("profile csv: empty input");
    out.validate();
    return out;
}

void RateProfile::save_csv(std::ostream& os) const {
    os << (has_phi ? "r,delta,epsilon,phi\n" : "r,delta,epsilon\n");
    char buf[64];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,", s.r, s.delta);
        os << buf;
        write_log_value(os, s.log_epsilon);
        if (has_phi) {
            std::snprintf(buf, sizeof buf, ",%.17g", s.phi);
            os << buf;
        }
        os << '\n';
    }
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Diverges: return "diverges";
        case Verdict::Fails: return "fails";
        default: return "inconclusive";
    }
}

std::string to_string(CaseLabel c) { return c == CaseLabel::I0 ? "I0" : "I1"; }

double SampleStat::t() const { return -std::exp(log_abs_t); }

void ScanVerdict::save_csv(std::ostream& os) const {
    os << "r,T,case\n";
    char buf[64];
    for (const auto& s : stats) {
        std::snprintf(buf, sizeof buf, "%.17g,%.12g,", s.r, s.t());
        os << buf << to_string(s.label) << '\n';
    }
}

std::vector<std::pair<std::string, std::string>> ScanVerdict::report() const {
    char buf[40];
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("verdict", to_string(verdict));
    out.emplace_back("samples", std::to_string(stats.size()));
    std::snprintf(buf, sizeof buf, "%.6g", trend_slope);
    out.emplace_back("log_abs_T_slope", buf);
    std::snprintf(buf, sizeof buf, "%.6g", stats.empty() ? 0.0 : stats.back().log_abs_t);
    out.emplace_back("log_abs_T_last", buf);
    if (gamma3_alpha2_to_zero) out.emplace_back("gamma3_alpha2_to_zero", "true");
    if (f_must_be_constant) out.emplace_back("conclusion", "f-must-be-constant");
    return out;
}

double envelope(double epsilon, double beta, double exponent) {
    require(epsilon > 0.0 && epsilon < 1.0, "envelope: epsilon must lie in (0,1)");
    require(beta > 0.0 && beta <= 1.0, "envelope: beta must lie in (0,1]");
    require(exponent >= 0.0, "envelope: exponent must be nonnegative");
    return std::pow(epsilon, std::pow(beta, exponent));
}

CaseLabel case_split(double delta, double a, double phi_or_r, bool use_r_form,
                     const ConstantsContext& ctx) {
    require(delta > 0.0, "case_split: delta must be positive");
    double N = n_bound(a, phi_or_r, use_r_form, ctx);
    return delta >= ctx.c3 * N / (2.0 * ctx.c1) ? CaseLabel::I0 : CaseLabel::I1;
}

ScanVerdict scan_lindelof(const RateProfile& profile, double phi, const ConstantsContext& ctx,
                          const ScanOptions& opts) {
    profile.validate();
    if (profile.has_phi)
        throw std::invalid_argument("scan_lindelof: profile must not carry a phi column");
    auto c = lindelof_constants(phi, ctx);
    double log_den = std::log(c.gamma1) + (opts.proof_normalization ? std::log(ctx.c0) : 0.0);
    std::vector<Statistic> stats;
    stats.reserve(profile.samples.size());
    for (const auto& s : profile.samples)
        stats.push_back({log_abs_statistic(std::log(s.delta), log_den, c.alpha1, s.log_epsilon),
                         case_split(s.delta, 0.25, phi, false, ctx)});
    return assemble(profile, stats, opts);
}

ScanVerdict scan_tangential(const RateProfile& profile, const ConstantsContext& ctx,
                            const ScanOptions& opts) {
    profile.validate();
    if (!profile.has_phi)
        throw std::invalid_argument("scan_tangential: profile must carry a phi column");
    for (std::size_t i = 1; i < profile.samples.size(); ++i)
        if (!(profile.samples[i].phi > profile.samples[i - 1].phi))
            throw std::invalid_argument(
                "scan_tangential: phi must increase toward pi/2 as r decreases");
    for (std::size_t i = 0; i < profile.samples.size(); ++i)
        if (profile.samples[i].delta < opts.delta_floor)
            row_error(i + 1, "delta below the configured floor");

    std::vector<Statistic> stats;
    std::vector<double> log_g3a2;
    stats.reserve(profile.samples.size());
    for (const auto& s : profile.samples) {
        auto c = tangential_constants(s.phi, ctx);
        // |T| = gamma3^alpha2 * (-log eps)
        double lg = c.alpha2 * std::log(c.gamma3);
        log_g3a2.push_back(lg);
        stats.push_back({lg + std::log(-s.log_epsilon),
                         case_split(s.delta, 0.5, s.phi, false, ctx)});
    }
    ScanVerdict out = assemble(profile, stats, opts);
    std::size_t w = static_cast<std::size_t>(opts.window);
    bool to_zero = true;
    for (std::size_t i = log_g3a2.size() - w + 1; i < log_g3a2.size(); ++i)
        if (!(log_g3a2[i] < log_g3a2[i - 1])) to_zero = false;
    out.gamma3_alpha2_to_zero = to_zero;
    return out;
}

ScanVerdict scan_koebe(const RateProfile& profile, double phi, const ConstantsContext& ctx,
                       const ScanOptions& opts) {
    profile.validate();
    if (profile.has_phi)
        throw std::invalid_argument("scan_koebe: profile must not carry a phi column");
    for (std::size_t i = 0; i < profile.samples.size(); ++i)
        if (!(profile.samples[i].r < std::cos(phi)))
            row_error(i + 1, "need r < cos(phi)");

    std::vector<Statistic> stats;
    stats.reserve(profile.samples.size());
    for (const auto& s : profile.samples) {
        auto c = koebe_constants(s.r, phi, ctx);
        double log_den = std::log(c.gamma4) + (opts.proof_normalization ? std::log(ctx.c0) : 0.0);
        stats.push_back({log_abs_statistic(std::log(s.delta), log_den, c.alpha3, s.log_epsilon),
                         case_split(s.delta, 0.5, s.r, true, ctx)});
    }
    ScanVerdict out = assemble(profile, stats, opts);
    out.f_must_be_constant = (out.verdict == Verdict::Diverges);
    return out;
}

}  // namespace qrlim
