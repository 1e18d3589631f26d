#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "qrlim/common.hpp"
#include "qrlim/constants.hpp"

namespace qrlim {

// One row of a decay profile.  epsilon is kept in log form so profiles can
// describe decay rates far below the double underflow threshold (the CSV
// loader parses such values symbolically).
struct RateSample {
    double r = 0.0;
    double delta = 0.0;
    double log_epsilon = 0.0;  // log(epsilon), always < 0
    double phi = std::numeric_limits<double>::quiet_NaN();  // NaN when absent

    double epsilon() const { return std::exp(log_epsilon); }
    bool has_phi() const { return std::isfinite(phi); }
};

// Samples sorted with r strictly decreasing toward 0.  Either every sample
// carries a phi column or none does.
struct RateProfile {
    std::vector<RateSample> samples;
    bool has_phi = false;

    void validate() const;

    // CSV with header "r,delta,epsilon[,phi]".  '#' lines are skipped.
    // Epsilon values like 1e-5000000 are accepted and stored as log_epsilon.
    static RateProfile load_csv(std::istream& is);
    void save_csv(std::ostream& os) const;
};

enum class Verdict { Diverges, Fails, Inconclusive };
enum class CaseLabel { I0, I1 };

std::string to_string(Verdict v);
std::string to_string(CaseLabel c);

struct SampleStat {
    double r = 0.0;
    double log_abs_t = 0.0;  // log|T|; T itself is always negative
    CaseLabel label = CaseLabel::I1;

    // T clamped into double range (-inf on overflow, -0 on underflow).
    double t() const;
};

struct ScanVerdict {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<SampleStat> stats;
    double trend_slope = 0.0;  // least-squares slope of log|T| over the window
    // scanner-specific notes
    bool gamma3_alpha2_to_zero = false;  // tangential sanity limit
    bool f_must_be_constant = false;     // koebe conclusion tag

    void save_csv(std::ostream& os) const;  // per-sample "r,T,case"
    std::vector<std::pair<std::string, std::string>> report() const;
};

struct ScanOptions {
    int window = 5;
    double threshold = -1e3;
    bool proof_normalization = false;  // divide delta by c0*gamma as in proofs
    double delta_floor = 0.0;          // tangential: configured lower bound
};

// epsilon^(beta^exponent).
double envelope(double epsilon, double beta, double exponent);

// I0 iff delta >= c3 N / (2 c1) with N = n_bound(a, phi_or_r, use_r_form).
CaseLabel case_split(double delta, double a, double phi_or_r, bool use_r_form,
                     const ConstantsContext& ctx);

// T(r) = (delta(r)/gamma1)^alpha1 * log eps(r); a = 1/4 for the case split.
ScanVerdict scan_lindelof(const RateProfile& profile, double phi, const ConstantsContext& ctx,
                          const ScanOptions& opts = {});

// T(r) = gamma3(phi(r))^alpha2(phi(r)) * log eps(r); profile must carry phi.
ScanVerdict scan_tangential(const RateProfile& profile, const ConstantsContext& ctx,
                            const ScanOptions& opts = {});

// T(r) = (delta(r)/gamma4(r))^alpha3(r,phi) * log eps(r); a = 1/2, r-form.
ScanVerdict scan_koebe(const RateProfile& profile, double phi, const ConstantsContext& ctx,
                       const ScanOptions& opts = {});

}  // namespace qrlim
