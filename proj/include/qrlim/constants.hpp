#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qrlim/common.hpp"

namespace qrlim {

enum class Provenance { PaperPinned, ConfiguredDefault, ConfiguredFile };

// Spherical-cap constant b_n = 2^(1-2n) omega_{n-2} I^(1-n) with
// I = integral over (0, pi/2) of sin(t)^((2-n)/(n-1)) dt; b_2 = 1/(2 pi).
double b_n(int n);

// Explicit constant ledger of the two-constants machinery.  lambda_K, c0 and
// c2 are existential constants with configured defaults; everything else is
// derived from them.
struct ConstantsContext {
    int n = 2;
    double K = 1.0;
    double lambda_K = 0.25;
    double c0 = 1.0;
    double c2 = 1.0;
    // derived
    double c1 = 0.0;     // 1 / log(1 + lambda_K)
    double bn = 0.0;     // b_n(n)
    double c3 = 0.0;     // 2^n b_n
    double beta0 = 0.0;  // c2 (c3 / (2 c1))^(1/(n-1))

    Provenance lambda_provenance = Provenance::ConfiguredDefault;
    Provenance c0_provenance = Provenance::ConfiguredDefault;
    Provenance c2_provenance = Provenance::ConfiguredDefault;

    ConstantsContext(int n, double K, double lambda_K = 0.25, double c0 = 1.0, double c2 = 1.0);

    // Key-value file with keys n, K, lambda_K, c0, c2; '#' comments allowed;
    // unknown keys rejected.  Derived fields are always recomputed.
    static ConstantsContext from_file(const std::string& path);
};

// beta(delta, N) = c2 min{ (delta/N)^(1/(n-1)), (c3/(2 c1))^(1/(n-1)) }.
double beta(double delta, double N, const ConstantsContext& ctx);

// Upper bound on the covering count N:
//   c0 * (2 + (2 + a cos phi)(1 + a) / (a (2 - a) cos^2(phi) lambda))^n  or,
// with use_r_form,
//   c0 * (2 + (2 + a r)(1 + a) / (a (2 - a) r^2 lambda))^n.
double n_bound(double a, double phi_or_r, bool use_r_form, const ConstantsContext& ctx);

struct LindelofConstants {
    double alpha1;  // (24 c1 / cos phi + 1) / (n - 1)
    double gamma1;
};
struct TangentialConstants {
    double alpha2;  // 2 c1 log(1 + (4 + cos phi)/cos^2 phi) + 1
    double gamma2;
    double gamma3;  // gamma2^(1/(1-n))
};
struct KoebeConstants {
    double alpha3;  // (s(r, phi) c1 + 1) / (n - 1)
    double gamma4;
};

LindelofConstants lindelof_constants(double phi, const ConstantsContext& ctx);
TangentialConstants tangential_constants(double phi, const ConstantsContext& ctx);
KoebeConstants koebe_constants(double r, double phi, const ConstantsContext& ctx);

enum class TheoremKind { Lindelof, Tangential, Koebe };

// Flat named dump for reports; r is ignored except for Koebe, where it is
// required.
std::vector<std::pair<std::string, double>> theorem_constants(TheoremKind which, double phi,
                                                              double r,
                                                              const ConstantsContext& ctx);

}  // namespace qrlim
