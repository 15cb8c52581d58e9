#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace nwfl {

// Arbitrary-precision rationals keep the exponent calculus exact; no floats
// enter any of the computations in this header.
using rational = mpq_class;

// Accepts "p/q", integers, and finite decimals ("3.5" -> 7/2).
rational parse_rational(const std::string& text);
std::string rational_str(const rational& x);
double rational_double(const rational& x);

struct RationalOrInf {
    bool is_infinity = false;
    rational value; // meaningful only when !is_infinity
};
std::string rational_str(const RationalOrInf& x);

// r solving 1/m + 1/3 = 1 + 1/r, i.e. 1/r = 1/m - 2/3. Infinity at m = 3/2;
// m outside (1, 3/2] is rejected.
RationalOrInf hls_conjugate(const rational& m);

struct HLSExponents {
    rational m;
    RationalOrInf r;
};
HLSExponents hls_exponents(const rational& m);

// a(beta) = q+1 - (q-1)/(beta+1); strictly increasing in beta, -> q+1.
rational a_of_beta(const rational& q, const rational& beta);

// One bootstrap step beta -> beta_tilde = beta + h certified when both flags
// hold. theta = (q+1)/(q-1) * (a-2)/a, s = 2/((1-theta) beta_tilde),
// s' = s/(s-1) (defined only when s > 1), valid_condi: theta s' <= (q+1)/q.
struct BootstrapReport {
    rational q, beta, h, beta_tilde, a;
    rational theta, s;
    std::optional<rational> s_prime, theta_s_prime;
    bool valid_s = false;
    bool valid_condi = false;
};

// Domain: q >= 3, beta >= 2, h in (0,2), 2 <= a < q+1. The lower endpoint
// a = 2 is admitted as the degenerate theta = 0 case.
BootstrapReport bootstrap_exponents(const rational& q, const rational& beta, const rational& h,
                                    const rational& a);

// Admissible initial-exponent window for q in (1,5): gamma0 = max{3, q};
// below the threshold q = 17/5 the window is (max{3, (3/2)(q-1)}, 18/5),
// above it ((3/2)(q-1), q+1). Every p0 inside satisfies
// gamma0 < 1 + (2/3) p0.
struct AmannWindow {
    rational q, gamma0, p0_low, p0_high;
    bool nonempty = false;
};
AmannWindow amann_window(const rational& q);

} // namespace nwfl
