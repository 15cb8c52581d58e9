#include "newtonflow/rational_exponents.hpp"

#include <cctype>

#include "newtonflow/errors.hpp"

namespace nwfl {

rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw config_error("rational: empty string");
    try {
        const auto dot = s.find('.');
        if (dot != std::string::npos) {
            if (s.find('/') != std::string::npos)
                throw std::invalid_argument("mixed decimal and fraction");
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            const std::size_t frac_len = s.size() - dot - 1;
            if (frac_len == 0 || digits.empty()) throw std::invalid_argument("bad decimal");
            rational x(digits, 10);
            rational den(1);
            for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
            x /= den;
            x.canonicalize();
            return x;
        }
        rational x(s, 10);
        if (x.get_den() == 0) throw std::invalid_argument("zero denominator");
        x.canonicalize();
        return x;
    } catch (const std::invalid_argument&) {
        throw config_error("rational: cannot parse '" + text + "' (want p/q, integer, or decimal)");
    }
}

namespace {

// GMP comparisons assume canonical form; normalize owned copies of caller
// rationals so p/q inputs with common factors cannot corrupt the calculus.
rational canon(const rational& x) {
    rational y = x;
    y.canonicalize();
    return y;
}

} // namespace

std::string rational_str(const rational& x) { return x.get_str(); }

std::string rational_str(const RationalOrInf& x) {
    return x.is_infinity ? "inf" : x.value.get_str();
}

double rational_double(const rational& x) { return x.get_d(); }

RationalOrInf hls_conjugate(const rational& m_in) {
    const rational m = canon(m_in);
    const rational three_half(3, 2);
    if (m <= 1 || m > three_half)
        throw domain_error("hls_conjugate: m must lie in (1, 3/2], got " + m.get_str());
    if (m == three_half) return RationalOrInf{true, rational(0)};
    // 1/r = 1/m - 2/3 = (3 - 2m)/(3m)
    rational inv_r = (3 - 2 * m) / (3 * m);
    RationalOrInf r;
    r.value = 1 / inv_r;
    return r;
}

HLSExponents hls_exponents(const rational& m) { return HLSExponents{m, hls_conjugate(m)}; }

rational a_of_beta(const rational& q_in, const rational& beta_in) {
    const rational q = canon(q_in), beta = canon(beta_in);
    if (q <= 1) throw domain_error("a_of_beta: q must be > 1, got " + q.get_str());
    if (beta < 2) throw domain_error("a_of_beta: beta must be >= 2, got " + beta.get_str());
    return q + 1 - (q - 1) / (beta + 1);
}

BootstrapReport bootstrap_exponents(const rational& q_in, const rational& beta_in,
                                    const rational& h_in, const rational& a_in) {
    const rational q = canon(q_in), beta = canon(beta_in), h = canon(h_in), a = canon(a_in);
    if (q < 3) throw domain_error("bootstrap_exponents: q must be >= 3, got " + q.get_str());
    if (beta < 2) throw domain_error("bootstrap_exponents: beta must be >= 2, got " + beta.get_str());
    if (!(h > 0 && h < 2))
        throw domain_error("bootstrap_exponents: h must lie in (0,2), got " + h.get_str());
    if (!(a >= 2 && a < q + 1))
        throw domain_error("bootstrap_exponents: a must lie in [2, q+1), got " + a.get_str());
    BootstrapReport rep;
    rep.q = q;
    rep.beta = beta;
    rep.h = h;
    rep.beta_tilde = beta + h;
    rep.a = a;
    rep.theta = (q + 1) / (q - 1) * (a - 2) / a;
    rep.s = 2 / ((1 - rep.theta) * rep.beta_tilde);
    rep.valid_s = rep.s > 1;
    if (rep.valid_s) {
        rep.s_prime = rep.s / (rep.s - 1);
        rep.theta_s_prime = rep.theta * *rep.s_prime;
        rep.valid_condi = *rep.theta_s_prime <= (q + 1) / q;
    }
    return rep;
}

AmannWindow amann_window(const rational& q_in) {
    const rational q = canon(q_in);
    if (!(q > 1 && q < 5))
        throw domain_error("amann_window: q must lie in (1,5), got " + q.get_str());
    AmannWindow w;
    w.q = q;
    w.gamma0 = q > 3 ? q : rational(3);
    const rational three_half_qm1 = rational(3, 2) * (q - 1);
    const rational threshold(17, 5);
    if (q < threshold) {
        w.p0_low = three_half_qm1 > 3 ? three_half_qm1 : rational(3);
        w.p0_high = rational(18, 5);
    } else {
        w.p0_low = three_half_qm1;
        w.p0_high = q + 1;
    }
    w.nonempty = w.p0_low < w.p0_high;
    return w;
}

} // namespace nwfl
