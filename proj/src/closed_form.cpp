#include "arqsec/analysis/closed_form.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace arqsec::analysis {
namespace {

void check_prob(double g)
{
    if (!(g >= 0.0 && g <= 1.0)) {
        throw std::invalid_argument("erasure probability outside [0, 1]");
    }
}

/// sum of log(1 - g), -inf if any g == 1.
double log_survival(const std::vector<double>& gammas)
{
    double acc = 0.0;
    for (double g : gammas) {
        check_prob(g);
        acc += std::log1p(-g);
    }
    return acc;
}

double pow_survival(double g, double exponent)
{
    check_prob(g);
    if (exponent == 0.0) {
        return 1.0;
    }
    return std::exp(exponent * std::log1p(-g));
}

}  // namespace

double p0_closed(const std::vector<double>& gamma_ae, const std::vector<double>& gamma_be)
{
    return std::exp(log_survival(gamma_ae) + log_survival(gamma_be));
}

double p0_closed(double gamma_ae, double gamma_be, unsigned n)
{
    if (n % 2 != 0) {
        throw std::invalid_argument("p0_closed: n must be even");
    }
    return pow_survival(gamma_ae, n / 2) * pow_survival(gamma_be, n / 2);
}

double useful_frames_bound(double gamma_e, std::uint64_t n, std::uint64_t big_n)
{
    check_prob(gamma_e);
    if (big_n <= n) {
        return 0.0;
    }
    const double span = static_cast<double>(big_n - n);
    if (gamma_e == 0.0) {
        return span;
    }
    if (gamma_e == 1.0) {
        return 0.0;
    }
    const double ls = std::log1p(-gamma_e);
    // s^(n+1) (1 - s^(N-n)) / gamma
    return std::exp(static_cast<double>(n + 1) * ls) * -std::expm1(span * ls) / gamma_e;
}

double outage_blind(const std::vector<double>& gamma_ae, const std::vector<double>& gamma_be)
{
    if (gamma_ae.size() != gamma_be.size()) {
        throw std::invalid_argument("outage_blind: index sets differ");
    }
    return std::exp(log_survival(gamma_ae) + log_survival(gamma_be));
}

double outage_blind(double gamma_ae, double gamma_be, unsigned n)
{
    return pow_survival(gamma_ae, n) * pow_survival(gamma_be, n);
}

double outage_knows_ids(const std::vector<double>& gamma_ae)
{
    return std::exp(log_survival(gamma_ae));
}

double outage_knows_ids(double gamma_ae, unsigned n)
{
    return pow_survival(gamma_ae, n);
}

double outage_bounded(double gamma_ae, double gamma_be, unsigned n, unsigned ell, int sum_bound_offset)
{
    check_prob(gamma_ae);
    check_prob(gamma_be);
    if (ell < 1 || ell > n) {
        throw std::invalid_argument("outage_bounded requires 1 <= l <= n");
    }
    using boost::multiprecision::cpp_int;
    using Float = boost::multiprecision::cpp_bin_float_50;

    const long top = static_cast<long>(ell) - 1 + sum_bound_offset;
    const Float g = gamma_be;
    Float sum = 0;
    Float g_pow = 1;
    for (long i = 0; i <= top; ++i) {
        // C(n - l + i, i), exact
        cpp_int c = 1;
        const long base = static_cast<long>(n) - static_cast<long>(ell);
        for (long j = 1; j <= i; ++j) {
            c *= base + j;
            c /= j;
        }
        sum += Float(c) * g_pow;
        g_pow *= g;
    }
    const Float a = pow(Float(1) - Float(gamma_ae), static_cast<int>(n));
    const Float b = pow(Float(1) - g, static_cast<int>(n - ell + 1));
    return static_cast<double>(a * b * sum);
}

}  // namespace arqsec::analysis
