#include "powmix/zeta.hpp"

#include <cmath>
#include <vector>

#include "powmix/errors.hpp"

namespace powmix {

namespace {

constexpr int kCutoff = 200; // summation cutoff before the tail correction

// Euler-Maclaurin tail of sum_{n>=N} n^{-b} past the partial sum to N-1.
double em_tail(double N, double b) {
    double Nb = std::pow(N, -b);
    return Nb / 2 + N * Nb / (b - 1) + b * Nb / (N * 12)
         - b * (b + 1) * (b + 2) * Nb / (N * N * N * 720);
}

void require_domain(double a) {
    if (!(a > 1.0 + 1e-6))
        throw domain_error("zeta argument must exceed 1");
}

} // namespace

ZetaValues zeta_triple(double a) {
    require_domain(a);
    const double N = kCutoff;
    const double L = std::log(N);

    double s0 = 0, s1 = 0, s2 = 0;
    for (int n = kCutoff - 1; n >= 1; --n) { // ascending magnitude
        double ln = std::log(static_cast<double>(n));
        double p = std::pow(static_cast<double>(n), -a);
        s0 += p;
        s1 += ln * p;
        s2 += ln * ln * p;
    }

    double Na = std::pow(N, -a);
    double am1 = a - 1;
    double P = a * (a + 1) * (a + 2);
    double Pp = 3 * a * a + 6 * a + 2;
    double Ppp = 6 * a + 6;

    ZetaValues out;
    out.a = a;
    out.zeta = s0 + em_tail(N, a);

    // d/da of the tail pieces, with g' and g''' the a-derivative remainders
    double gp = Na / N * (1 - a * L);
    double gppp = Na / (N * N * N) * (-P * L + Pp);
    out.dzeta = -(s1 + N * Na * (L / am1 + 1 / (am1 * am1)) + L * Na / 2)
              + gp / 12 - gppp / 720;

    double hp = Na / N * (2 * L - a * L * L);
    double hppp = Na / (N * N * N) * (-P * L * L + (2 * Pp) * L - Ppp);
    out.d2zeta = s2
               + N * Na * (L * L / am1 + 2 * L / (am1 * am1) + 2 / (am1 * am1 * am1))
               + L * L * Na / 2 - hp / 12 + hppp / 720;

    out.truncation_error_bound =
        a * (a + 1) * (a + 2) * (a + 3) * (a + 4) * Na / (N * N * N * N * N) / 30240;
    return out;
}

ZetaShifted::ZetaShifted(double a) : a_(a) {
    require_domain(a);
    npow_.resize(kCutoff);
    logn_.resize(kCutoff);
    for (int n = 1; n < kCutoff; ++n) {
        npow_[n] = std::pow(static_cast<double>(n), -a);
        logn_[n] = std::log(static_cast<double>(n));
    }
    base_ = (*this)(0.0);
}

double ZetaShifted::operator()(double x) const {
    if (!(x >= 0))
        throw domain_error("zeta shift must be nonnegative");
    double s = 0;
    for (int n = kCutoff - 1; n >= 2; --n)
        s += npow_[n] * std::exp(-x * logn_[n]);
    s += 1.0; // n = 1 term
    return s + em_tail(kCutoff, a_ + x);
}

double zeta_transform(double a, double s) {
    ZetaShifted z(a);
    return z(s) / z.base();
}

} // namespace powmix
