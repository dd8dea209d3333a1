#pragma once

#include <vector>

namespace powmix {

// Riemann zeta and its first two derivatives at a real argument a > 1.
// Truncated series plus Euler-Maclaurin tail correction through the B4 term.
struct ZetaValues {
    double a;
    double zeta;                   // zeta(a)
    double dzeta;                  // zeta'(a), negative
    double d2zeta;                 // zeta''(a), positive
    double truncation_error_bound; // magnitude of the first omitted correction term
};

ZetaValues zeta_triple(double a); // domain_error if a <= 1 + 1e-6

// zeta(a+s)/zeta(a) for s >= 0.
double zeta_transform(double a, double s);

// Evaluator for zeta(a + x), x >= 0, with the base a fixed. Precomputes the
// series table n^-a and log n so each call costs one exp per retained term.
class ZetaShifted {
public:
    explicit ZetaShifted(double a);
    double operator()(double x) const; // zeta(a + x)
    double base() const { return base_; }
    double a() const { return a_; }

private:
    double a_;
    double base_;
    std::vector<double> npow_; // n^-a, n = 1..N-1
    std::vector<double> logn_; // log n, n = 1..N-1
};

} // namespace powmix
