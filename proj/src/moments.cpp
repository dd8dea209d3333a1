#include "powmix/moments.hpp"

#include <cmath>
#include <vector>

#include "powmix/errors.hpp"

namespace powmix {

namespace {

constexpr int kLevels = 7; // s0 * 2^{-k}, k = 0..6

// f is assumed close to exp(-mu s) scale; land f(s) near the middle so the
// difference quotient sits inside the power-series regime.
double probe_scale(const std::function<double(double)>& f) {
    double s = 1.0;
    for (int i = 0; i < 60 && f(s) > 0.7; ++i) s *= 2;
    for (int i = 0; i < 60 && f(s) < 0.3; ++i) s /= 2;
    return 1.0 / s;
}

MomentEstimate richardson(const std::function<double(double)>& quotient, double s0) {
    std::vector<std::vector<double>> R(kLevels);
    for (int k = 0; k < kLevels; ++k) {
        R[k].resize(k + 1);
        R[k][0] = quotient(s0 * std::ldexp(1.0, -k));
        for (int j = 1; j <= k; ++j) {
            double step = std::ldexp(1.0, j) - 1; // 2^j - 1
            R[k][j] = R[k][j - 1] + (R[k][j - 1] - R[k - 1][j - 1]) / step;
        }
    }

    MomentEstimate est;
    double best = std::abs(R[1][1] - R[0][0]);
    est.value = R[1][1];
    est.levels = 1;
    est.error = best;
    for (int k = 2; k < kLevels; ++k) {
        double d = std::abs(R[k][k] - R[k - 1][k - 1]);
        if (d <= best) {
            best = d;
            est.value = R[k][k];
            est.levels = k;
            est.error = d;
        }
    }
    // diagonal never settled: no two consecutive entries agree to 10%
    est.diverged = !(best <= 0.1 * std::abs(est.value) + 1e-300);
    return est;
}

} // namespace

MomentEstimate mean_from_transform(const std::function<double(double)>& f, double scale) {
    if (scale <= 0) scale = probe_scale(f);
    double s0 = 1e-2 / scale;
    return richardson([&](double s) { return (1.0 - f(s)) / s; }, s0);
}

MomentEstimate mean_from_transform(const Transform& f, double scale) {
    auto fn = [&f](double s) { return f(s); };
    if (scale <= 0 && f.mean()) scale = *f.mean();
    return mean_from_transform(fn, scale);
}

MomentEstimate second_moment_from_transform(const std::function<double(double)>& f,
                                            double mu, double scale) {
    if (!(mu > 0)) throw domain_error("second moment: need mu > 0");
    if (scale <= 0) scale = mu;
    double s0 = 1e-2 / scale;
    return richardson([&](double s) { return 2.0 * (f(s) - 1.0 + mu * s) / (s * s); }, s0);
}

MomentEstimate second_moment_from_transform(const Transform& f, double mu, double scale) {
    auto fn = [&f](double s) { return f(s); };
    return second_moment_from_transform(fn, mu, scale);
}

} // namespace powmix
