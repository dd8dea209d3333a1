#include "powmix/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "powmix/errors.hpp"
#include "powmix/kernels/kernels.hpp"
#include "powmix/philox.hpp"

namespace powmix {

namespace {

double standard_normal(Stream& rng) {
    double u1 = rng.next_double(), u2 = rng.next_double();
    return std::sqrt(-2 * std::log(u1)) * std::cos(2 * M_PI * u2);
}

// Marsaglia-Tsang; shape < 1 goes through the boost G(a) = G(a+1) U^{1/a}
double gamma_sample(Stream& rng, double shape, double scale) {
    if (shape < 1) {
        double u = rng.next_double();
        return gamma_sample(rng, shape + 1, scale) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3, c = 1.0 / (3 * std::sqrt(d));
    for (;;) {
        double x, v;
        do {
            x = standard_normal(rng);
            v = 1 + c * x;
        } while (v <= 0);
        v = v * v * v;
        double u = rng.next_double();
        if (u < 1 - 0.0331 * x * x * x * x) return scale * d * v;
        if (std::log(u) < 0.5 * x * x + d * (1 - v + std::log(v))) return scale * d * v;
    }
}

// First exit time of Brownian motion from (-1,1): alternating exponential
// series for the survival function and density, all terms below 1e-18 cut.
constexpr double kC0 = M_PI * M_PI / 8; // decay rate of the leading term

double survival_c1(double x) {
    double s = 0;
    for (int k = 0;; ++k) {
        double odd = 2 * k + 1;
        double term = 4 / (odd * M_PI) * std::exp(-odd * odd * kC0 * x);
        s += (k % 2 ? -term : term);
        if (term < 1e-18) break;
    }
    return s;
}

double pdf_c1(double x) {
    double s = 0;
    for (int k = 0;; ++k) {
        double odd = 2 * k + 1;
        double term = odd * M_PI / 2 * std::exp(-odd * odd * kC0 * x);
        s += (k % 2 ? -term : term);
        if (term < 1e-18) break;
    }
    return s;
}

// CDF of the size-biased exit time: 1 - sum (-1)^k w_k e^{-c_k x}(1 + c_k x),
// w_k = (odd pi/2)/c_k^2; the constant parts telescope to exactly 1.
double cdf_c1sb(double x) {
    double s = 0;
    for (int k = 0;; ++k) {
        double odd = 2 * k + 1;
        double ck = odd * odd * kC0;
        double term = odd * M_PI / 2 / (ck * ck) * std::exp(-ck * x) * (1 + ck * x);
        s += (k % 2 ? -term : term);
        if (term < 1e-18) break;
    }
    return 1 - s;
}

double pdf_c1sb(double x) { return x * pdf_c1(x); } // mean of C1 is 1

struct ExitTimeTable {
    std::vector<double> x, cdf;
    bool size_biased;

    explicit ExitTimeTable(bool sb) : size_biased(sb) {
        const int n = 2048;
        double lo = std::log(0.02), hi = std::log(30.0);
        x.resize(n);
        cdf.resize(n);
        for (int i = 0; i < n; ++i) {
            x[i] = std::exp(lo + (hi - lo) * i / (n - 1));
            cdf[i] = sb ? cdf_c1sb(x[i]) : 1 - survival_c1(x[i]);
        }
    }

    double invert(double u) const {
        if (u <= cdf.front()) return x.front(); // left mass under 3e-12
        double xi;
        if (u >= cdf.back()) {
            // leading-term tail inversion as the Newton start
            double q = 1 - u;
            if (size_biased) {
                xi = x.back();
                for (int it = 0; it < 4; ++it)
                    xi = (std::log(M_PI / 2 * (1 + kC0 * xi) / (kC0 * kC0)) - std::log(q)) / kC0;
            } else {
                xi = -std::log(q * M_PI / 4) / kC0;
            }
        } else {
            auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            std::size_t j = it - cdf.begin();
            double f0 = cdf[j - 1], f1 = cdf[j];
            xi = x[j - 1] + (x[j] - x[j - 1]) * (u - f0) / (f1 - f0);
        }
        for (int it = 0; it < 4; ++it) {
            double f = size_biased ? cdf_c1sb(xi) : 1 - survival_c1(xi);
            double d = size_biased ? pdf_c1sb(xi) : pdf_c1(xi);
            xi -= (f - u) / d;
            if (!(xi > 1e-3)) xi = 1e-3;
        }
        return xi;
    }
};

double exit_time_sample(Stream& rng, bool size_biased) {
    static const ExitTimeTable plain(false);
    static const ExitTimeTable biased(true);
    double u = rng.next_double();
    return (size_biased ? biased : plain).invert(u);
}

double sample_from(const Law& d, Stream& rng) {
    switch (d.kind) {
        case LawKind::Degenerate: return d.a;
        case LawKind::Exponential: return d.a * rng.next_exp();
        case LawKind::Gamma: return gamma_sample(rng, d.a, d.b);
        case LawKind::ExpMixtureAtom:
            return rng.next_double() < d.a ? 0.0 : rng.next_exp() / d.b;
        case LawKind::Uniform: return d.a + (d.b - d.a) * rng.next_double();
        case LawKind::BetaTail: return d.b * (1 - std::pow(rng.next_double(), 1.0 / d.a));
        case LawKind::TwoPointLaw: {
            double q = d.a * d.a / d.b; // mass of the upper atom
            return rng.next_double() < 1 - q ? 0.0 : d.b / d.a;
        }
        case LawKind::Example2D: {
            double u = rng.next_double();
            double y = 1 - std::sqrt(1 - u);
            return y * y;
        }
        case LawKind::USquared: {
            double u = rng.next_double();
            return u * u;
        }
        case LawKind::ExitTimeC1: return exit_time_sample(rng, false);
        case LawKind::ExitTimeC1Sb: return exit_time_sample(rng, true);
        case LawKind::LengthBiasedOf:
            // accept-reject against the bounded support [0, a]
            for (;;) {
                double xv = sample_from(*d.base, rng);
                if (rng.next_double() * d.a <= xv) return xv;
            }
        case LawKind::ConvolutionOf:
            return sample_from(*d.base, rng) + sample_from(*d.base2, rng);
    }
    throw capability_error("sample: unsupported law");
}

double sample_mixing_from(const MixingLaw& T, Stream& rng) {
    switch (T.kind()) {
        case MixKind::Atoms: {
            double u = rng.next_double(), cum = 0;
            for (const auto& a : T.atom_list()) {
                cum += a.mass;
                if (u <= cum) return a.loc;
            }
            return T.atom_list().back().loc;
        }
        case MixKind::Uniform: return T.p1() + (T.p2() - T.p1()) * rng.next_double();
        case MixKind::BetaTail: return 1 - std::pow(rng.next_double(), 1.0 / T.p1());
        case MixKind::Example2D: {
            double y = 1 - std::sqrt(1 - rng.next_double());
            return y * y;
        }
        case MixKind::USquared: {
            double u = rng.next_double();
            return u * u;
        }
        case MixKind::Exponential: return T.p1() * rng.next_exp();
    }
    throw capability_error("sample: unsupported mixing law");
}

std::uint8_t poisson1_count(Stream& rng) {
    // inversion with mean 1: p_k = e^{-1}/k!
    double u = rng.next_double();
    double p = std::exp(-1.0), cum = p;
    int k = 0;
    while (u > cum && k < 255) {
        ++k;
        p /= k;
        cum += p;
    }
    return static_cast<std::uint8_t>(k);
}

enum Role : std::uint32_t {
    kRoleLhsZ = 1,
    kRoleX1 = 2,
    kRoleX2 = 3,
    kRoleT = 4,
    kRoleRhsZ = 5,
    kRoleCounts = 1000, // + side
};

constexpr std::size_t kChunk = 65536;

std::uint64_t count_index(int resample, std::size_t chunk, std::size_t i) {
    return (static_cast<std::uint64_t>(resample) << 40) |
           (static_cast<std::uint64_t>(chunk) << 20) | static_cast<std::uint64_t>(i);
}

} // namespace

double sample_law(const Law& d, std::uint64_t seed, std::uint32_t role, std::uint64_t index) {
    Stream rng(seed, role, index);
    return sample_from(d, rng);
}

double sample_mixing(const MixingLaw& T, std::uint64_t seed, std::uint32_t role,
                     std::uint64_t index) {
    Stream rng(seed, role, index);
    return sample_mixing_from(T, rng);
}

SimReport verify_equation(const EquationSpec& spec) {
    if (spec.n < 10000) throw domain_error("simulate: need at least 1e4 samples");
    if (spec.resamples < 100) throw domain_error("simulate: need at least 100 resamples");

    const auto& ops = kernels::active();
    SimReport rep;
    rep.kernel = ops.name;

    double mu = spec.x.mean();
    const int ns = 16;
    std::vector<double> svals(ns);
    for (int j = 0; j < ns; ++j)
        svals[j] = 0.1 / mu * std::pow(100.0, static_cast<double>(j) / (ns - 1));

    const int R = spec.resamples;
    std::vector<std::vector<double>> main_sum(2, std::vector<double>(ns, 0.0));
    std::vector<std::vector<std::vector<double>>> boot_sum(
        2, std::vector<std::vector<double>>(R, std::vector<double>(ns, 0.0)));
    std::vector<std::vector<std::uint64_t>> boot_n(2, std::vector<std::uint64_t>(R, 0));

    std::vector<double> vals[2];
    vals[0].resize(kChunk);
    vals[1].resize(kChunk);
    std::vector<double> row_d(kChunk);
    std::vector<std::vector<float>> rows_f(ns, std::vector<float>(kChunk));
    std::vector<std::uint8_t> counts(kChunk);

    std::size_t nchunks = (spec.n + kChunk - 1) / kChunk;
    for (std::size_t c = 0; c < nchunks; ++c) {
        std::size_t g0 = c * kChunk;
        std::size_t nc = std::min(kChunk, spec.n - g0);

        for (std::size_t i = 0; i < nc; ++i) {
            std::uint64_t gi = g0 + i;
            vals[0][i] = sample_law(spec.z, spec.seed, kRoleLhsZ, gi);
            double rhs = 0;
            switch (spec.kind) {
                case EquationKind::Example1:
                    rhs = sample_law(spec.x, spec.seed, kRoleX1, gi) +
                          sample_law(spec.x, spec.seed, kRoleX2, gi) +
                          sample_mixing(spec.T, spec.seed, kRoleT, gi) *
                              sample_law(spec.z, spec.seed, kRoleRhsZ, gi);
                    break;
                case EquationKind::Example2:
                case EquationKind::Example3:
                    rhs = sample_law(spec.x, spec.seed, kRoleX1, gi) +
                          sample_mixing(spec.T, spec.seed, kRoleT, gi) *
                              sample_law(spec.z, spec.seed, kRoleRhsZ, gi);
                    break;
                case EquationKind::Remark4:
                    rhs = sample_law(spec.x, spec.seed, kRoleX1, gi) +
                          sample_mixing(spec.T, spec.seed, kRoleT, gi) *
                              sample_law(spec.x, spec.seed, kRoleX2, gi);
                    break;
            }
            vals[1][i] = rhs;
        }

        for (int side = 0; side < 2; ++side) {
            for (int j = 0; j < ns; ++j) {
                double s = svals[j];
                for (std::size_t i = 0; i < nc; ++i) {
                    double e = std::exp(-s * vals[side][i]);
                    row_d[i] = e;
                    rows_f[j][i] = static_cast<float>(e);
                }
                main_sum[side][j] += ops.sum_comp_f64(row_d.data(), nc);
            }
            for (int r = 0; r < R; ++r) {
                std::uint64_t tot = 0;
                for (std::size_t i = 0; i < nc; ++i) {
                    Stream rng(spec.seed, kRoleCounts + side, count_index(r, c, i));
                    counts[i] = poisson1_count(rng);
                    tot += counts[i];
                }
                boot_n[side][r] += tot;
                for (int j = 0; j < ns; ++j)
                    boot_sum[side][r][j] +=
                        static_cast<double>(ops.wsum_u8_f32(counts.data(), rows_f[j].data(), nc));
            }
        }
    }

    std::vector<double> gap(ns);
    rep.max_gap = 0;
    for (int j = 0; j < ns; ++j) {
        double l = main_sum[0][j] / spec.n, r = main_sum[1][j] / spec.n;
        gap[j] = l - r;
        rep.max_gap = std::max(rep.max_gap, std::abs(gap[j]));
        SimPoint pt;
        pt.s = svals[j];
        pt.lhs = l;
        pt.rhs = r;
        pt.gap = std::abs(gap[j]);
        rep.points.push_back(pt);
    }

    std::vector<double> stats(R);
    for (int r = 0; r < R; ++r) {
        double worst = 0;
        for (int j = 0; j < ns; ++j) {
            double bl = boot_sum[0][r][j] / static_cast<double>(boot_n[0][r]);
            double br = boot_sum[1][r][j] / static_cast<double>(boot_n[1][r]);
            worst = std::max(worst, std::abs(bl - br - gap[j]));
        }
        stats[r] = worst;
    }
    std::sort(stats.begin(), stats.end());
    rep.threshold = stats[99 * R / 100 - 1];
    for (auto& pt : rep.points) pt.threshold = rep.threshold;
    rep.pass = rep.max_gap <= rep.threshold;

    switch (spec.kind) {
        case EquationKind::Example1: rep.note = "Z =d X1 + X2 + T Z"; break;
        case EquationKind::Example2: rep.note = "Z =d X + T Z"; break;
        case EquationKind::Example3: rep.note = "X* =d X + T X*"; break;
        case EquationKind::Remark4: rep.note = "Z =d X1 + T X2"; break;
    }
    return rep;
}

} // namespace powmix
