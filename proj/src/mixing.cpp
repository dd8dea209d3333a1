#include "powmix/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "powmix/errors.hpp"

namespace powmix {

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1) throw domain_error("gauss_legendre: order must be >= 1");

    std::vector<double> x(n), w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton on P_n from the Chebyshev-like initial guess
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1, p1 = 0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
            }
            pp = n * (z * p0 - p1) / (z * z - 1);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

namespace {

constexpr int kSmoothOrder = 64; // nodes for one-panel densities
constexpr int kPanelOrder = 32;  // nodes per panel for the truncated exponential

void affine_append(std::vector<double>& t, std::vector<double>& w, double lo, double hi,
                   int order, const std::function<double(double)>& weight) {
    const auto& gl = gauss_legendre(order);
    double mid = (lo + hi) / 2, half = (hi - lo) / 2;
    for (int k = 0; k < order; ++k) {
        double tk = mid + half * gl.first[k];
        t.push_back(tk);
        w.push_back(half * gl.second[k] * weight(tk));
    }
}

} // namespace

void MixingLaw::validate() const {
    double mass = quad_mass();
    for (const auto& a : atoms_) {
        if (!(a.loc >= 0)) throw domain_error("mixing: atom location must be >= 0");
        if (!(a.mass > 0)) throw domain_error("mixing: atom mass must be > 0");
        mass += a.mass;
    }
    if (std::abs(mass - (1.0 - mass_defect_)) > 1e-9)
        throw domain_error("mixing: masses do not sum to 1");
    double q1 = quad_m1();
    for (const auto& a : atoms_) q1 += a.mass * a.loc;
    // analytic moments must agree with what the nodes integrate
    if (std::abs(q1 - m1_) > 1e-8 * std::max(1.0, m1_))
        throw domain_error("mixing: quadrature mean mismatch");
}

MixingLaw MixingLaw::atom(double loc) { return atoms({{loc, 1.0}}); }

MixingLaw MixingLaw::atoms(std::vector<Atom> pts) {
    if (pts.empty()) throw domain_error("mixing: need at least one atom");
    double mass = 0;
    MixingLaw law;
    law.kind_ = MixKind::Atoms;
    for (auto& a : pts) {
        if (!(a.loc >= 0)) throw domain_error("mixing: atom location must be >= 0");
        if (!(a.mass > 0)) throw domain_error("mixing: atom mass must be > 0");
        mass += a.mass;
    }
    if (std::abs(mass - 1.0) > 1e-9) throw domain_error("mixing: atom masses must sum to 1");
    for (auto& a : pts) a.mass /= mass;
    std::sort(pts.begin(), pts.end(), [](const Atom& a, const Atom& b) { return a.loc < b.loc; });
    law.atoms_ = std::move(pts);
    for (const auto& a : law.atoms_) {
        law.m1_ += a.mass * a.loc;
        law.m2_ += a.mass * a.loc * a.loc;
        law.t_max_ = std::max(law.t_max_, a.loc);
    }
    law.validate();
    return law;
}

MixingLaw MixingLaw::uniform(double lo, double hi) {
    if (!(lo >= 0 && hi > lo)) throw domain_error("mixing: uniform needs 0 <= lo < hi");
    MixingLaw law;
    law.kind_ = MixKind::Uniform;
    law.p1_ = lo;
    law.p2_ = hi;
    law.m1_ = (lo + hi) / 2;
    law.m2_ = (hi * hi + hi * lo + lo * lo) / 3;
    law.t_max_ = hi;
    affine_append(law.qt_, law.qw_, lo, hi, kSmoothOrder,
                  [&](double) { return 1.0 / (hi - lo); });
    law.validate();
    return law;
}

MixingLaw MixingLaw::beta_tail(double a) {
    if (!(a > 0)) throw domain_error("mixing: beta_tail needs a > 0");
    MixingLaw law;
    law.kind_ = MixKind::BetaTail;
    law.p1_ = a;
    law.m1_ = 1.0 / (a + 1);
    law.m2_ = 2.0 / ((a + 1) * (a + 2));
    law.t_max_ = 1.0;
    // Probability substitution t = 1 - v^{1/a} with v = 1 - p turns dF into dv
    // on (0,1). v^{1/a} loses smoothness at v = 0, and the sigma integrands
    // develop a 1/s-scale layer as t -> 0 (v -> 1), so ladder dyadic panels
    // toward both ends instead of using one rule across the interval.
    const auto& gl = gauss_legendre(16);
    auto add_panel = [&](double lo, double hi) {
        double mid = (lo + hi) / 2, half = (hi - lo) / 2;
        for (int k = 0; k < 16; ++k) {
            double v = mid + half * gl.first[k];
            law.qt_.push_back(1 - std::pow(v, 1.0 / a));
            law.qw_.push_back(half * gl.second[k]);
        }
    };
    double hi = 0.5;
    for (int pnl = 0; pnl <= 40; ++pnl) {
        double lo = pnl < 40 ? hi / 2 : 0.0;
        add_panel(lo, hi);
        hi = lo;
    }
    double lo = 0.5;
    for (int pnl = 0; pnl <= 40; ++pnl) {
        double up = pnl < 40 ? 1 - (1 - lo) / 2 : 1.0;
        add_panel(lo, up);
        lo = up;
    }
    law.validate();
    return law;
}

MixingLaw MixingLaw::example2d() {
    MixingLaw law;
    law.kind_ = MixKind::Example2D;
    law.m1_ = 1.0 / 6;
    law.m2_ = 1.0 / 15;
    law.t_max_ = 1.0;
    // t = u^2 absorbs the 1/sqrt(t) singularity: weight becomes 2(1-u) du
    const auto& gl = gauss_legendre(kSmoothOrder);
    for (int k = 0; k < kSmoothOrder; ++k) {
        double u = (1 + gl.first[k]) / 2;
        law.qt_.push_back(u * u);
        law.qw_.push_back(gl.second[k] * (1 - u));
    }
    law.validate();
    return law;
}

MixingLaw MixingLaw::usquared() {
    MixingLaw law;
    law.kind_ = MixKind::USquared;
    law.m1_ = 1.0 / 3;
    law.m2_ = 1.0 / 5;
    law.t_max_ = 1.0;
    const auto& gl = gauss_legendre(kSmoothOrder);
    for (int k = 0; k < kSmoothOrder; ++k) {
        double u = (1 + gl.first[k]) / 2;
        law.qt_.push_back(u * u);
        law.qw_.push_back(gl.second[k] / 2);
    }
    law.validate();
    return law;
}

MixingLaw MixingLaw::exponential(double mu) {
    if (!(mu > 0)) throw domain_error("mixing: exponential needs mu > 0");
    MixingLaw law;
    law.kind_ = MixKind::Exponential;
    law.p1_ = mu;
    law.m1_ = mu;
    law.m2_ = 2 * mu * mu;
    law.mass_defect_ = 1e-12;
    double tq = -mu * std::log(1e-12);
    law.t_max_ = tq;
    auto dens = [mu](double t) { return std::exp(-t / mu) / mu; };
    double cuts[5] = {0, 2 * mu, 6 * mu, 14 * mu, tq};
    for (int pnl = 0; pnl < 4; ++pnl)
        affine_append(law.qt_, law.qw_, cuts[pnl], cuts[pnl + 1], kPanelOrder, dens);
    law.validate();
    return law;
}

double MixingLaw::cdf(double t) const {
    if (t < 0) return 0;
    switch (kind_) {
        case MixKind::Atoms: {
            double c = 0;
            for (const auto& a : atoms_)
                if (a.loc <= t) c += a.mass;
            return c;
        }
        case MixKind::Uniform:
            return std::clamp((t - p1_) / (p2_ - p1_), 0.0, 1.0);
        case MixKind::BetaTail:
            return t >= 1 ? 1.0 : 1.0 - std::pow(1 - t, p1_);
        case MixKind::Example2D:
            return t >= 1 ? 1.0 : 2 * std::sqrt(t) - t;
        case MixKind::USquared:
            return t >= 1 ? 1.0 : std::sqrt(t);
        case MixKind::Exponential:
            return 1.0 - std::exp(-t / p1_);
    }
    return 0;
}

double MixingLaw::quad_mass() const {
    double s = 0;
    for (double w : qw_) s += w;
    return s;
}

double MixingLaw::quad_m1() const {
    double s = 0;
    for (std::size_t i = 0; i < qw_.size(); ++i) s += qw_[i] * qt_[i];
    return s;
}

double MixingLaw::quad_m2() const {
    double s = 0;
    for (std::size_t i = 0; i < qw_.size(); ++i) s += qw_[i] * qt_[i] * qt_[i];
    return s;
}

std::string MixingLaw::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case MixKind::Atoms:
            if (atoms_.size() == 1) {
                os << "atom(" << atoms_[0].loc << ")";
            } else {
                os << "atoms(";
                for (std::size_t i = 0; i < atoms_.size(); ++i) {
                    if (i) os << ",";
                    os << atoms_[i].loc << ":" << atoms_[i].mass;
                }
                os << ")";
            }
            break;
        case MixKind::Uniform: os << "uniform(" << p1_ << "," << p2_ << ")"; break;
        case MixKind::BetaTail: os << "beta_tail(a=" << p1_ << ")"; break;
        case MixKind::Example2D: os << "example2d"; break;
        case MixKind::USquared: os << "usquared"; break;
        case MixKind::Exponential: os << "exp(mu=" << p1_ << ")"; break;
    }
    return os.str();
}

double sigma_at(const Transform& f, const MixingLaw& T, double s, double m2f) {
    auto mean = f.mean();
    if (!mean) throw capability_error("sigma: transform must expose its mean");
    double mu = *mean;
    if (m2f <= 0) {
        auto m2 = f.second_moment();
        if (m2) m2f = *m2;
    }

    auto term = [&](double t, double w) {
        if (t == 0) return w * mu * s;
        double ts = t * s;
        // first-order limit once 1 - F^(ts) is all cancellation
        if (mu * ts < 1e-8 && m2f > 0) return w * s * (mu - 0.5 * m2f * ts);
        return w * (1.0 - f(ts)) / t;
    };

    double acc = 0;
    for (const auto& a : T.atom_list()) acc += term(a.loc, a.mass);
    const auto& qt = T.qt();
    const auto& qw = T.qw();
    for (std::size_t i = 0; i < qt.size(); ++i) acc += term(qt[i], qw[i]);
    return acc;
}

double sigma_b_at(const MixingLaw& B, double x) {
    if (!(x >= 0)) throw domain_error("sigma_b: argument must be >= 0");
    auto term = [&](double y, double w) {
        if (y == 0) return w * x;
        return -w * std::expm1(-x * y) / y;
    };
    double acc = 0;
    for (const auto& a : B.atom_list()) acc += term(a.loc, a.mass);
    const auto& qt = B.qt();
    const auto& qw = B.qw();
    for (std::size_t i = 0; i < qt.size(); ++i) acc += term(qt[i], qw[i]);
    return acc;
}

namespace {

// int_0^c F^(u) du over geometric panels sized to the decay scale 1/mu
double transform_integral(const Transform& f, double c, double mu) {
    if (c == 0) return 0;
    double acc = 0, lo = 0;
    double first = std::min(c, 2.0 / mu);
    double hi = first;
    const auto& gl = gauss_legendre(24);
    while (true) {
        double mid = (lo + hi) / 2, half = (hi - lo) / 2;
        for (int k = 0; k < 24; ++k) acc += half * gl.second[k] * f(mid + half * gl.first[k]);
        if (hi >= c) break;
        lo = hi;
        hi = std::min(c, 3 * hi);
    }
    return acc;
}

} // namespace

double sigma_star_at(const Transform& f, const MixingLaw& T, double s) {
    auto mean = f.mean();
    if (!mean) throw capability_error("sigma_star: transform must expose its mean");
    double mu = *mean;
    auto term = [&](double t, double w) {
        if (t == 0) return w * s;
        return w * transform_integral(f, s * t, mu) / t;
    };
    double acc = 0;
    for (const auto& a : T.atom_list()) acc += term(a.loc, a.mass);
    const auto& qt = T.qt();
    const auto& qw = T.qw();
    for (std::size_t i = 0; i < qt.size(); ++i) acc += term(qt[i], qw[i]);
    return mu * acc;
}

} // namespace powmix
