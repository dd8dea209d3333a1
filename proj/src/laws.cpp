#include "powmix/laws.hpp"

#include <cmath>
#include <sstream>

#include "powmix/errors.hpp"

namespace powmix {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw domain_error(msg);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// E[e^{-sX}] for the beta-tail density (a/b)(1 - x/b)^{a-1}: with z = b s this
// is a sum of positive Poisson-type terms a z^k e^{-z} / ((a+k) k!). Far tail
// switches to the Watson expansion (a/b)/s * (1 - (a-1)/z).
double beta_tail_transform(double a, double b, double s) {
    double z = b * s;
    if (z == 0) return 1.0;
    if (z > 700) return a / z * (1 - (a - 1) / z);
    double term = std::exp(-z); // z^k e^{-z}/k! at k = 0
    double sum = term * a / a;
    for (int k = 1; k < 100000; ++k) {
        term *= z / k;
        double add = term * a / (a + k);
        sum += add;
        if (k > z && add < 1e-18 * sum) break;
    }
    return sum;
}

class BetaTailT final : public Transform {
  public:
    BetaTailT(double a, double b) : a_(a), b_(b) {}
    double operator()(double s) const override { return beta_tail_transform(a_, b_, s); }
    std::optional<double> mean() const override { return b_ / (a_ + 1); }
    std::optional<double> second_moment() const override {
        return 2 * b_ * b_ / ((a_ + 1) * (a_ + 2));
    }
    std::string describe() const override {
        return "beta_tail(a=" + fmt(a_) + ",scale=" + fmt(b_) + ")";
    }

  private:
    double a_, b_;
};

class USquaredT final : public Transform {
  public:
    double operator()(double s) const override {
        if (s < 1e-8) return 1 - s / 3 + s * s / 10;
        double r = std::sqrt(s);
        return 0.5 * std::sqrt(M_PI / s) * std::erf(r);
    }
    std::optional<double> mean() const override { return 1.0 / 3; }
    std::optional<double> second_moment() const override { return 1.0 / 5; }
    std::string describe() const override { return "usquared"; }
};

class Example2DT final : public Transform {
  public:
    double operator()(double s) const override {
        if (s < 1e-8) return 1 - s / 6 + s * s / 30;
        double r = std::sqrt(s);
        return std::sqrt(M_PI / s) * std::erf(r) + std::expm1(-s) / s;
    }
    std::optional<double> mean() const override { return 1.0 / 6; }
    std::optional<double> second_moment() const override { return 1.0 / 15; }
    std::string describe() const override { return "example2d"; }
};

// (1 - F^(s))/(mu s), the transform of the stationary overshoot law
class EquilibriumT final : public Transform {
  public:
    // self_m2: second moment of the equilibrium law itself, when the caller
    // knows it (needs the third moment of the base, so pass it in).
    explicit EquilibriumT(TransformPtr inner, double self_m2 = 0)
        : inner_(std::move(inner)), self_m2_(self_m2) {
        require(inner_ != nullptr, "equilibrium: null transform");
        auto m = inner_->mean();
        require(m.has_value() && *m > 0, "equilibrium: transform must have a positive mean");
        mu_ = *m;
        if (auto m2 = inner_->second_moment()) m2i_ = *m2;
    }
    double operator()(double s) const override {
        double z = mu_ * s;
        if (z < 1e-12) return m2i_ > 0 ? 1 - m2i_ * s / (2 * mu_) : 1.0;
        return (1.0 - (*inner_)(s)) / z;
    }
    std::optional<double> mean() const override {
        if (m2i_ > 0) return m2i_ / (2 * mu_);
        return std::nullopt;
    }
    std::optional<double> second_moment() const override {
        if (self_m2_ > 0) return self_m2_;
        return std::nullopt;
    }
    std::string describe() const override { return "equilibrium(" + inner_->describe() + ")"; }

  private:
    TransformPtr inner_;
    double mu_;
    double m2i_ = 0;
    double self_m2_ = 0;
};

} // namespace

double Law::mean() const {
    switch (kind) {
        case LawKind::Degenerate: return a;
        case LawKind::Exponential: return a;
        case LawKind::Gamma: return a * b;
        case LawKind::ExpMixtureAtom: return (1 - a) / b;
        case LawKind::Uniform: return (a + b) / 2;
        case LawKind::BetaTail: return b / (a + 1);
        case LawKind::TwoPointLaw: return a;
        case LawKind::Example2D: return 1.0 / 6;
        case LawKind::USquared: return 1.0 / 3;
        case LawKind::ExitTimeC1: return 1.0;
        case LawKind::ExitTimeC1Sb: return 5.0 / 3;
        case LawKind::LengthBiasedOf: {
            auto bm2 = base->m2();
            if (!bm2) throw capability_error("length_biased: base second moment unknown");
            return *bm2 / base->mean();
        }
        case LawKind::ConvolutionOf: return base->mean() + base2->mean();
    }
    return 0;
}

std::optional<double> Law::m2() const {
    switch (kind) {
        case LawKind::Degenerate: return a * a;
        case LawKind::Exponential: return 2 * a * a;
        case LawKind::Gamma: return a * (a + 1) * b * b;
        case LawKind::ExpMixtureAtom: return 2 * (1 - a) / (b * b);
        case LawKind::Uniform: return (a * a + a * b + b * b) / 3;
        case LawKind::BetaTail: return 2 * b * b / ((a + 1) * (a + 2));
        case LawKind::TwoPointLaw: return b;
        case LawKind::Example2D: return 1.0 / 15;
        case LawKind::USquared: return 1.0 / 5;
        case LawKind::ExitTimeC1: return 5.0 / 3;
        case LawKind::ExitTimeC1Sb: return 61.0 / 15;
        case LawKind::LengthBiasedOf: {
            auto bm3 = base->m3();
            if (!bm3) return std::nullopt;
            return *bm3 / base->mean();
        }
        case LawKind::ConvolutionOf: {
            auto ma = base->m2();
            auto mb = base2->m2();
            if (!ma || !mb) return std::nullopt;
            return *ma + 2 * base->mean() * base2->mean() + *mb;
        }
    }
    return std::nullopt;
}

std::optional<double> Law::m3() const {
    switch (kind) {
        case LawKind::Degenerate: return a * a * a;
        case LawKind::Exponential: return 6 * a * a * a;
        case LawKind::Gamma: return a * (a + 1) * (a + 2) * b * b * b;
        case LawKind::ExpMixtureAtom: return 6 * (1 - a) / (b * b * b);
        case LawKind::Uniform: return (a * a * a + a * a * b + a * b * b + b * b * b) / 4;
        case LawKind::BetaTail: return 6 * b * b * b / ((a + 1) * (a + 2) * (a + 3));
        case LawKind::TwoPointLaw: return b * b / a;
        case LawKind::Example2D: return 1.0 / 28;
        case LawKind::USquared: return 1.0 / 7;
        case LawKind::ExitTimeC1: return 61.0 / 15;
        case LawKind::ExitTimeC1Sb: return 277.0 / 21;
        case LawKind::LengthBiasedOf: return std::nullopt;
        case LawKind::ConvolutionOf: {
            auto m2a = base->m2();
            auto m2b = base2->m2();
            auto m3a = base->m3();
            auto m3b = base2->m3();
            if (!m2a || !m2b || !m3a || !m3b) return std::nullopt;
            const double ma = base->mean();
            const double mb = base2->mean();
            return *m3a + 3 * *m2a * mb + 3 * ma * *m2b + *m3b;
        }
    }
    return std::nullopt;
}

TransformPtr Law::transform() const {
    switch (kind) {
        case LawKind::Degenerate: return degenerate(a);
        case LawKind::Exponential: return exponential(a);
        case LawKind::Gamma: return gamma_transform(a, b);
        case LawKind::ExpMixtureAtom: return exp_mixture(a, b);
        case LawKind::Uniform:
            // U(a,b) = a + U(0,b-a); U(0,c) is the overshoot law of the point c
            if (a == 0) return std::make_shared<EquilibriumT>(degenerate(b), b * b / 3);
            return product(degenerate(a), std::make_shared<EquilibriumT>(
                                              degenerate(b - a), (b - a) * (b - a) / 3));
        case LawKind::BetaTail: return std::make_shared<BetaTailT>(a, b);
        case LawKind::TwoPointLaw: return two_point_bound(a, b);
        case LawKind::Example2D: return std::make_shared<Example2DT>();
        case LawKind::USquared: return std::make_shared<USquaredT>();
        case LawKind::ExitTimeC1: return cosh_family(1.0);
        case LawKind::ExitTimeC1Sb: return product(cosh_family(1.0), tanh_family(1.0));
        case LawKind::LengthBiasedOf: return nullptr;
        case LawKind::ConvolutionOf: {
            TransformPtr ta = base->transform();
            TransformPtr tb = base2->transform();
            if (!ta || !tb) return nullptr;
            return product(ta, tb);
        }
    }
    return nullptr;
}

std::string Law::describe() const {
    switch (kind) {
        case LawKind::Degenerate: return "degenerate(" + fmt(a) + ")";
        case LawKind::Exponential: return "exp(mu=" + fmt(a) + ")";
        case LawKind::Gamma: return "gamma(a=" + fmt(a) + ",b=" + fmt(b) + ")";
        case LawKind::ExpMixtureAtom: return "exp_mixture(p=" + fmt(a) + ",beta=" + fmt(b) + ")";
        case LawKind::Uniform: return "uniform(" + fmt(a) + "," + fmt(b) + ")";
        case LawKind::BetaTail: return "beta_tail(a=" + fmt(a) + ",scale=" + fmt(b) + ")";
        case LawKind::TwoPointLaw: return "two_point(m1=" + fmt(a) + ",m2=" + fmt(b) + ")";
        case LawKind::Example2D: return "example2d";
        case LawKind::USquared: return "usquared";
        case LawKind::ExitTimeC1: return "exit_time_c1";
        case LawKind::ExitTimeC1Sb: return "exit_time_c1_sb";
        case LawKind::LengthBiasedOf: return "length_biased(" + base->describe() + ")";
        case LawKind::ConvolutionOf:
            return "convolution(" + base->describe() + "," + base2->describe() + ")";
    }
    return "";
}

Law law_degenerate(double c) {
    require(c >= 0, "law: point must be >= 0");
    return Law{LawKind::Degenerate, c, 0, nullptr, nullptr};
}

Law law_exponential(double mu) {
    require(mu > 0, "law: mean must be > 0");
    return Law{LawKind::Exponential, mu, 0, nullptr, nullptr};
}

Law law_gamma(double shape, double scale) {
    require(shape > 0 && scale > 0, "law: gamma shape and scale must be > 0");
    return Law{LawKind::Gamma, shape, scale, nullptr, nullptr};
}

Law law_exp_mixture(double p, double beta) {
    require(p >= 0 && p < 1 && beta > 0, "law: need 0 <= p < 1 and beta > 0");
    return Law{LawKind::ExpMixtureAtom, p, beta, nullptr, nullptr};
}

Law law_uniform(double lo, double hi) {
    require(lo >= 0 && hi > lo, "law: need 0 <= lo < hi");
    return Law{LawKind::Uniform, lo, hi, nullptr, nullptr};
}

Law law_beta_tail(double a, double scale) {
    require(a > 0 && scale > 0, "law: need a > 0 and scale > 0");
    return Law{LawKind::BetaTail, a, scale, nullptr, nullptr};
}

Law law_two_point(double m1, double m2) {
    require(m1 > 0 && m2 >= m1 * m1, "law: need m1 > 0 and m2 >= m1^2");
    return Law{LawKind::TwoPointLaw, m1, m2, nullptr, nullptr};
}

Law law_example2d() { return Law{LawKind::Example2D, 0, 0, nullptr, nullptr}; }
Law law_usquared() { return Law{LawKind::USquared, 0, 0, nullptr, nullptr}; }
Law law_exit_time_c1() { return Law{LawKind::ExitTimeC1, 0, 0, nullptr, nullptr}; }

Law law_convolution(const Law& x, const Law& y) {
    return Law{LawKind::ConvolutionOf, 0, 0, std::make_shared<Law>(x), std::make_shared<Law>(y)};
}

Law length_biased(const Law& d) {
    switch (d.kind) {
        case LawKind::Degenerate: return d;
        case LawKind::Exponential: return law_gamma(2.0, d.a);
        case LawKind::Gamma: return law_gamma(d.a + 1, d.b);
        case LawKind::ExpMixtureAtom: return law_gamma(2.0, 1.0 / d.b);
        case LawKind::TwoPointLaw: return law_degenerate(d.b / d.a);
        case LawKind::ExitTimeC1: return Law{LawKind::ExitTimeC1Sb, 0, 0, nullptr, nullptr};
        case LawKind::Uniform:
        case LawKind::BetaTail:
        case LawKind::Example2D:
        case LawKind::USquared: {
            // bounded support: keep the base for accept-reject with bound x_max
            double xmax = 1.0;
            if (d.kind == LawKind::Uniform) xmax = d.b;
            if (d.kind == LawKind::BetaTail) xmax = d.b;
            return Law{LawKind::LengthBiasedOf, xmax, 0, std::make_shared<Law>(d), nullptr};
        }
        default:
            throw capability_error("length_biased: unsupported base law");
    }
}

Law equilibrium(const Law& d) {
    switch (d.kind) {
        case LawKind::Degenerate: return law_uniform(0, d.a);
        case LawKind::Exponential: return d;
        case LawKind::ExpMixtureAtom: return law_exponential(1.0 / d.b);
        case LawKind::Uniform:
            if (d.a == 0) return law_beta_tail(2.0, d.b);
            throw capability_error("equilibrium: uniform law must start at 0");
        case LawKind::BetaTail: return law_beta_tail(d.a + 1, d.b);
        case LawKind::TwoPointLaw: return law_uniform(0, d.b / d.a);
        default:
            throw capability_error("equilibrium: no closed form for this law");
    }
}

Law equilibrium_iterate(Law d, int k) {
    for (int i = 0; i < k; ++i) d = equilibrium(d);
    return d;
}

TransformPtr equilibrium_transform(TransformPtr f) {
    return std::make_shared<EquilibriumT>(std::move(f));
}

} // namespace powmix
