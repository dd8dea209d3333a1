#include "powmix/transforms.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include "powmix/errors.hpp"
#include "powmix/zeta.hpp"

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

// x/sinh(x), series below 1e-6 to dodge the 0/0
double sinh_ratio(double x) {
    if (x < 1e-6) {
        double x2 = x * x;
        return 1.0 - x2 / 6 + 7 * x2 * x2 / 360;
    }
    return x / std::sinh(x);
}

// tanh(x)/x
double tanh_ratio(double x) {
    if (x < 1e-6) {
        double x2 = x * x;
        return 1.0 - x2 / 3 + 2 * x2 * x2 / 15;
    }
    return std::tanh(x) / x;
}

class DegenerateT final : public Transform {
  public:
    explicit DegenerateT(double c) : c_(c) { require(c >= 0, "degenerate: point must be >= 0"); }
    double operator()(double s) const override { return std::exp(-c_ * s); }
    std::optional<double> mean() const override { return c_; }
    std::optional<double> second_moment() const override { return c_ * c_; }
    std::string describe() const override { return "degenerate(c=" + fmt(c_) + ")"; }

  private:
    double c_;
};

class GammaT final : public Transform {
  public:
    GammaT(double a, double b) : a_(a), b_(b) {
        require(a > 0 && b > 0, "gamma: shape and scale must be > 0");
    }
    double operator()(double s) const override { return std::pow(1.0 + b_ * s, -a_); }
    std::optional<double> mean() const override { return a_ * b_; }
    std::optional<double> second_moment() const override { return a_ * (a_ + 1) * b_ * b_; }
    std::string describe() const override {
        if (a_ == 1.0) return "exponential(mu=" + fmt(b_) + ")";
        return "gamma(a=" + fmt(a_) + ",b=" + fmt(b_) + ")";
    }

  private:
    double a_, b_;
};

class ExpMixtureT final : public Transform {
  public:
    ExpMixtureT(double p, double beta) : p_(p), beta_(beta) {
        require(p >= 0 && p < 1, "exp_mixture: atom mass must lie in [0,1)");
        require(beta > 0, "exp_mixture: rate must be > 0");
    }
    double operator()(double s) const override { return p_ + (1 - p_) / (1 + s / beta_); }
    std::optional<double> mean() const override { return (1 - p_) / beta_; }
    std::optional<double> second_moment() const override {
        return 2 * (1 - p_) / (beta_ * beta_);
    }
    std::string describe() const override {
        return "exp_mixture(p=" + fmt(p_) + ",beta=" + fmt(beta_) + ")";
    }

  private:
    double p_, beta_;
};

class TwoPointT final : public Transform {
  public:
    TwoPointT(double m1, double m2) : m1_(m1), m2_(m2) {
        require(m1 > 0 && m2 >= m1 * m1, "two_point: need m1 > 0 and m2 >= m1^2");
        q_ = m1 * m1 / m2;
        c_ = m2 / m1;
    }
    double operator()(double s) const override { return 1 - q_ + q_ * std::exp(-c_ * s); }
    std::optional<double> mean() const override { return m1_; }
    std::optional<double> second_moment() const override { return m2_; }
    std::string describe() const override {
        return "two_point(m1=" + fmt(m1_) + ",m2=" + fmt(m2_) + ")";
    }

  private:
    double m1_, m2_, q_, c_;
};

// Convolution powers of the hyperbolic triple at x = sqrt(2s):
// sinh_t = (x/sinh x)^t, cosh_t = sech(x)^t, tanh_t = (tanh x / x)^t.
// The factorization cosh_t = sinh_t * tanh_t then holds for every t.
class HyperbolicT final : public Transform {
  public:
    enum class Kind { Sinh, Cosh, Tanh };
    HyperbolicT(Kind k, double t) : k_(k), t_(t) { require(t > 0, "hyperbolic: t must be > 0"); }
    double operator()(double s) const override {
        double x = std::sqrt(2 * s);
        double base = 1;
        switch (k_) {
            case Kind::Sinh: base = sinh_ratio(x); break;
            case Kind::Cosh: base = 1.0 / std::cosh(x); break;
            case Kind::Tanh: base = tanh_ratio(x); break;
        }
        return std::pow(base, t_);
    }
    std::optional<double> mean() const override {
        switch (k_) {
            case Kind::Sinh: return t_ / 3;
            case Kind::Cosh: return t_;
            case Kind::Tanh: return 2 * t_ / 3;
        }
        return std::nullopt;
    }
    std::optional<double> second_moment() const override {
        switch (k_) {
            case Kind::Sinh: return 2 * t_ / 45 + t_ * t_ / 9;
            case Kind::Cosh: return 2 * t_ / 3 + t_ * t_;
            case Kind::Tanh: return 28 * t_ / 45 + 4 * t_ * t_ / 9;
        }
        return std::nullopt;
    }
    std::string describe() const override {
        const char* n = k_ == Kind::Sinh ? "sinh_t" : k_ == Kind::Cosh ? "cosh_t" : "tanh_t";
        return std::string(n) + "(t=" + fmt(t_) + ")";
    }

  private:
    Kind k_;
    double t_;
};

class ZetaDistT final : public Transform {
  public:
    explicit ZetaDistT(double a) : z_(a) {
        ZetaValues v = zeta_triple(a);
        mean_ = -v.dzeta / v.zeta;
        m2_ = v.d2zeta / v.zeta;
    }
    double operator()(double s) const override { return z_(s) / z_.base(); }
    std::optional<double> mean() const override { return mean_; }
    std::optional<double> second_moment() const override { return m2_; }
    std::string describe() const override { return "zeta_dist(a=" + fmt(z_.a()) + ")"; }

  private:
    ZetaShifted z_;
    double mean_, m2_;
};

// 3 mu s / sinh(sqrt(3 mu s))^2, the sinh_t(2) solution rescaled to mean mu
class ScaledSinhT final : public Transform {
  public:
    explicit ScaledSinhT(double mu) : mu_(mu) { require(mu > 0, "scaled_sinh: mean must be > 0"); }
    double operator()(double s) const override {
        double r = sinh_ratio(std::sqrt(3 * mu_ * s));
        return r * r;
    }
    std::optional<double> mean() const override { return mu_; }
    std::optional<double> second_moment() const override { return 6 * mu_ * mu_ / 5; }
    std::string describe() const override { return "scaled_sinh(mu=" + fmt(mu_) + ")"; }

  private:
    double mu_;
};

class ProductT final : public Transform {
  public:
    ProductT(TransformPtr a, TransformPtr b) : a_(std::move(a)), b_(std::move(b)) {
        require(a_ != nullptr && b_ != nullptr, "product: null factor");
    }
    double operator()(double s) const override { return (*a_)(s) * (*b_)(s); }
    std::optional<double> mean() const override {
        auto ma = a_->mean(), mb = b_->mean();
        if (ma && mb) return *ma + *mb;
        return std::nullopt;
    }
    std::optional<double> second_moment() const override {
        auto ma = a_->mean(), mb = b_->mean();
        auto sa = a_->second_moment(), sb = b_->second_moment();
        if (ma && mb && sa && sb) return *sa + 2 * *ma * *mb + *sb;
        return std::nullopt;
    }
    std::string describe() const override {
        return "product(" + a_->describe() + "," + b_->describe() + ")";
    }

  private:
    TransformPtr a_, b_;
};

class ScaledT final : public Transform {
  public:
    ScaledT(TransformPtr inner, double c) : inner_(std::move(inner)), c_(c) {
        require(inner_ != nullptr, "scaled: null inner");
        require(c > 0, "scaled: factor must be > 0");
    }
    double operator()(double s) const override { return (*inner_)(c_ * s); }
    std::optional<double> mean() const override {
        auto m = inner_->mean();
        if (m) return c_ * *m;
        return std::nullopt;
    }
    std::optional<double> second_moment() const override {
        auto m = inner_->second_moment();
        if (m) return c_ * c_ * *m;
        return std::nullopt;
    }
    std::string describe() const override {
        return "scaled(" + inner_->describe() + ",c=" + fmt(c_) + ")";
    }

  private:
    TransformPtr inner_;
    double c_;
};

} // namespace

TransformPtr degenerate(double c) { return std::make_shared<DegenerateT>(c); }
TransformPtr exponential(double mu) { return std::make_shared<GammaT>(1.0, mu); }
TransformPtr gamma_transform(double a, double b) { return std::make_shared<GammaT>(a, b); }
TransformPtr exp_mixture(double p, double beta) { return std::make_shared<ExpMixtureT>(p, beta); }

TransformPtr exp_mixture_mean(double p, double mu) {
    require(mu > 0, "exp_mixture: mean must be > 0");
    require(p >= 0 && p < 1, "exp_mixture: atom mass must lie in [0,1)");
    return std::make_shared<ExpMixtureT>(p, (1 - p) / mu);
}

TransformPtr two_point_bound(double m1, double m2) {
    return std::make_shared<TwoPointT>(m1, m2);
}

TransformPtr sinh_family(double t) {
    return std::make_shared<HyperbolicT>(HyperbolicT::Kind::Sinh, t);
}
TransformPtr cosh_family(double t) {
    return std::make_shared<HyperbolicT>(HyperbolicT::Kind::Cosh, t);
}
TransformPtr tanh_family(double t) {
    return std::make_shared<HyperbolicT>(HyperbolicT::Kind::Tanh, t);
}

TransformPtr zeta_dist(double a) { return std::make_shared<ZetaDistT>(a); }
TransformPtr scaled_sinh_solution(double mu) { return std::make_shared<ScaledSinhT>(mu); }

TransformPtr product(TransformPtr a, TransformPtr b) {
    return std::make_shared<ProductT>(std::move(a), std::move(b));
}
TransformPtr scaled(TransformPtr inner, double c) {
    return std::make_shared<ScaledT>(std::move(inner), c);
}

// Divided differences carry the sign of the matching derivative divided by k!,
// so alternating signs order by order is the testable face of complete
// monotonicity. Plain finite differences are the wrong tool on a log grid.
CmReport check_complete_monotonicity(const std::function<double(double)>& f,
                                     const std::vector<double>& grid, int max_order,
                                     double tol) {
    const int n = static_cast<int>(grid.size());
    if (n < max_order + 1) throw domain_error("cm check: grid too small for requested order");
    for (int i = 1; i < n; ++i)
        if (!(grid[i] > grid[i - 1])) throw domain_error("cm check: grid must increase");

    std::vector<double> dd(grid.size());
    for (int i = 0; i < n; ++i) dd[i] = f(grid[i]);

    CmReport rep;
    rep.pass = true;
    double sign = -1; // (-1)^k for k = 1
    for (int k = 1; k <= max_order; ++k) {
        for (int i = 0; i + k < n; ++i)
            dd[i] = (dd[i + 1] - dd[i]) / (grid[i + k] - grid[i]);
        CmOrderReport ord;
        ord.order = k;
        double scale = 0, worst = 0;
        for (int i = 0; i + k < n; ++i) {
            double signed_dd = sign * dd[i];
            scale = std::max(scale, std::abs(dd[i]));
            worst = std::min(worst, signed_dd);
        }
        ord.scale = scale;
        ord.worst_violation = -worst; // >= 0, magnitude of the worst sign break
        if (ord.worst_violation > tol * std::max(scale, 1e-300)) rep.pass = false;
        rep.orders.push_back(ord);
        sign = -sign;
    }
    return rep;
}

CmReport check_complete_monotonicity(const Transform& f, const std::vector<double>& grid,
                                     int max_order, double tol) {
    return check_complete_monotonicity([&f](double s) { return f(s); }, grid, max_order, tol);
}

} // namespace powmix
