#include "powmix/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "powmix/errors.hpp"

namespace powmix {

namespace {

// Derivative at xt of the cubic through (xs[0..3], ys[0..3])
double cubic_deriv_at(const double* xs, const double* ys, double xt) {
    double der = 0;
    for (int j = 0; j < 4; ++j) {
        double denom = 1;
        for (int m = 0; m < 4; ++m)
            if (m != j) denom *= xs[j] - xs[m];
        double num = 0;
        for (int k = 0; k < 4; ++k) {
            if (k == j) continue;
            double p = 1;
            for (int m = 0; m < 4; ++m)
                if (m != j && m != k) p *= xt - xs[m];
            num += p;
        }
        der += ys[j] * num / denom;
    }
    return der;
}

} // namespace

std::vector<double> make_grid(double mu, const GridSpec& spec) {
    if (!(mu > 0)) throw domain_error("grid: mean must be > 0");
    int n = spec.nodes;
    if (n < 8) throw domain_error("grid: need at least 8 nodes");
    double lo = spec.s_min > 0 ? spec.s_min : 1e-6 / mu;
    double hi = spec.s_max > 0 ? spec.s_max : 50.0 / mu;
    if (!(lo > 0 && hi > lo)) throw domain_error("grid: need 0 < s_min < s_max");

    std::vector<double> g;
    g.reserve(n + 1);
    g.push_back(0.0);
    double r = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) g.push_back(lo * std::exp(r * i));
    g.back() = hi; // pin the endpoint against rounding
    return g;
}

MonotoneCubic::MonotoneCubic(const std::vector<double>& s_nodes,
                             const std::vector<double>& values, double left_slope) {
    const int n = static_cast<int>(s_nodes.size());
    if (n < 2 || values.size() != s_nodes.size())
        throw domain_error("interp: need matching node and value arrays, size >= 2");
    for (int i = 1; i < n; ++i)
        if (!(s_nodes[i] > s_nodes[i - 1])) throw domain_error("interp: nodes must increase");
    if (!(s_nodes[0] >= 0)) throw domain_error("interp: nodes must be >= 0");

    s_back_ = s_nodes.back();
    x_.resize(n);
    for (int i = 0; i < n; ++i) x_[i] = std::log1p(s_nodes[i]);
    y_ = values;
    m_.assign(n, 0.0);

    if (n >= 4) {
        for (int i = 0; i < n; ++i) {
            int lo = std::max(0, std::min(i - 1, n - 4));
            m_[i] = cubic_deriv_at(&x_[lo], &y_[lo], x_[i]);
        }
    } else {
        for (int i = 0; i < n; ++i) {
            int j = std::min(i, n - 2);
            m_[i] = (y_[j + 1] - y_[j]) / (x_[j + 1] - x_[j]);
        }
    }

    // caller knows dF/ds at the left node; chain rule onto x = log1p(s)
    if (!std::isnan(left_slope)) m_[0] = left_slope * (1.0 + s_nodes[0]);

    // Fritsch-Carlson box: clamp slope/secant ratios into [0, 3]
    for (int i = 0; i + 1 < n; ++i) {
        double sec = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        if (sec == 0) {
            m_[i] = 0;
            m_[i + 1] = 0;
            continue;
        }
        for (int idx : {i, i + 1}) {
            double a = m_[idx] / sec;
            if (a < 0) m_[idx] = 0;
            else if (a > 3) m_[idx] = 3 * sec;
        }
    }
}

double MonotoneCubic::operator()(double s) const {
    double x = std::log1p(s);
    if (!(x >= x_.front() && s <= s_back_))
        throw range_error("interp: argument outside covered range");
    int n = static_cast<int>(x_.size());
    int i = static_cast<int>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
    i = std::clamp(i, 0, n - 2);
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    double omt = 1 - t;
    double h00 = (1 + 2 * t) * omt * omt;
    double h10 = t * omt * omt;
    double h01 = t * t * (3 - 2 * t);
    double h11 = t * t * (t - 1);
    return h00 * y_[i] + h * h10 * m_[i] + h01 * y_[i + 1] + h * h11 * m_[i + 1];
}

GridTransform::GridTransform(std::shared_ptr<const std::vector<double>> s_nodes,
                             std::vector<double> values, double mean, double second_moment)
    : s_(std::move(s_nodes)), v_(std::move(values)), mean_(mean), m2_(second_moment),
      itp_(*s_, v_, -mean) {}

double GridTransform::operator()(double s) const { return itp_(s); }

std::optional<double> GridTransform::second_moment() const {
    if (m2_ > 0) return m2_;
    return std::nullopt;
}

std::string GridTransform::describe() const {
    std::ostringstream os;
    os << "grid(n=" << s_->size() << ",mean=" << mean_ << ")";
    return os.str();
}

} // namespace powmix
