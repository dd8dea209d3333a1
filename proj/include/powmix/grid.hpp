#pragma once

#include <memory>
#include <vector>

#include "powmix/transforms.hpp"

namespace powmix {

// Solver grid: node s=0 plus `nodes` log-spaced points on [s_min/mu, s_max/mu]
// scales resolved at construction when the defaults (<0) are kept.
struct GridSpec {
    int nodes = 512;
    double s_min = -1.0; // resolved to 1e-6/mu
    double s_max = -1.0; // resolved to 50/mu
};

std::vector<double> make_grid(double mu, const GridSpec& spec = {});

// Shape-preserving piecewise cubic through nonincreasing values, built on
// x = log1p(s). Slopes come from 4-point local cubics, box-limited so the
// interpolant never leaves the interval spanned by neighboring nodes.
class MonotoneCubic {
public:
    // left_slope: exact dV/ds at the first node (pass -mean when value(0)=1);
    // NaN requests the estimated slope instead.
    MonotoneCubic(const std::vector<double>& s_nodes, const std::vector<double>& values,
                  double left_slope);

    double operator()(double s) const; // range_error outside [s0, s_back]
    double s_back() const { return s_back_; }

private:
    std::vector<double> x_, y_, m_;
    double s_back_;
};

// A transform sampled on a fixed grid with the monotone interpolation rule.
class GridTransform final : public Transform {
public:
    GridTransform(std::shared_ptr<const std::vector<double>> s_nodes, std::vector<double> values,
                  double mean, double second_moment = 0.0);

    double operator()(double s) const override;
    std::optional<double> mean() const override { return mean_; }
    std::optional<double> second_moment() const override;
    std::string describe() const override;

    const std::vector<double>& nodes() const { return *s_; }
    const std::vector<double>& values() const { return v_; }
    double covered_max() const { return itp_.s_back(); }

private:
    std::shared_ptr<const std::vector<double>> s_;
    std::vector<double> v_;
    double mean_, m2_;
    MonotoneCubic itp_;
};

} // namespace powmix
