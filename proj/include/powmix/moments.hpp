#pragma once

#include <functional>
#include <vector>

#include "powmix/transforms.hpp"

namespace powmix {

struct MomentEstimate {
    double value = 0;
    int levels = 0;           // extrapolation depth that was accepted
    double error = 0;         // consecutive-diagonal difference at acceptance
    bool diverged = false;    // tableau diagonal stopped contracting
};

// Mean from -d/ds log-free difference quotient (1 - F^(s))/s, Richardson
// extrapolated over s = s0 * 2^{-k}. scale fixes s0 = 1e-2/scale; pass the
// known mean when available, otherwise it is probed from the transform.
MomentEstimate mean_from_transform(const std::function<double(double)>& f,
                                   double scale = 0.0);
MomentEstimate mean_from_transform(const Transform& f, double scale = 0.0);

// Second moment from 2 (F^(s) - 1 + mu s)/s^2 with the same tableau.
MomentEstimate second_moment_from_transform(const std::function<double(double)>& f,
                                            double mu, double scale = 0.0);
MomentEstimate second_moment_from_transform(const Transform& f, double mu,
                                            double scale = 0.0);

} // namespace powmix
