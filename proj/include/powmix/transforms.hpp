#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace powmix {

// An evaluable LS-transform s -> F^(s) in (0,1], s >= 0.
class Transform {
public:
    virtual ~Transform() = default;
    virtual double operator()(double s) const = 0;
    virtual std::optional<double> mean() const = 0;
    virtual std::optional<double> second_moment() const { return std::nullopt; }
    virtual std::string describe() const = 0;
};

using TransformPtr = std::shared_ptr<const Transform>;

// Catalog entries. Every factory validates its parameters (domain_error).
TransformPtr degenerate(double c);                    // e^{-c s}
TransformPtr exponential(double mu);                  // 1/(1 + mu s)
TransformPtr gamma_transform(double a, double b);     // (1 + b s)^{-a}
TransformPtr exp_mixture(double p, double beta);      // p + (1-p)/(1 + s/beta)
TransformPtr exp_mixture_mean(double p, double mu);   // beta = (1-p)/mu
TransformPtr two_point_bound(double m1, double m2);   // 1 - m1^2/m2 + (m1^2/m2) e^{-(m2/m1) s}
TransformPtr sinh_family(double t);                   // (sqrt(2s)/sinh sqrt(2s))^t
TransformPtr cosh_family(double t);                   // (1/cosh sqrt(2s))^t
TransformPtr tanh_family(double t);                   // (tanh sqrt(2s)/sqrt(2s))^t
TransformPtr zeta_dist(double a);                     // zeta(a+s)/zeta(a), a > 1
TransformPtr scaled_sinh_solution(double mu);         // 3 mu s/(sinh sqrt(3 mu s))^2

// Transform of a sum of independent variables (pointwise product).
TransformPtr product(TransformPtr a, TransformPtr b);

// s -> inner(c * s); the transform of X/ (1/c) i.e. c-scaled argument.
TransformPtr scaled(TransformPtr inner, double c);

// Complete-monotonicity diagnostic: divided differences of orders 1..max_order
// on the sampled grid must alternate in sign. Violations are normalized by the
// largest same-order magnitude; pass means every order stays within tol.
struct CmOrderReport {
    int order;
    double worst_violation; // normalized, >= 0
    double scale;           // max |divided difference| at this order
};
struct CmReport {
    bool pass;
    std::vector<CmOrderReport> orders;
};
CmReport check_complete_monotonicity(const std::function<double(double)>& f,
                                     const std::vector<double>& grid,
                                     int max_order = 4, double tol = 1e-9);
CmReport check_complete_monotonicity(const Transform& t, const std::vector<double>& grid,
                                     int max_order = 4, double tol = 1e-9);

} // namespace powmix
