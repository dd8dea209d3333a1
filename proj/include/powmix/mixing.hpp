#pragma once

#include <string>
#include <vector>

#include "powmix/transforms.hpp"

namespace powmix {

enum class MixKind { Atoms, Uniform, BetaTail, Example2D, USquared, Exponential };

// A nonnegative mixing law (T, A, B, Lambda): atoms plus smooth density pieces
// represented by fixed Gauss-Legendre quadrature nodes. Moments are analytic;
// construction cross-checks them against the quadrature.
class MixingLaw {
public:
    struct Atom {
        double loc, mass;
    };

    static MixingLaw atom(double loc);               // unit point mass
    static MixingLaw atoms(std::vector<Atom> pts);   // masses must sum to 1
    static MixingLaw uniform(double lo, double hi);
    static MixingLaw beta_tail(double a);            // F(x) = 1 - (1-x)^a on [0,1]
    static MixingLaw example2d();                    // density 1/sqrt(t) - 1 on (0,1)
    static MixingLaw usquared();                     // law of U^2, U uniform(0,1)
    static MixingLaw exponential(double mu);         // truncated at the 1 - 1e-12 quantile

    MixKind kind() const { return kind_; }
    double m1() const { return m1_; }
    double m2() const { return m2_; }
    double t_max() const { return t_max_; }
    double mass_defect() const { return mass_defect_; }
    double cdf(double t) const;

    const std::vector<Atom>& atom_list() const { return atoms_; }
    const std::vector<double>& qt() const { return qt_; } // density quadrature nodes
    const std::vector<double>& qw() const { return qw_; } // density quadrature weights

    // raw parameters by kind: Uniform(lo,hi), BetaTail(a), Exponential(mu)
    double p1() const { return p1_; }
    double p2() const { return p2_; }

    double quad_mass() const;
    double quad_m1() const;
    double quad_m2() const;
    std::string describe() const;

private:
    MixingLaw() = default;
    void validate() const;

    MixKind kind_ = MixKind::Atoms;
    double p1_ = 0, p2_ = 0;
    std::vector<Atom> atoms_;
    std::vector<double> qt_, qw_;
    double m1_ = 0, m2_ = 0, t_max_ = 0, mass_defect_ = 0;
};

// sigma(s) = int (1 - F^(ts))/t dF_T(t), with the t=0 integrand mu*s by
// continuity. m2f is the second moment of f used in the small-argument switch
// (t*s < 1e-8); pass <=0 to use f's own declared second moment or the plain
// first-order limit.
double sigma_at(const Transform& f, const MixingLaw& T, double s, double m2f = 0.0);

// sigma_B(x) = int_0^x F^_B(t) dt = int (1 - e^{-x y})/y dF_B(y).
double sigma_b_at(const MixingLaw& B, double x);

// sigma_*(s) = int_0^s mu * int F^(x t) dF_T(t) dx, evaluated as
// mu * int (1/t) int_0^{s t} F^(u) du dF_T(t).
double sigma_star_at(const Transform& f, const MixingLaw& T, double s);

// Gauss-Legendre nodes/weights on [-1,1] (cached per n).
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

} // namespace powmix
