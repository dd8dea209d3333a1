#pragma once

#include <memory>
#include <optional>
#include <string>

#include "powmix/transforms.hpp"

namespace powmix {

// Sampleable nonnegative distributions used by the moment constructions and
// the Monte Carlo checks. Closed-form transforms are exposed where they exist.
enum class LawKind {
    Degenerate,     // point mass at a
    Exponential,    // mean a
    Gamma,          // shape a, scale b
    ExpMixtureAtom, // atom p=a at 0, else Exp with rate b
    Uniform,        // on [a, b]
    BetaTail,       // density a(1-x/b)^{a-1}/b on [0, b]
    TwoPointLaw,    // atom at 0 mass 1-m1^2/m2, atom at m2/m1 mass m1^2/m2
    Example2D,      // density 1/sqrt(x) - 1 on (0,1)
    USquared,       // square of a uniform(0,1)
    ExitTimeC1,     // Brownian first exit from (-1,1); transform 1/cosh sqrt(2s)
    ExitTimeC1Sb,   // size-biased ExitTimeC1
    LengthBiasedOf, // density x f(x)/mu over a bounded-support base, by rejection
    ConvolutionOf,  // sum of two independent laws
};

struct Law {
    LawKind kind = LawKind::Degenerate;
    double a = 0, b = 0;
    std::shared_ptr<const Law> base;  // LengthBiasedOf, ConvolutionOf
    std::shared_ptr<const Law> base2; // ConvolutionOf only

    double mean() const;
    std::optional<double> m2() const;
    std::optional<double> m3() const;
    TransformPtr transform() const; // nullptr when no closed form is carried
    std::string describe() const;
};

Law law_degenerate(double c);
Law law_exponential(double mu);
Law law_gamma(double shape, double scale);
Law law_exp_mixture(double p, double beta); // beta is the rate of the Exp part
Law law_uniform(double lo, double hi);
Law law_beta_tail(double a, double scale = 1.0);
Law law_two_point(double m1, double m2);
Law law_example2d();
Law law_usquared();
Law law_exit_time_c1();
Law law_convolution(const Law& x, const Law& y);

// Length-biased law: density x f(x)/mu. Closed-form mapping where known,
// exact atom reweighting for discrete laws, rejection for bounded densities.
Law length_biased(const Law& d);

// Equilibrium law: density (1 - F(x))/mu. Closed-form mappings only.
Law equilibrium(const Law& d);
Law equilibrium_iterate(Law d, int k);

// Transform-level equilibrium identity (1 - F^(s))/(mu s); works for any
// transform with a known mean, including grid-backed ones.
TransformPtr equilibrium_transform(TransformPtr f);

} // namespace powmix
