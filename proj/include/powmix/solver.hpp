#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "powmix/grid.hpp"
#include "powmix/mixing.hpp"
#include "powmix/transforms.hpp"

namespace powmix {

// The five equation families. Each one fixes how the outer mixture is applied
// to sigma(s) = integral of (1 - F^(ts))/t dF_T(t).
enum class FamilyKind {
    PowerMixture,        // integral exp(-a sigma_B(sigma)) dF_A, E[A] = 1
    ParetoMixBoth,       // double integral (1 + l sigma_B(sigma))^{-a}, E[A Lam] = 1
    ZetaMixture,         // integral zeta(a + l sigma)/zeta(a) dF_Lam
    CompoundPoisson,     // exp(-sigma)
    CompoundExponential, // 1/(1 + sigma)
};

struct Problem {
    FamilyKind family = FamilyKind::CompoundPoisson;
    std::string family_id;          // resolved name used in reports
    double mu = 1.0;                // target mean of the solution
    MixingLaw T = MixingLaw::atom(0.0);
    std::optional<MixingLaw> A;     // PowerMixture, ParetoMixBoth
    std::optional<MixingLaw> Lam;   // ParetoMixBoth, ZetaMixture
    std::optional<MixingLaw> B;     // families with a sigma_B layer
    double zeta_a = 2.0;            // ZetaMixture only
    GridSpec grid;
    double tol = 1e-10;
    int max_iters = 500;
};

// Named presets that pin the free mixing laws of each special case.
Problem theorem1(double mu, MixingLaw T, MixingLaw A, MixingLaw B);
Problem theorem2(double mu, MixingLaw T, MixingLaw A, double lambda, MixingLaw B);
Problem theorem3(double mu, MixingLaw T, double a, MixingLaw Lam, MixingLaw B);
Problem theorem4(double mu, MixingLaw T, MixingLaw A, MixingLaw Lam, MixingLaw B);
Problem theorem5(double mu, MixingLaw T, double a, MixingLaw Lam);
Problem corollary1(double mu, MixingLaw T, MixingLaw A);
Problem corollary2(double mu, MixingLaw T);
Problem corollary3(double mu, MixingLaw T);
Problem corollary4(double mu, double p, MixingLaw A);

struct ConditionRecord {
    std::string name;
    double value = 0;
    double expected = 0;
    double tolerance = 0;
    bool pass = false;
};

// Existence/uniqueness admission checks for a problem. Hard failures (support,
// normalization, mean constraints) come back with pass = false.
std::vector<ConditionRecord> check_conditions(const Problem& p);

struct InitMoments {
    double m1 = 0;
    double m2 = 0;
};

// Mean and second moment of the solution implied by the family parameters.
InitMoments init_moments(const Problem& p);

struct SolveOptions {
    bool enforce_descent = true;
    double damp_below = 1e-7; // switch to averaged steps under this delta
    double tau_mono = 1e-9;
    std::shared_ptr<const Transform> start; // override two-point initializer
};

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    std::vector<double> deltas;      // sup-norm step sizes
    double worst_ascent = 0;         // max over iterations of nodewise increase
    bool mono_failure = false;
    double m1_init = 0, m2_init = 0;
    double m1_hat = 0, m2_hat = 0;   // measured on the final iterate
    double m1_drift = 0, m2_drift = 0; // worst relative drift across iterates
    double variance = 0;             // m2_init - m1_init^2
    double empirical_rate = 0;       // median delta ratio
    std::vector<ConditionRecord> conditions;
    bool conditions_pass = true;
    std::string failure;             // set when not converged / rejected
    std::shared_ptr<const std::vector<double>> s_nodes;
    std::vector<double> values;

    TransformPtr transform() const;
};

SolveReport solve(const Problem& p, const SolveOptions& opt = {});

// One application of the family map to an arbitrary transform, on the grid.
std::vector<double> apply_family_map(const Problem& p, const Transform& f,
                                     const std::vector<double>& s_nodes);

// Sup over the grid of |F^ - map(F^)| for a candidate solution.
double family_map_residual(const Problem& p, const Transform& f);

// Sup over the grid of |F^(s) - exp(-sigma_*(s))|, the fixed-point identity
// for the size-biased splitting equation.
double remark4_residual(const Transform& f, const MixingLaw& T,
                        const std::vector<double>& s_nodes);

// Distance between solves started from the two-point bound and from a caller
// supplied alternative start.
double two_start_distance(const Problem& p, TransformPtr alt_start);

} // namespace powmix
