#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "powmix/laws.hpp"
#include "powmix/mixing.hpp"

namespace powmix {

// Distributional equations checked by simulation. Each compares the transform
// of the left side against the transform of the right side composition at a
// shared grid of s values.
enum class EquationKind {
    Example1, // Z =d X1 + X2 + T Z, X ~ equilibrium-type pair law
    Example2, // Z =d X + T Z
    Example3, // X* =d X + T X*, X* the stationary age form
    Remark4,  // Z =d X1 + T X2 with Z length-biased of F
};

struct EquationSpec {
    EquationKind kind = EquationKind::Example2;
    Law x;          // the increment law (F in the equations)
    Law z;          // the law claimed to solve the equation
    MixingLaw T = MixingLaw::atom(0.0);
    std::size_t n = 1000000;
    int resamples = 200;
    std::uint64_t seed = 0;
};

struct SimPoint {
    double s = 0;
    double lhs = 0;
    double rhs = 0;
    double gap = 0;       // |lhs - rhs| after centering
    double threshold = 0; // bootstrap 99% quantile of the max-gap statistic
};

struct SimReport {
    bool pass = false;
    double max_gap = 0;
    double threshold = 0;
    std::vector<SimPoint> points;
    std::string kernel;   // backend used for the accumulations
    std::string note;
};

SimReport verify_equation(const EquationSpec& spec);

// Draws from a law via the Philox substream for (seed, role, index).
double sample_law(const Law& d, std::uint64_t seed, std::uint32_t role,
                  std::uint64_t index);
double sample_mixing(const MixingLaw& T, std::uint64_t seed, std::uint32_t role,
                     std::uint64_t index);

} // namespace powmix
