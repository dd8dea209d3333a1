#include "powmix/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "powmix/errors.hpp"
#include "powmix/moments.hpp"
#include "powmix/zeta.hpp"

namespace powmix {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw domain_error(msg);
}

// flatten atoms + density nodes of a mixing law into one node list
std::vector<std::pair<double, double>> all_nodes(const MixingLaw& m) {
    std::vector<std::pair<double, double>> out;
    out.reserve(m.atom_list().size() + m.qt().size());
    for (const auto& a : m.atom_list()) out.emplace_back(a.loc, a.mass);
    for (std::size_t i = 0; i < m.qt().size(); ++i) out.emplace_back(m.qt()[i], m.qw()[i]);
    return out;
}

ConditionRecord mean_condition(const std::string& name, double value, double expected,
                               double tol) {
    ConditionRecord r;
    r.name = name;
    r.value = value;
    r.expected = expected;
    r.tolerance = tol;
    r.pass = std::abs(value - expected) <= tol;
    return r;
}

ConditionRecord upper_condition(const std::string& name, double value, double bound,
                                bool strict) {
    ConditionRecord r;
    r.name = name;
    r.value = value;
    r.expected = bound;
    r.tolerance = strict ? 1e-12 : 0.0;
    r.pass = strict ? value < bound - r.tolerance : value <= bound + 1e-12;
    return r;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

} // namespace

Problem theorem1(double mu, MixingLaw T, MixingLaw A, MixingLaw B) {
    require(mu > 0, "problem: mean must be > 0");
    Problem p;
    p.family = FamilyKind::PowerMixture;
    p.family_id = "theorem1";
    p.mu = mu;
    p.T = std::move(T);
    p.A = std::move(A);
    p.B = std::move(B);
    return p;
}

Problem theorem2(double mu, MixingLaw T, MixingLaw A, double lambda, MixingLaw B) {
    require(lambda > 0, "problem: pareto scale must be > 0");
    Problem p;
    p.family = FamilyKind::ParetoMixBoth;
    p.family_id = "theorem2";
    p.mu = mu;
    p.T = std::move(T);
    p.A = std::move(A);
    p.Lam = MixingLaw::atom(lambda);
    p.B = std::move(B);
    require(mu > 0, "problem: mean must be > 0");
    return p;
}

Problem theorem3(double mu, MixingLaw T, double a, MixingLaw Lam, MixingLaw B) {
    require(mu > 0, "problem: mean must be > 0");
    require(a > 0, "problem: pareto exponent must be > 0");
    Problem p;
    p.family = FamilyKind::ParetoMixBoth;
    p.family_id = "theorem3";
    p.mu = mu;
    p.T = std::move(T);
    p.A = MixingLaw::atom(a);
    p.Lam = std::move(Lam);
    p.B = std::move(B);
    return p;
}

Problem theorem4(double mu, MixingLaw T, MixingLaw A, MixingLaw Lam, MixingLaw B) {
    require(mu > 0, "problem: mean must be > 0");
    Problem p;
    p.family = FamilyKind::ParetoMixBoth;
    p.family_id = "theorem4";
    p.mu = mu;
    p.T = std::move(T);
    p.A = std::move(A);
    p.Lam = std::move(Lam);
    p.B = std::move(B);
    return p;
}

Problem theorem5(double mu, MixingLaw T, double a, MixingLaw Lam) {
    require(mu > 0, "problem: mean must be > 0");
    Problem p;
    p.family = FamilyKind::ZetaMixture;
    p.family_id = "theorem5";
    p.mu = mu;
    p.T = std::move(T);
    p.Lam = std::move(Lam);
    p.zeta_a = a;
    return p;
}

Problem corollary1(double mu, MixingLaw T, MixingLaw A) {
    Problem p = theorem1(mu, std::move(T), std::move(A), MixingLaw::atom(0.0));
    p.family_id = "corollary1";
    return p;
}

Problem corollary2(double mu, MixingLaw T) {
    require(mu > 0, "problem: mean must be > 0");
    Problem p;
    p.family = FamilyKind::CompoundPoisson;
    p.family_id = "corollary2";
    p.mu = mu;
    p.T = std::move(T);
    return p;
}

Problem corollary3(double mu, MixingLaw T) {
    require(mu > 0, "problem: mean must be > 0");
    Problem p;
    p.family = FamilyKind::CompoundExponential;
    p.family_id = "corollary3";
    p.mu = mu;
    p.T = std::move(T);
    return p;
}

Problem corollary4(double mu, double p_outer, MixingLaw A) {
    require(p_outer >= 0 && p_outer < 1, "problem: need 0 <= p < 1");
    Problem p = theorem1(mu, MixingLaw::atom(p_outer), std::move(A), MixingLaw::atom(0.0));
    p.family_id = "corollary4";
    return p;
}

std::vector<ConditionRecord> check_conditions(const Problem& p) {
    std::vector<ConditionRecord> out;
    out.push_back(upper_condition("E[T]<1", p.T.m1(), 1.0, true));
    out.push_back(upper_condition("max(T)<=1", p.T.t_max(), 1.0, false));

    switch (p.family) {
        case FamilyKind::PowerMixture:
            if (!p.A) throw domain_error("problem: power mixture needs A");
            if (!p.B) throw domain_error("problem: power mixture needs B");
            out.push_back(mean_condition("E[A]=1", p.A->m1(), 1.0, 1e-9));
            break;
        case FamilyKind::ParetoMixBoth: {
            if (!p.A || !p.Lam || !p.B)
                throw domain_error("problem: pareto mixture needs A, Lam and B");
            double prod = p.A->m1() * p.Lam->m1();
            out.push_back(mean_condition("E[A*Lam]=1", prod, 1.0, 1e-9));
            break;
        }
        case FamilyKind::ZetaMixture: {
            if (!p.Lam) throw domain_error("problem: zeta mixture needs Lam");
            ConditionRecord dom;
            dom.name = "zeta_a>1";
            dom.value = p.zeta_a;
            dom.expected = 1.0;
            dom.tolerance = 1e-6;
            dom.pass = p.zeta_a > 1.0 + 1e-6;
            out.push_back(dom);
            if (dom.pass) {
                ZetaValues z = zeta_triple(p.zeta_a);
                out.push_back(
                    mean_condition("E[Lam]=-zeta(a)/zeta'(a)", p.Lam->m1(), -z.zeta / z.dzeta, 1e-9));
            }
            break;
        }
        case FamilyKind::CompoundPoisson:
        case FamilyKind::CompoundExponential:
            break;
    }
    return out;
}

InitMoments init_moments(const Problem& p) {
    InitMoments im;
    im.m1 = p.mu;
    double mu2 = p.mu * p.mu;
    double contr = 1.0 - p.T.m1();
    require(contr > 0, "problem: E[T] must be < 1");

    switch (p.family) {
        case FamilyKind::PowerMixture:
            im.m2 = (p.A->m2() + p.B->m1()) / contr * mu2;
            break;
        case FamilyKind::ParetoMixBoth:
            im.m2 = ((p.A->m2() + p.A->m1()) * p.Lam->m2() + p.B->m1()) / contr * mu2;
            break;
        case FamilyKind::ZetaMixture: {
            ZetaValues z = zeta_triple(p.zeta_a);
            im.m2 = z.d2zeta * p.Lam->m2() / (z.zeta * contr) * mu2;
            break;
        }
        case FamilyKind::CompoundPoisson:
            im.m2 = mu2 / contr;
            break;
        case FamilyKind::CompoundExponential:
            im.m2 = 2 * mu2 / contr;
            break;
    }
    return im;
}

std::vector<double> apply_family_map(const Problem& p, const Transform& f,
                                     const std::vector<double>& s_nodes) {
    InitMoments im = init_moments(p);
    std::vector<double> out(s_nodes.size());

    std::vector<std::pair<double, double>> an, ln;
    if (p.A) an = all_nodes(*p.A);
    if (p.Lam) ln = all_nodes(*p.Lam);
    std::unique_ptr<ZetaShifted> zs;
    if (p.family == FamilyKind::ZetaMixture) zs = std::make_unique<ZetaShifted>(p.zeta_a);

    for (std::size_t i = 0; i < s_nodes.size(); ++i) {
        double sig = sigma_at(f, p.T, s_nodes[i], im.m2);
        double v = 0;
        switch (p.family) {
            case FamilyKind::PowerMixture: {
                double sb = sigma_b_at(*p.B, sig);
                for (const auto& [a, w] : an) v += w * std::exp(-a * sb);
                break;
            }
            case FamilyKind::ParetoMixBoth: {
                double sb = sigma_b_at(*p.B, sig);
                for (const auto& [lam, wl] : ln) {
                    double base = 1.0 + lam * sb;
                    for (const auto& [a, wa] : an) v += wl * wa * std::pow(base, -a);
                }
                break;
            }
            case FamilyKind::ZetaMixture:
                for (const auto& [lam, wl] : ln) v += wl * (*zs)(lam * sig);
                v /= zs->base();
                break;
            case FamilyKind::CompoundPoisson:
                v = std::exp(-sig);
                break;
            case FamilyKind::CompoundExponential:
                v = 1.0 / (1.0 + sig);
                break;
        }
        out[i] = v;
    }
    return out;
}

TransformPtr SolveReport::transform() const {
    if (!s_nodes || values.empty()) return nullptr;
    return std::make_shared<GridTransform>(s_nodes, values, m1_init, m2_init);
}

SolveReport solve(const Problem& p, const SolveOptions& opt) {
    SolveReport rep;
    rep.conditions = check_conditions(p);
    for (const auto& c : rep.conditions)
        if (!c.pass) {
            rep.conditions_pass = false;
            rep.failure = c.name + " violated";
        }
    if (!rep.conditions_pass) return rep;

    InitMoments im = init_moments(p);
    rep.m1_init = im.m1;
    rep.m2_init = im.m2;
    rep.variance = im.m2 - im.m1 * im.m1;

    auto grid = std::make_shared<const std::vector<double>>(make_grid(p.mu, p.grid));
    rep.s_nodes = grid;

    TransformPtr start = opt.start ? opt.start : two_point_bound(im.m1, im.m2);
    std::vector<double> vals(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) vals[i] = (*start)((*grid)[i]);

    bool damped = false;
    int polish_iters = 0;
    for (int k = 1; k <= p.max_iters; ++k) {
        GridTransform cur(grid, vals, im.m1, im.m2);
        std::vector<double> mapped = apply_family_map(p, cur, *grid);

        double raw_delta = 0;
        for (std::size_t i = 0; i < vals.size(); ++i)
            raw_delta = std::max(raw_delta, std::abs(mapped[i] - vals[i]));
        if (!damped && raw_delta < opt.damp_below) damped = true;

        double ascent = 0, delta = 0;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            double next = damped ? 0.5 * (vals[i] + mapped[i]) : mapped[i];
            ascent = std::max(ascent, next - vals[i]);
            delta = std::max(delta, std::abs(next - vals[i]));
            vals[i] = next;
        }
        rep.iterations = k;
        rep.deltas.push_back(delta);
        if (opt.enforce_descent) {
            rep.worst_ascent = std::max(rep.worst_ascent, ascent);
            if (ascent > opt.tau_mono) rep.mono_failure = true;
        }

        GridTransform stepped(grid, vals, im.m1, im.m2);
        MomentEstimate m1e = mean_from_transform(stepped, im.m1);
        MomentEstimate m2e = second_moment_from_transform(stepped, im.m1, im.m1);
        rep.m1_hat = m1e.value;
        rep.m2_hat = m2e.value;
        rep.m1_drift = std::max(rep.m1_drift, std::abs(m1e.value - im.m1) / im.m1);
        rep.m2_drift = std::max(rep.m2_drift, std::abs(m2e.value - im.m2) / im.m2);

        // the plain-map residual bounds the distance to the fixed point by
        // raw/(1 - rate); push well inside tol so independent starts agree
        // to a few tol, with a capped number of polish steps as the escape
        if (raw_delta <= p.tol) {
            ++polish_iters;
            if (raw_delta <= p.tol / 20 || polish_iters >= 60) {
                rep.converged = true;
                break;
            }
        }
    }

    std::vector<double> ratios;
    for (std::size_t i = 1; i < rep.deltas.size(); ++i)
        if (rep.deltas[i - 1] > 0) ratios.push_back(rep.deltas[i] / rep.deltas[i - 1]);
    rep.empirical_rate = median(std::move(ratios));

    rep.values = std::move(vals);
    if (!rep.converged) {
        std::ostringstream os;
        os << "no convergence in " << p.max_iters << " iterations (last delta "
           << (rep.deltas.empty() ? 0.0 : rep.deltas.back()) << ")";
        rep.failure = os.str();
    }
    if (rep.mono_failure && rep.failure.empty()) rep.failure = "monotone descent violated";
    return rep;
}

double family_map_residual(const Problem& p, const Transform& f) {
    std::vector<double> grid = make_grid(p.mu, p.grid);
    std::vector<double> mapped = apply_family_map(p, f, grid);
    double worst = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        worst = std::max(worst, std::abs(f(grid[i]) - mapped[i]));
    return worst;
}

double remark4_residual(const Transform& f, const MixingLaw& T,
                        const std::vector<double>& s_nodes) {
    double worst = 0;
    for (double s : s_nodes)
        worst = std::max(worst, std::abs(f(s) - std::exp(-sigma_star_at(f, T, s))));
    return worst;
}

double two_start_distance(const Problem& p, TransformPtr alt_start) {
    SolveReport base = solve(p);
    SolveOptions opt;
    opt.enforce_descent = false; // alternative starts may approach from below
    opt.start = std::move(alt_start);
    SolveReport alt = solve(p, opt);
    if (!base.converged || !alt.converged) return std::numeric_limits<double>::infinity();
    double worst = 0;
    for (std::size_t i = 0; i < base.values.size(); ++i)
        worst = std::max(worst, std::abs(base.values[i] - alt.values[i]));
    return worst;
}

} // namespace powmix
