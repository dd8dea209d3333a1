// Command-line front end: parse a JSON run config, execute one of the
// commands (solve, residual, simulate, moments, conditions, catalog), and
// write report.json plus, for solve/residual, nodes.csv.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "powmix/errors.hpp"
#include "powmix/grid.hpp"
#include "powmix/kernels/kernels.hpp"
#include "powmix/laws.hpp"
#include "powmix/mixing.hpp"
#include "powmix/moments.hpp"
#include "powmix/simulate.hpp"
#include "powmix/solver.hpp"
#include "powmix/transforms.hpp"
#include "powmix/version.hpp"
#include "powmix/zeta.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace powmix;

// Config-stage problems exit with status 1; compute-stage failures with 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json default_config() {
    return json{
        {"command", ""},
        {"family", "compound_poisson"},
        {"mu", 1.0},
        {"zeta_a", 2.0},
        {"T", json{{"atom", {0.0, 1.0}}}},
        {"A", nullptr},
        {"Lam", nullptr},
        {"B", nullptr},
        {"grid", json{{"nodes", 512}, {"s_min", -1.0}, {"s_max", -1.0}}},
        {"tol", 1e-10},
        {"max_iters", 500},
        {"enforce_descent", true},
        {"tau_mono", 1e-9},
        {"damp_below", 1e-7},
        {"golden", nullptr},
        {"candidate", nullptr},
        {"residual_tol", 1e-6},
        {"equation", "example2"},
        {"x", nullptr},
        {"z", nullptr},
        {"n", 1000000},
        {"resamples", 200},
        {"seed", 0},
        {"out", "."},
    };
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
        throw ConfigError("parse error at line " + std::to_string(line) + ": " + e.what());
    }
}

void merge_section(json& base, const json& over, const std::string& prefix) {
    for (const auto& [key, value] : over.items()) {
        if (!base.contains(key))
            throw ConfigError("field '" + prefix + key + "': unknown field");
        if (key == "grid" && value.is_object())
            merge_section(base[key], value, key + ".");
        else
            base[key] = value;
    }
}

void apply_set(json& cfg, const std::string& kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("--set expects key=value, got '" + kv + "'");
    std::string path = kv.substr(0, eq), raw = kv.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw; // unquoted strings are taken literally
    }
    json* node = &cfg;
    std::size_t pos = 0;
    for (;;) {
        auto dot = path.find('.', pos);
        std::string part = path.substr(pos, dot - pos);
        if (part.empty()) throw ConfigError("--set path '" + path + "' has an empty segment");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &((*node)[part]);
        pos = dot + 1;
    }
}

void check_keys(const json& cfg) {
    const json ref = default_config();
    for (const auto& [key, value] : cfg.items())
        if (!ref.contains(key)) throw ConfigError("field '" + key + "': unknown field");
    if (!cfg.at("grid").is_object()) throw ConfigError("field 'grid': expected an object");
    for (const auto& [key, value] : cfg.at("grid").items())
        if (!ref.at("grid").contains(key))
            throw ConfigError("field 'grid." + key + "': unknown field");
}

double num_at(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError("field '" + field + "': expected a number");
    return j.get<double>();
}

std::int64_t int_at(const json& j, const std::string& field) {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number_float()) {
        double v = j.get<double>();
        if (v == std::floor(v) && std::abs(v) < 9e15) return static_cast<std::int64_t>(v);
    }
    throw ConfigError("field '" + field + "': expected an integer");
}

MixingLaw parse_mixing(const json& j, const std::string& field) {
    auto fail = [&](const std::string& why) -> ConfigError {
        return ConfigError("field '" + field + "': " + why);
    };
    if (j.is_string()) {
        std::string name = j.get<std::string>();
        if (name == "example2d") return MixingLaw::example2d();
        if (name == "usquared") return MixingLaw::usquared();
        throw fail("unknown mixing law '" + name + "'");
    }
    if (!j.is_object() || j.size() != 1)
        throw fail("mixing law must be \"example2d\", \"usquared\", or a one-key object");
    const std::string key = j.begin().key();
    const json& v = j.begin().value();
    if (key == "atom") {
        if (!v.is_array() || v.empty()) throw fail("atom expects [loc, mass] or a list of pairs");
        if (v[0].is_array()) {
            std::vector<MixingLaw::Atom> pts;
            for (const auto& e : v) {
                if (!e.is_array() || e.size() != 2) throw fail("atom pairs are [loc, mass]");
                pts.push_back({num_at(e[0], field), num_at(e[1], field)});
            }
            return MixingLaw::atoms(pts);
        }
        if (v.size() != 2) throw fail("atom expects [loc, mass]");
        double loc = num_at(v[0], field), mass = num_at(v[1], field);
        if (mass == 1.0) return MixingLaw::atom(loc);
        return MixingLaw::atoms({{loc, mass}});
    }
    if (key == "uniform") {
        if (!v.is_array() || v.size() != 2) throw fail("uniform expects [lo, hi]");
        return MixingLaw::uniform(num_at(v[0], field), num_at(v[1], field));
    }
    if (key == "beta_tail") return MixingLaw::beta_tail(num_at(v, field));
    if (key == "exp") return MixingLaw::exponential(num_at(v, field));
    throw fail("unknown mixing key '" + key + "'");
}

std::vector<double> params_of(const json& j, const std::string& field) {
    std::vector<double> out;
    if (!j.contains("params")) return out;
    const json& p = j.at("params");
    if (!p.is_array()) throw ConfigError("field '" + field + ".params': expected an array");
    for (const auto& e : p) out.push_back(num_at(e, field + ".params"));
    return out;
}

TransformPtr parse_catalog(const json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("id"))
        throw ConfigError("field '" + field + "': expected {\"id\": ..., \"params\": [...]}");
    for (const auto& [key, value] : j.items())
        if (key != "id" && key != "params" && key != "scale")
            throw ConfigError("field '" + field + "." + key + "': unknown field");
    std::string id = j.at("id").get<std::string>();
    std::vector<double> par = params_of(j, field);
    auto need = [&](std::size_t n) {
        if (par.size() != n)
            throw ConfigError("field '" + field + "': '" + id + "' takes " + std::to_string(n) +
                              " params, got " + std::to_string(par.size()));
    };
    TransformPtr t;
    if (id == "degenerate") {
        need(1);
        t = degenerate(par[0]);
    } else if (id == "exponential") {
        need(1);
        t = exponential(par[0]);
    } else if (id == "gamma") {
        need(2);
        t = gamma_transform(par[0], par[1]);
    } else if (id == "exp_mixture") {
        need(2);
        t = exp_mixture(par[0], par[1]);
    } else if (id == "two_point") {
        need(2);
        t = two_point_bound(par[0], par[1]);
    } else if (id == "sinh_t") {
        need(1);
        t = sinh_family(par[0]);
    } else if (id == "cosh_t") {
        need(1);
        t = cosh_family(par[0]);
    } else if (id == "tanh_t") {
        need(1);
        t = tanh_family(par[0]);
    } else if (id == "zeta_dist") {
        need(1);
        t = zeta_dist(par[0]);
    } else if (id == "scaled_sinh") {
        need(1);
        t = scaled_sinh_solution(par[0]);
    } else {
        throw ConfigError("field '" + field + "': unknown catalog id '" + id + "'");
    }
    if (j.contains("scale")) t = scaled(t, num_at(j.at("scale"), field + ".scale"));
    return t;
}

Law parse_law(const json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("id"))
        throw ConfigError("field '" + field + "': expected {\"id\": ..., \"params\": [...]}");
    std::string id = j.at("id").get<std::string>();
    std::vector<double> par = params_of(j, field);
    auto need = [&](std::size_t n) {
        if (par.size() != n)
            throw ConfigError("field '" + field + "': law '" + id + "' takes " +
                              std::to_string(n) + " params, got " + std::to_string(par.size()));
    };
    if (id == "degenerate") {
        need(1);
        return law_degenerate(par[0]);
    }
    if (id == "exponential") {
        need(1);
        return law_exponential(par[0]);
    }
    if (id == "gamma") {
        need(2);
        return law_gamma(par[0], par[1]);
    }
    if (id == "exp_mixture") {
        need(2);
        return law_exp_mixture(par[0], par[1]);
    }
    if (id == "uniform") {
        need(2);
        return law_uniform(par[0], par[1]);
    }
    if (id == "beta_tail") {
        if (par.size() == 1) return law_beta_tail(par[0]);
        need(2);
        return law_beta_tail(par[0], par[1]);
    }
    if (id == "two_point") {
        need(2);
        return law_two_point(par[0], par[1]);
    }
    if (id == "example2d") return law_example2d();
    if (id == "usquared") return law_usquared();
    if (id == "exit_time_c1") return law_exit_time_c1();
    if (id == "length_biased") {
        if (!j.contains("of")) throw ConfigError("field '" + field + "': length_biased needs 'of'");
        return length_biased(parse_law(j.at("of"), field + ".of"));
    }
    if (id == "equilibrium") {
        if (!j.contains("of")) throw ConfigError("field '" + field + "': equilibrium needs 'of'");
        return equilibrium(parse_law(j.at("of"), field + ".of"));
    }
    if (id == "convolution") {
        if (!j.contains("of") || !j.at("of").is_array() || j.at("of").size() != 2)
            throw ConfigError("field '" + field + "': convolution needs 'of': [law, law]");
        return law_convolution(parse_law(j.at("of")[0], field + ".of"),
                               parse_law(j.at("of")[1], field + ".of"));
    }
    throw ConfigError("field '" + field + "': unknown law id '" + id + "'");
}

GridSpec parse_grid(const json& cfg) {
    GridSpec g;
    const json& jg = cfg.at("grid");
    g.nodes = static_cast<int>(int_at(jg.at("nodes"), "grid.nodes"));
    if (g.nodes < 8) throw ConfigError("field 'grid.nodes': need at least 8 nodes");
    g.s_min = num_at(jg.at("s_min"), "grid.s_min");
    g.s_max = num_at(jg.at("s_max"), "grid.s_max");
    return g;
}

void require_unused(const json& cfg, const char* key, const std::string& family) {
    if (!cfg.at(key).is_null())
        throw ConfigError("field '" + std::string(key) + "': not used by family '" + family + "'");
}

// Builds the Problem and fills every defaulted descriptor back into cfg so the
// reported config is fully resolved.
Problem build_problem(json& cfg) {
    std::string fam = cfg.at("family").get<std::string>();
    Problem p;
    p.family_id = fam;
    p.mu = num_at(cfg.at("mu"), "mu");
    if (!(p.mu > 0)) throw ConfigError("field 'mu': must be > 0");
    p.T = parse_mixing(cfg.at("T"), "T");
    p.grid = parse_grid(cfg);
    p.tol = num_at(cfg.at("tol"), "tol");
    if (!(p.tol > 0)) throw ConfigError("field 'tol': must be > 0");
    p.max_iters = static_cast<int>(int_at(cfg.at("max_iters"), "max_iters"));
    if (p.max_iters < 1) throw ConfigError("field 'max_iters': must be >= 1");

    auto fill = [&](const char* key, json def) {
        if (cfg.at(key).is_null()) cfg[key] = std::move(def);
        return parse_mixing(cfg.at(key), key);
    };
    json unit_atom = json{{"atom", {1.0, 1.0}}};
    json zero_atom = json{{"atom", {0.0, 1.0}}};

    if (fam == "theorem1" || fam == "power_mixture") {
        p.family = FamilyKind::PowerMixture;
        p.A = fill("A", unit_atom);
        p.B = fill("B", zero_atom);
        require_unused(cfg, "Lam", fam);
    } else if (fam == "corollary1" || fam == "corollary4") {
        p.family = FamilyKind::PowerMixture;
        p.A = fill("A", unit_atom);
        require_unused(cfg, "B", fam);
        require_unused(cfg, "Lam", fam);
        cfg["B"] = zero_atom;
        p.B = MixingLaw::atom(0.0);
        if (fam == "corollary4" &&
            (p.T.kind() != MixKind::Atoms || p.T.atom_list().size() != 1))
            throw ConfigError("field 'T': corollary4 takes a single atom T");
    } else if (fam == "theorem2" || fam == "theorem3" || fam == "theorem4" ||
               fam == "pareto_mixture") {
        p.family = FamilyKind::ParetoMixBoth;
        p.A = fill("A", unit_atom);
        p.Lam = fill("Lam", unit_atom);
        p.B = fill("B", zero_atom);
        if (fam == "theorem2" &&
            (p.Lam->kind() != MixKind::Atoms || p.Lam->atom_list().size() != 1))
            throw ConfigError("field 'Lam': theorem2 takes a single atom Lam");
        if (fam == "theorem3" &&
            (p.A->kind() != MixKind::Atoms || p.A->atom_list().size() != 1))
            throw ConfigError("field 'A': theorem3 takes a single atom A");
    } else if (fam == "theorem5" || fam == "zeta_mixture") {
        p.family = FamilyKind::ZetaMixture;
        p.zeta_a = num_at(cfg.at("zeta_a"), "zeta_a");
        if (!(p.zeta_a > 1.0 + 1e-6)) throw ConfigError("field 'zeta_a': must be > 1");
        require_unused(cfg, "A", fam);
        require_unused(cfg, "B", fam);
        if (cfg.at("Lam").is_null()) {
            ZetaValues z = zeta_triple(p.zeta_a);
            cfg["Lam"] = json{{"atom", {-z.zeta / z.dzeta, 1.0}}};
        }
        p.Lam = parse_mixing(cfg.at("Lam"), "Lam");
    } else if (fam == "corollary2" || fam == "compound_poisson") {
        p.family = FamilyKind::CompoundPoisson;
        require_unused(cfg, "A", fam);
        require_unused(cfg, "Lam", fam);
        require_unused(cfg, "B", fam);
    } else if (fam == "corollary3" || fam == "compound_exponential") {
        p.family = FamilyKind::CompoundExponential;
        require_unused(cfg, "A", fam);
        require_unused(cfg, "Lam", fam);
        require_unused(cfg, "B", fam);
    } else {
        throw ConfigError("field 'family': unknown id '" + fam + "'");
    }
    return p;
}

SolveOptions parse_options(const json& cfg) {
    SolveOptions opt;
    if (!cfg.at("enforce_descent").is_boolean())
        throw ConfigError("field 'enforce_descent': expected a boolean");
    opt.enforce_descent = cfg.at("enforce_descent").get<bool>();
    opt.tau_mono = num_at(cfg.at("tau_mono"), "tau_mono");
    opt.damp_below = num_at(cfg.at("damp_below"), "damp_below");
    return opt;
}

EquationKind parse_equation(const json& cfg) {
    std::string eq = cfg.at("equation").get<std::string>();
    if (eq == "example1") return EquationKind::Example1;
    if (eq == "example2") return EquationKind::Example2;
    if (eq == "example3") return EquationKind::Example3;
    if (eq == "remark4") return EquationKind::Remark4;
    throw ConfigError("field 'equation': unknown equation '" + eq + "'");
}

json condition_json(const ConditionRecord& c) {
    return json{{"name", c.name},
                {"value", c.value},
                {"expected", c.expected},
                {"tolerance", c.tolerance},
                {"pass", c.pass}};
}

json tolerances_json(const json& cfg) {
    return json{{"tol", cfg.at("tol")},
                {"tau_mono", cfg.at("tau_mono")},
                {"damp_below", cfg.at("damp_below")},
                {"residual_tol", cfg.at("residual_tol")},
                {"condition_mean_tol", 1e-9},
                {"bootstrap_level", 0.99}};
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_nodes_csv(const std::string& path, const std::vector<double>& s,
                     const std::vector<double>& fhat, const Transform* ref) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "s,fhat,ref,gap\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << fmt17(s[i]) << ',' << fmt17(fhat[i]);
        if (ref) {
            double r = (*ref)(s[i]);
            out << ',' << fmt17(r) << ',' << fmt17(std::abs(fhat[i] - r));
        } else {
            out << ",,";
        }
        out << '\n';
    }
}

struct Outcome {
    json result;
    bool pass = true;
    std::string message;
};

Outcome run_solve(json& cfg, const std::string& outdir) {
    Problem p = build_problem(cfg);
    SolveOptions opt = parse_options(cfg);
    TransformPtr golden;
    if (!cfg.at("golden").is_null()) golden = parse_catalog(cfg.at("golden"), "golden");

    SolveReport rep = solve(p, opt);

    Outcome oc;
    oc.result["converged"] = rep.converged;
    oc.result["iterations"] = rep.iterations;
    oc.result["m1_init"] = rep.m1_init;
    oc.result["m2_init"] = rep.m2_init;
    oc.result["variance"] = rep.variance;
    oc.result["m1_hat"] = rep.m1_hat;
    oc.result["m2_hat"] = rep.m2_hat;
    oc.result["m1_drift"] = rep.m1_drift;
    oc.result["m2_drift"] = rep.m2_drift;
    oc.result["worst_ascent"] = rep.worst_ascent;
    oc.result["mono_failure"] = rep.mono_failure;
    oc.result["empirical_rate"] = rep.empirical_rate;
    oc.result["conditions_pass"] = rep.conditions_pass;
    oc.result["conditions"] = json::array();
    for (const auto& c : rep.conditions) oc.result["conditions"].push_back(condition_json(c));
    oc.result["failure"] = rep.failure;

    if (rep.s_nodes) {
        write_nodes_csv(outdir + "/nodes.csv", *rep.s_nodes, rep.values, golden.get());
        oc.result["nodes_csv"] = "nodes.csv";
        oc.result["node_count"] = rep.s_nodes->size();
        if (golden) {
            double worst = 0;
            for (std::size_t i = 0; i < rep.s_nodes->size(); ++i)
                worst = std::max(worst, std::abs(rep.values[i] - (*golden)((*rep.s_nodes)[i])));
            oc.result["golden_max_gap"] = worst;
        }
    }

    oc.pass = rep.converged && rep.conditions_pass;
    if (!oc.pass) oc.message = rep.failure.empty() ? "solve failed" : rep.failure;
    return oc;
}

Outcome run_conditions(json& cfg) {
    Problem p = build_problem(cfg);
    auto recs = check_conditions(p);
    Outcome oc;
    oc.result["conditions"] = json::array();
    for (const auto& c : recs) {
        oc.result["conditions"].push_back(condition_json(c));
        if (!c.pass && oc.message.empty()) {
            oc.pass = false;
            oc.message = c.name + " violated";
        }
    }
    oc.result["pass"] = oc.pass;
    return oc;
}

Outcome run_residual(json& cfg, const std::string& outdir) {
    Problem p = build_problem(cfg);
    if (cfg.at("candidate").is_null())
        throw ConfigError("field 'candidate': residual needs a catalog candidate");
    TransformPtr cand = parse_catalog(cfg.at("candidate"), "candidate");
    double rtol = num_at(cfg.at("residual_tol"), "residual_tol");
    std::string eq = cfg.at("equation").get<std::string>();

    auto nodes = make_grid(p.mu, p.grid);
    std::vector<double> fv(nodes.size()), mv(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) fv[i] = (*cand)(nodes[i]);

    double res = 0;
    std::string kind;
    if (eq == "remark4") {
        kind = "remark4";
        for (std::size_t i = 0; i < nodes.size(); ++i)
            mv[i] = std::exp(-sigma_star_at(*cand, p.T, nodes[i]));
        for (std::size_t i = 0; i < nodes.size(); ++i)
            res = std::max(res, std::abs(fv[i] - mv[i]));
    } else {
        kind = "family";
        mv = apply_family_map(p, *cand, nodes);
        for (std::size_t i = 0; i < nodes.size(); ++i)
            res = std::max(res, std::abs(fv[i] - mv[i]));
    }

    std::ofstream out(outdir + "/nodes.csv");
    if (!out) throw std::runtime_error("cannot write '" + outdir + "/nodes.csv'");
    out << "s,fhat,ref,gap\n";
    for (std::size_t i = 0; i < nodes.size(); ++i)
        out << fmt17(nodes[i]) << ',' << fmt17(fv[i]) << ',' << fmt17(mv[i]) << ','
            << fmt17(std::abs(fv[i] - mv[i])) << '\n';

    Outcome oc;
    oc.result["kind"] = kind;
    oc.result["residual"] = res;
    oc.result["tolerance"] = rtol;
    oc.result["nodes_csv"] = "nodes.csv";
    oc.result["node_count"] = nodes.size();
    oc.pass = res <= rtol;
    if (!oc.pass) oc.message = "residual " + fmt17(res) + " exceeds tolerance " + fmt17(rtol);
    return oc;
}

Outcome run_moments(json& cfg) {
    TransformPtr f;
    std::optional<double> declared_mean, declared_m2;
    if (!cfg.at("candidate").is_null()) {
        f = parse_catalog(cfg.at("candidate"), "candidate");
        if (auto m = f->mean()) declared_mean = *m;
        if (auto m = f->second_moment()) declared_m2 = *m;
    } else {
        Problem p = build_problem(cfg);
        SolveReport rep = solve(p, parse_options(cfg));
        if (!rep.converged) {
            Outcome oc;
            oc.pass = false;
            oc.message = rep.failure.empty() ? "solve failed" : rep.failure;
            oc.result["converged"] = false;
            oc.result["failure"] = oc.message;
            return oc;
        }
        f = rep.transform();
        declared_mean = rep.m1_init;
        declared_m2 = rep.m2_init;
    }

    MomentEstimate me = mean_from_transform(*f);
    MomentEstimate se = second_moment_from_transform(*f, me.value);
    auto estimate_json = [](const MomentEstimate& e) {
        return json{{"value", e.value},
                    {"levels", e.levels},
                    {"error", e.error},
                    {"diverged", e.diverged}};
    };
    Outcome oc;
    oc.result["mean"] = estimate_json(me);
    oc.result["second_moment"] = estimate_json(se);
    oc.result["variance"] = se.value - me.value * me.value;
    oc.result["declared_mean"] = declared_mean ? json(*declared_mean) : json(nullptr);
    oc.result["declared_second_moment"] = declared_m2 ? json(*declared_m2) : json(nullptr);
    oc.pass = !me.diverged && !se.diverged;
    if (!oc.pass) oc.message = "moment extrapolation diverged";
    return oc;
}

Outcome run_simulate(json& cfg) {
    EquationSpec es;
    es.kind = parse_equation(cfg);
    if (cfg.at("x").is_null()) throw ConfigError("field 'x': simulate needs the increment law");
    if (cfg.at("z").is_null()) throw ConfigError("field 'z': simulate needs the candidate law");
    es.x = parse_law(cfg.at("x"), "x");
    es.z = parse_law(cfg.at("z"), "z");
    es.T = parse_mixing(cfg.at("T"), "T");
    std::int64_t n = int_at(cfg.at("n"), "n");
    if (n < 10000) throw ConfigError("field 'n': need at least 10000 samples");
    es.n = static_cast<std::size_t>(n);
    std::int64_t resamples = int_at(cfg.at("resamples"), "resamples");
    if (resamples < 100) throw ConfigError("field 'resamples': need at least 100 resamples");
    es.resamples = static_cast<int>(resamples);
    es.seed = cfg.at("seed").get<std::uint64_t>();

    SimReport sr = verify_equation(es);
    Outcome oc;
    oc.result["pass"] = sr.pass;
    oc.result["max_gap"] = sr.max_gap;
    oc.result["threshold"] = sr.threshold;
    oc.result["kernel"] = sr.kernel;
    oc.result["note"] = sr.note;
    oc.result["points"] = json::array();
    for (const auto& pt : sr.points)
        oc.result["points"].push_back(json{{"s", pt.s},
                                           {"lhs", pt.lhs},
                                           {"rhs", pt.rhs},
                                           {"gap", pt.gap},
                                           {"threshold", pt.threshold}});
    oc.pass = sr.pass;
    if (!oc.pass)
        oc.message = "equation check failed: max gap " + fmt17(sr.max_gap) +
                     " above bootstrap threshold " + fmt17(sr.threshold);
    return oc;
}

Outcome run_catalog() {
    auto entry = [](const char* id, std::initializer_list<const char*> params) {
        json e;
        e["id"] = id;
        e["params"] = json::array();
        for (const char* p : params) e["params"].push_back(p);
        return e;
    };
    Outcome oc;
    oc.result["families"] = json::array({
        json{{"id", "power_mixture"}, {"aliases", {"theorem1", "corollary1", "corollary4"}},
             {"mixing", {"T", "A", "B"}}},
        json{{"id", "pareto_mixture"}, {"aliases", {"theorem2", "theorem3", "theorem4"}},
             {"mixing", {"T", "A", "Lam", "B"}}},
        json{{"id", "zeta_mixture"}, {"aliases", {"theorem5"}}, {"mixing", {"T", "Lam"}},
             {"constants", {"zeta_a"}}},
        json{{"id", "compound_poisson"}, {"aliases", {"corollary2"}}, {"mixing", {"T"}}},
        json{{"id", "compound_exponential"}, {"aliases", {"corollary3"}}, {"mixing", {"T"}}},
    });
    oc.result["transforms"] = json::array({
        entry("degenerate", {"c"}),
        entry("exponential", {"mu"}),
        entry("gamma", {"a", "b"}),
        entry("exp_mixture", {"p", "beta"}),
        entry("two_point", {"m1", "m2"}),
        entry("sinh_t", {"t"}),
        entry("cosh_t", {"t"}),
        entry("tanh_t", {"t"}),
        entry("zeta_dist", {"a"}),
        entry("scaled_sinh", {"mu"}),
    });
    for (auto& e : oc.result["transforms"]) e["optional"] = json::array({"scale"});
    oc.result["mixing"] = json::array({
        json{{"atom", "[loc, mass] or [[loc, mass], ...]"}},
        json{{"uniform", "[lo, hi]"}},
        json{{"beta_tail", "a"}},
        json{{"exp", "mu"}},
        json("example2d"),
        json("usquared"),
    });
    oc.result["laws"] = json::array({
        entry("degenerate", {"c"}),
        entry("exponential", {"mu"}),
        entry("gamma", {"a", "b"}),
        entry("exp_mixture", {"p", "beta"}),
        entry("uniform", {"lo", "hi"}),
        entry("beta_tail", {"a", "scale"}),
        entry("two_point", {"m1", "m2"}),
        entry("example2d", {}),
        entry("usquared", {}),
        entry("exit_time_c1", {}),
        entry("length_biased", {"of"}),
        entry("equilibrium", {"of"}),
        entry("convolution", {"of"}),
    });
    oc.result["equations"] = json::array({"example1", "example2", "example3", "remark4"});
    return oc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"power-mixture functional equation toolkit"};
    app.require_subcommand(0, 1);

    std::string config_path, out_dir;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--set", sets, "override a config field, key=value with dot paths");
    app.add_option("--out", out_dir, "directory for report.json and nodes.csv");
    app.add_option("--seed", seed, "RNG seed override");

    const char* commands[] = {"solve", "residual", "simulate", "moments", "conditions", "catalog"};
    const char* blurbs[] = {
        "run the fixed-point iteration for a problem",
        "evaluate a candidate transform's functional-equation residual",
        "Monte Carlo check of a distributional equation",
        "extract mean and second moment from a transform",
        "report the existence/uniqueness conditions for a problem",
        "list family, transform, mixing and law identifiers",
    };
    for (int i = 0; i < 6; ++i) app.add_subcommand(commands[i], blurbs[i])->fallthrough();

    CLI11_PARSE(app, argc, argv);

    json cfg;
    std::string cmd, outdir;
    try {
        cfg = default_config();
        if (!config_path.empty()) merge_section(cfg, load_config_file(config_path), "");
        for (const auto& kv : sets) apply_set(cfg, kv);
        check_keys(cfg);
        for (const auto* sub : app.get_subcommands()) cfg["command"] = sub->get_name();
        if (seed) cfg["seed"] = *seed;
        if (!out_dir.empty()) cfg["out"] = out_dir;
        if (!cfg.at("command").is_string() || cfg.at("command").get<std::string>().empty())
            throw ConfigError("no command: give a subcommand or set 'command'");
        cmd = cfg.at("command").get<std::string>();
        bool known = false;
        for (const char* c : commands) known = known || cmd == c;
        if (!known) throw ConfigError("field 'command': unknown command '" + cmd + "'");
        if (!cfg.at("seed").is_number_integer())
            throw ConfigError("field 'seed': expected an integer");
        outdir = cfg.at("out").get<std::string>();
        std::filesystem::create_directories(outdir);
    } catch (const json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    }

    Outcome oc;
    try {
        if (cmd == "solve") {
            oc = run_solve(cfg, outdir);
        } else if (cmd == "residual") {
            oc = run_residual(cfg, outdir);
        } else if (cmd == "simulate") {
            oc = run_simulate(cfg);
        } else if (cmd == "moments") {
            oc = run_moments(cfg);
        } else if (cmd == "conditions") {
            oc = run_conditions(cfg);
        } else {
            oc = run_catalog();
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const domain_error& e) {
        // parameter validation inside the library: still a config problem
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "run error: %s\n", e.what());
        return 2;
    }

    int code = oc.pass ? 0 : 2;
    json report;
    report["tool"] = "powmix";
    report["version"] = POWMIX_VERSION;
    report["command"] = cmd;
    report["config"] = cfg;
    report["tolerances"] = tolerances_json(cfg);
    report["result"] = oc.result;
    report["status"] = oc.pass ? "pass" : "fail";
    report["exit_code"] = code;
    report["message"] = oc.message;

    try {
        std::ofstream out(outdir + "/report.json");
        if (!out) throw std::runtime_error("cannot write '" + outdir + "/report.json'");
        out << report.dump(2) << '\n';
    } catch (const std::exception& e) {
        std::fprintf(stderr, "run error: %s\n", e.what());
        return 2;
    }

    if (cmd == "catalog") {
        std::printf("%s\n", oc.result.dump(2).c_str());
    } else if (oc.pass) {
        std::printf("%s: pass (report: %s/report.json)\n", cmd.c_str(), outdir.c_str());
    } else {
        std::printf("%s: fail: %s\n", cmd.c_str(), oc.message.c_str());
    }
    return code;
}
