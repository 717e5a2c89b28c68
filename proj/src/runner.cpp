#include "shartree/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "shartree/report.hpp"
#include "shartree/selftest.hpp"

namespace sh {

namespace {

struct PhysicsFailure : Error {
    using Error::Error;
};

const char* error_kind(const std::exception& e)
{
    if (dynamic_cast<const ParseError*>(&e)) return "parse_error";
    if (dynamic_cast<const ContractionError*>(&e)) return "non_contraction";
    if (dynamic_cast<const WindowError*>(&e)) return "window_error";
    if (dynamic_cast<const PhysicsFailure*>(&e)) return "physics_failure";
    if (dynamic_cast<const DomainError*>(&e)) return "domain_error";
    if (dynamic_cast<const RegimeError*>(&e)) return "regime_error";
    if (dynamic_cast<const ResolutionError*>(&e)) return "resolution_error";
    if (dynamic_cast<const DivergenceError*>(&e)) return "divergence_error";
    if (dynamic_cast<const RangeError*>(&e)) return "range_error";
    return "error";
}

int exit_for(const std::exception& e)
{
    if (dynamic_cast<const ContractionError*>(&e) || dynamic_cast<const WindowError*>(&e) ||
        dynamic_cast<const PhysicsFailure*>(&e) || dynamic_cast<const DivergenceError*>(&e))
        return exit_physics;
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const RangeError*>(&e)) return exit_usage;
    return exit_physics;
}

void diagnostic(std::ostream& err, const std::string& kind, const std::string& msg, int code)
{
    json j{{"status", "error"}, {"kind", kind}, {"message", msg}, {"exit_code", code}};
    err << j.dump() << std::endl;
}

class Context {
public:
    explicit Context(const RunConfig& c) : cfg(c), grid(make_grid(c)) {}

    const RunConfig& cfg;
    RadialGrid grid;

    double k_max() const
    {
        if (cfg.k_max > 0) return cfg.k_max;
        if (cfg.n_k > 0) return cfg.n_k * pi / cfg.r_max;
        return 0.0;
    }
    TransformPtr transform() const { return build_transform(grid, cfg.op, k_max()); }
    ReducedField datum() const { return make_datum(cfg.datum, grid); }
    Potential potential() const { return make_potential(cfg.potential, grid); }

    std::string path(const std::string& suffix) const
    {
        return (std::filesystem::path(cfg.out_dir) / (cfg.prefix + "_" + suffix)).string();
    }
    std::vector<std::string> header() const
    {
        return {"seed=" + std::to_string(cfg.seed), "command=" + cfg.command, "alpha=" + cfg.op.label(),
                "datum=" + cfg.datum.str(), "potential=" + cfg.potential.str()};
    }
    json base() const
    {
        return json{{"command", cfg.command},
                    {"seed", cfg.seed},
                    {"grid", {{"r_max", cfg.r_max}, {"n", cfg.n}, {"k_max", k_max()}}},
                    {"alpha", cfg.op.label()},
                    {"lambda", cfg.lambda},
                    {"s", cfg.s},
                    {"datum", cfg.datum.str()},
                    {"potential", cfg.potential.str()}};
    }
};

void monitors_svg(const Context& ctx, const Trajectory& tr)
{
    if (!ctx.cfg.svg) return;
    Series mass{"mass"}, energy{"energy"}, hs{"h_s_norm"};
    for (auto& m : tr.monitors) {
        mass.x.push_back(m.t);
        mass.y.push_back(m.mass);
        energy.x.push_back(m.t);
        energy.y.push_back(m.energy);
        hs.x.push_back(m.t);
        hs.y.push_back(m.h_s_norm);
    }
    write_text(ctx.path("monitors.svg"), svg_plot("monitors", "t", "value", {mass, energy, hs}));
}

json hypothesis_warnings(const Potential& w, double s, std::vector<std::string>& warnings)
{
    auto rep = hypothesis_check(w, s);
    bool local = false;
    for (auto& v : rep.verdicts)
        if (v.pass && v.theorem != "1.7(i)" && v.theorem != "1.7(ii)") local = true;
    if (!local) warnings.push_back("no local well-posedness hypothesis holds at the monitored s");
    return to_json(rep);
}

int cmd_evolve(const Context& ctx, std::ostream& out)
{
    auto f = ctx.datum();
    auto w = ctx.potential();
    std::vector<std::string> warnings;
    json j = ctx.base();
    j["hypotheses"] = hypothesis_warnings(w, ctx.cfg.solver.monitor_s, warnings);
    auto tr = evolve(f, w, ctx.transform(), ctx.cfg.solver);
    write_monitors_csv(ctx.path("monitors.csv"), tr.monitors, ctx.header());
    monitors_svg(ctx, tr);
    j["termination"] = to_string(tr.termination);
    j["blowup_threshold"] = number(tr.blowup_threshold);
    j["initial"] = to_json(tr.monitors.front());
    j["final"] = to_json(tr.monitors.back());
    j["warnings"] = warnings;
    write_json(ctx.path("evolve.json"), j);
    out << "evolve: " << to_string(tr.termination) << " at t = " << tr.monitors.back().t << "\n";
    if (tr.termination != Termination::completed)
        throw PhysicsFailure("evolution stopped early: " + to_string(tr.termination));
    return exit_ok;
}

int cmd_picard(const Context& ctx, std::ostream& out)
{
    auto f = ctx.datum();
    auto w = ctx.potential();
    double T = ctx.cfg.window > 0 ? ctx.cfg.window : contraction_window(f, w);
    json j = ctx.base();
    j["window"] = T;
    std::vector<std::string> warnings;
    j["hypotheses"] = hypothesis_warnings(w, ctx.cfg.solver.monitor_s, warnings);
    j["warnings"] = warnings;
    auto res = picard_window(f, w, ctx.transform(), T, ctx.cfg.solver);
    write_monitors_csv(ctx.path("picard_monitors.csv"), res.trajectory.monitors, ctx.header());
    j["iterations"] = res.iterations;
    j["differences"] = res.differences;
    j["ratios"] = res.ratios;
    write_json(ctx.path("picard.json"), j);
    out << "picard: converged in " << res.iterations << " iterations on window " << T << "\n";
    return exit_ok;
}

int cmd_dispersive(const Context& ctx, std::ostream& out)
{
    auto f = ctx.datum();
    double t0 = ctx.cfg.t_min, t1 = ctx.cfg.t_max;
    if (t1 == 0) {
        if (ctx.cfg.datum.kind != "gaussian") throw RangeError("solver.t_min/t_max are required for non-gaussian data");
        double s2 = std::pow(ctx.cfg.datum.arg(0, 1.0), 2);
        t0 = 6 * s2;
        t1 = 24 * s2;
    }
    if (!(t0 > 0)) throw RangeError("solver.t_min must be positive");
    auto T = ctx.transform();
    DecayReport rep;
    try {
        rep = dispersive_decay_experiment(f, *T, ctx.cfg.r, log_spaced(t0, t1, ctx.cfg.decay_samples),
                                          ctx.cfg.solver.tail_limit);
    } catch (const WindowError& e) {
        std::string hint = std::string(e.what()) + "; a gaussian of width s spreads like 2t/s";
        if (ctx.cfg.datum.kind == "gaussian")
            hint += ", so grid.r_max of about " + std::to_string(static_cast<int>(std::ceil(10 * t1 / ctx.cfg.datum.arg(0, 1.0)))) +
                    " is needed";
        throw WindowError(hint);
    }
    json j = ctx.base();
    j["decay"] = to_json(rep);
    write_json(ctx.path("dispersive.json"), j);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < rep.times.size(); ++i) rows.push_back({rep.times[i], rep.norms[i]});
    write_table_csv(ctx.path("dispersive.csv"), {"t", "lr_norm"}, rows, ctx.header());
    if (ctx.cfg.svg)
        write_text(ctx.path("dispersive.svg"),
                   svg_plot("L^r decay", "t", "||u(t)||_r", {{"r", rep.times, rep.norms}}, true, true));
    out << "dispersive: slope " << rep.slope << " target " << rep.target << (rep.pass ? " pass" : " FAIL") << "\n";
    if (!rep.pass) throw PhysicsFailure("decay slope outside tolerance");
    return exit_ok;
}

int cmd_norms(const Context& ctx, std::ostream& out)
{
    auto f = ctx.datum();
    auto T = ctx.transform();
    auto st = decompose(f, ctx.cfg.lambda);
    json j = ctx.base();
    j["mass"] = number(std::pow(lp_norm(f, 2), 2));
    double r = ctx.cfg.r;
    try {
        j["lr_norm"] = {{"r", r}, {"value", number(lp_norm(f, r))}};
    } catch (const DivergenceError& e) {
        j["lr_norm"] = {{"r", r}, {"value", "divergent"}};
    }
    j["kappa"] = {st.kappa.real(), st.kappa.imag()};
    j["phi0"] = {regular_value_at_origin(st.phi).real(), regular_value_at_origin(st.phi).imag()};
    j["domain_residual"] = number(in_operator_domain(f, ctx.cfg.lambda, ctx.cfg.op).residual);
    double form = infinity;
    try {
        form = quadratic_form(st, ctx.cfg.op);
    } catch (const DomainError&) {
    }
    j["quadratic_form"] = number(form);
    reject_transition(ctx.cfg.s);
    j["perturbed_norm"] = number(perturbed_norm(f, *T, ctx.cfg.s));
    j["spectral_tail_mass"] = number(spectral_tail_mass(T->coefficients(f), *T));
    write_json(ctx.path("norms.json"), j);
    out << j.dump(2) << "\n";
    return exit_ok;
}

int cmd_stability(const Context& ctx, std::ostream& out)
{
    auto f = ctx.datum();
    auto w = ctx.potential();
    auto g = make_datum(ctx.cfg.perturb_datum, ctx.grid);
    auto v = make_potential(ctx.cfg.perturb_potential, ctx.grid);
    Perturb mode = ctx.cfg.perturb == "datum" ? Perturb::datum
                   : ctx.cfg.perturb == "potential" ? Perturb::potential
                                                     : Perturb::both;
    auto tab = stability_experiment(f, w, ctx.transform(), ctx.cfg.scales, g, v, mode, ctx.cfg.solver);
    json j = ctx.base();
    j["stability"] = to_json(tab);
    write_json(ctx.path("stability.json"), j);
    std::vector<std::vector<double>> rows;
    for (auto& r : tab.rows) rows.push_back({r.eps, r.err_l2, r.err_hs, r.ratio});
    write_table_csv(ctx.path("stability.csv"), {"eps", "err_l2", "err_hs", "ratio"}, rows, ctx.header());
    out << "stability: error/eps spread " << tab.spread << "\n";
    return exit_ok;
}

int cmd_globalize(const Context& ctx, std::ostream& out)
{
    auto f = ctx.datum();
    auto w = ctx.potential();
    auto rep = globalization_check(f, w, ctx.transform(), ctx.cfg.long_horizon, ctx.cfg.solver, ctx.cfg.mass_sweep);
    json j = ctx.base();
    j["globalization"] = to_json(rep);
    write_json(ctx.path("globalize.json"), j);
    out << "globalize: sup H1 / bound " << rep.bound_ratio << ", inequality "
        << (rep.inequality_holds ? "holds" : "violated") << "\n";
    if (rep.termination == Termination::blowup_flag) throw PhysicsFailure("blow-up flag raised on the long horizon");
    return exit_ok;
}

int cmd_hypotheses(const Context& ctx, std::ostream& out)
{
    auto w = ctx.potential();
    auto rep = hypothesis_check(w, ctx.cfg.s);
    cache_norms(w, rep);
    json j = ctx.base();
    j["report"] = to_json(rep);
    json cached = json::object();
    for (auto& [k, v] : w.cached_norms) cached[k] = number(v);
    j["cached_norms"] = cached;
    write_json(ctx.path("hypotheses.json"), j);
    for (auto& v : rep.verdicts) out << "Theorem " << v.theorem << ": " << (v.pass ? "pass" : "fail") << "\n";
    return exit_ok;
}

int cmd_selftest(const Context& ctx, std::ostream& out)
{
    auto rep = run_selftest(ctx.cfg.seed, ctx.cfg.out_dir, [&](const CriterionResult& r) {
        out << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << ": " << r.summary << std::endl;
    });
    out << rep.passed() << "/" << rep.results.size() << " criteria passed\n";
    if (rep.passed() != static_cast<int>(rep.results.size())) throw PhysicsFailure("selftest failures");
    return exit_ok;
}

} // namespace

int thread_cap()
{
    const char* env = std::getenv("SH_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end || v < 1) throw RangeError("SH_THREADS must be a positive integer");
    return static_cast<int>(v);
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try {
        validate(cfg);
        thread_cap();
        if (cfg.command.empty()) throw RangeError("no command given");
        if (cfg.command != "selftest") std::filesystem::create_directories(cfg.out_dir);
        Context ctx(cfg);
        if (cfg.command == "evolve") return cmd_evolve(ctx, out);
        if (cfg.command == "picard") return cmd_picard(ctx, out);
        if (cfg.command == "dispersive") return cmd_dispersive(ctx, out);
        if (cfg.command == "norms") return cmd_norms(ctx, out);
        if (cfg.command == "stability") return cmd_stability(ctx, out);
        if (cfg.command == "globalize") return cmd_globalize(ctx, out);
        if (cfg.command == "check-hypotheses") return cmd_hypotheses(ctx, out);
        return cmd_selftest(ctx, out);
    } catch (const std::exception& e) {
        int code = exit_for(e);
        diagnostic(err, error_kind(e), e.what(), code);
        return code;
    }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    // dotted --section.key overrides are peeled off before CLI11 sees the rest
    std::vector<std::pair<std::string, std::string>> overrides;
    std::vector<std::string> rest;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a.rfind("--", 0) == 0 && a.find('.') != std::string::npos && a.find('.') < a.find('=')) {
            auto eq = a.find('=');
            if (eq != std::string::npos) {
                overrides.emplace_back(a.substr(2, eq - 2), a.substr(eq + 1));
            } else if (i + 1 < argc) {
                overrides.emplace_back(a.substr(2), argv[++i]);
            } else {
                diagnostic(err, "usage", "missing value for " + a, exit_usage);
                return exit_usage;
            }
        } else {
            rest.push_back(a);
        }
    }

    CLI::App app{"singular-hartree: radial Hartree equation with a point interaction"};
    std::string command, config_path;
    app.add_option("command", command,
                   "evolve | picard | dispersive | norms | stability | globalize | check-hypotheses | selftest")
        ->required()
        ->check(CLI::IsMember({"evolve", "picard", "dispersive", "norms", "stability", "globalize", "check-hypotheses",
                               "selftest"}));
    app.add_option("-c,--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app.footer("Any config key can be given as --section.key VALUE, e.g. --physics.alpha 0.5");
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        diagnostic(err, "usage", e.what(), exit_usage);
        return exit_usage;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            std::stringstream ss;
            ss << in.rdbuf();
            cfg = parse_config(ss.str());
        }
        for (auto& [k, v] : overrides) set_config_value(cfg, k, v);
        cfg.command = command;
    } catch (const std::exception& e) {
        diagnostic(err, error_kind(e), e.what(), exit_usage);
        return exit_usage;
    }
    return run(cfg, out, err);
}

} // namespace sh
