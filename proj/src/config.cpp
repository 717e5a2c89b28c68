#include "shartree/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace sh {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v, int line)
{
    std::size_t used = 0;
    double x = 0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || trim(v.substr(used)) != "") throw ParseError(line, key + ": not a number: '" + v + "'");
    return x;
}

int to_int(const std::string& key, const std::string& v, int line)
{
    double x = to_double(key, v, line);
    if (x != std::floor(x) || std::abs(x) > 2e9) throw ParseError(line, key + ": not an integer: '" + v + "'");
    return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v, int line)
{
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ParseError(line, key + ": expected true or false");
}

std::vector<double> to_list(const std::string& key, const std::string& v, int line)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item), line));
    if (out.empty()) throw ParseError(line, key + ": empty list");
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> m;
        auto num = [&](const char* k, auto member) {
            m[k] = [member, k](RunConfig& c, const std::string& v, int ln) { member(c) = to_double(k, v, ln); };
        };
        auto integer = [&](const char* k, auto member) {
            m[k] = [member, k](RunConfig& c, const std::string& v, int ln) { member(c) = to_int(k, v, ln); };
        };
        m["command"] = [](RunConfig& c, const std::string& v, int) { c.command = v; };
        num("grid.r_max", [](RunConfig& c) -> double& { return c.r_max; });
        integer("grid.n", [](RunConfig& c) -> int& { return c.n; });
        num("grid.k_max", [](RunConfig& c) -> double& { return c.k_max; });
        integer("grid.n_k", [](RunConfig& c) -> int& { return c.n_k; });

        m["physics.alpha"] = [](RunConfig& c, const std::string& v, int ln) {
            if (v == "friedrichs" || v == "FRIEDRICHS" || v == "inf")
                c.op = PointInteraction::friedrichs();
            else
                c.op = PointInteraction(to_double("physics.alpha", v, ln));
        };
        num("physics.lambda", [](RunConfig& c) -> double& { return c.lambda; });
        num("physics.s", [](RunConfig& c) -> double& { return c.s; });
        num("physics.r", [](RunConfig& c) -> double& { return c.r; });
        auto spec = [&](const char* k, auto member) {
            m[k] = [member, k](RunConfig& c, const std::string& v, int ln) {
                try {
                    member(c) = parse_field_spec(v);
                } catch (const Error& e) {
                    throw ParseError(ln, std::string(k) + ": " + e.what());
                }
            };
        };
        spec("physics.potential", [](RunConfig& c) -> FieldSpec& { return c.potential; });
        spec("physics.datum", [](RunConfig& c) -> FieldSpec& { return c.datum; });
        spec("physics.perturb_datum", [](RunConfig& c) -> FieldSpec& { return c.perturb_datum; });
        spec("physics.perturb_potential", [](RunConfig& c) -> FieldSpec& { return c.perturb_potential; });

        num("solver.dt", [](RunConfig& c) -> double& { return c.solver.dt; });
        num("solver.t_end", [](RunConfig& c) -> double& { return c.solver.t_end; });
        num("solver.picard_tol", [](RunConfig& c) -> double& { return c.solver.picard_tol; });
        integer("solver.picard_max_iter", [](RunConfig& c) -> int& { return c.solver.picard_max_iter; });
        num("solver.blowup_threshold", [](RunConfig& c) -> double& { return c.solver.blowup_threshold; });
        num("solver.monitor_s", [](RunConfig& c) -> double& { return c.solver.monitor_s; });
        num("solver.monitor_r", [](RunConfig& c) -> double& { return c.solver.monitor_r; });
        integer("solver.quadrature_nodes_per_window",
                [](RunConfig& c) -> int& { return c.solver.quadrature_nodes_per_window; });
        integer("solver.state_every", [](RunConfig& c) -> int& { return c.solver.state_every; });
        num("solver.tail_limit", [](RunConfig& c) -> double& { return c.solver.tail_limit; });
        num("solver.window", [](RunConfig& c) -> double& { return c.window; });
        num("solver.long_horizon", [](RunConfig& c) -> double& { return c.long_horizon; });
        integer("solver.mass_sweep", [](RunConfig& c) -> int& { return c.mass_sweep; });
        integer("solver.decay_samples", [](RunConfig& c) -> int& { return c.decay_samples; });
        num("solver.t_min", [](RunConfig& c) -> double& { return c.t_min; });
        num("solver.t_max", [](RunConfig& c) -> double& { return c.t_max; });
        m["solver.seed"] = [](RunConfig& c, const std::string& v, int ln) {
            try {
                std::size_t used = 0;
                c.seed = std::stoull(v, &used);
                if (used != v.size()) throw std::invalid_argument(v);
            } catch (const std::exception&) {
                throw ParseError(ln, "solver.seed: expected a non-negative integer");
            }
        };
        m["solver.scales"] = [](RunConfig& c, const std::string& v, int ln) { c.scales = to_list("solver.scales", v, ln); };
        m["solver.alphas"] = [](RunConfig& c, const std::string& v, int ln) { c.alphas = to_list("solver.alphas", v, ln); };
        m["solver.perturb"] = [](RunConfig& c, const std::string& v, int ln) {
            if (v != "datum" && v != "potential" && v != "both")
                throw ParseError(ln, "solver.perturb: expected datum, potential or both");
            c.perturb = v;
        };

        m["output.dir"] = [](RunConfig& c, const std::string& v, int) { c.out_dir = v; };
        m["output.prefix"] = [](RunConfig& c, const std::string& v, int) { c.prefix = v; };
        m["output.svg"] = [](RunConfig& c, const std::string& v, int ln) { c.svg = to_bool("output.svg", v, ln); };
        return m;
    }();
    return table;
}

} // namespace

std::string FieldSpec::str() const
{
    if (kind == "file") return "file(" + path + ")";
    std::ostringstream os;
    os << kind << "(";
    for (std::size_t i = 0; i < args.size(); ++i) os << (i ? ", " : "") << args[i];
    os << ")";
    return os.str();
}

FieldSpec parse_field_spec(const std::string& text)
{
    FieldSpec spec;
    std::string t = trim(text);
    auto open = t.find('(');
    spec.kind = trim(t.substr(0, open));
    std::string inner;
    if (open != std::string::npos) {
        if (t.back() != ')') throw RangeError("unbalanced parentheses in '" + t + "'");
        inner = trim(t.substr(open + 1, t.size() - open - 2));
    }
    static const std::map<std::string, std::pair<int, int>> arity{
        {"gaussian", {0, 2}}, {"green", {0, 2}},         {"ball_indicator", {0, 2}},
        {"inverse_power", {0, 2}}, {"file", {1, 1}}, {"zero", {0, 0}}};
    auto it = arity.find(spec.kind);
    if (it == arity.end()) throw RangeError("unknown field kind '" + spec.kind + "'");
    if (spec.kind == "file") {
        if (inner.empty()) throw RangeError("file(...) needs a path");
        spec.path = inner;
        return spec;
    }
    if (!inner.empty()) spec.args = to_list(spec.kind, inner, 0);
    if (static_cast<int>(spec.args.size()) > it->second.second) throw RangeError("too many arguments for " + spec.kind);
    for (double a : spec.args)
        if (!std::isfinite(a)) throw RangeError(spec.kind + " arguments must be finite");
    if (spec.kind != "zero" && !spec.args.empty() && !(spec.args[0] > 0))
        throw RangeError(spec.kind + ": first parameter must be positive");
    if (spec.kind == "inverse_power" && spec.args.size() > 1 && !(spec.args[1] > 0))
        throw RangeError("inverse_power: cutoff must be positive");
    return spec;
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value, int line)
{
    auto& table = setters();
    auto it = table.find(key);
    if (it == table.end()) throw ParseError(line, "unknown key '" + key + "'");
    it->second(cfg, trim(value), line);
}

RunConfig parse_config(const std::string& text)
{
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto hash = raw.find('#');
        std::string s = trim(raw.substr(0, hash));
        if (s.empty()) continue;
        auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
        std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
        if (key.empty() || value.empty()) throw ParseError(line, "expected 'key = value'");
        set_config_value(cfg, key, value, line);
    }
    validate(cfg);
    return cfg;
}

void validate(const RunConfig& cfg)
{
    static const std::vector<std::string> commands{"evolve",    "picard",   "dispersive",       "norms",
                                                   "stability", "globalize", "check-hypotheses", "selftest"};
    if (!cfg.command.empty() && std::find(commands.begin(), commands.end(), cfg.command) == commands.end())
        throw RangeError("command: unknown command '" + cfg.command + "'");
    if (!(cfg.r_max > 0)) throw RangeError("grid.r_max must be positive");
    if (cfg.n < 16 || cfg.n % 2) throw RangeError("grid.n must be even and at least 16");
    if (cfg.k_max < 0) throw RangeError("grid.k_max must be non-negative");
    if (cfg.n_k < 0 || cfg.n_k > cfg.n) throw RangeError("grid.n_k must lie in [0, grid.n]");
    if (!(cfg.lambda > 0)) throw RangeError("physics.lambda must be positive");
    if (cfg.s == 0.5 || cfg.s == 1.5) throw RangeError("physics.s: 1/2 and 3/2 are transition regularities");
    if (cfg.s < -2 || cfg.s > 2) throw RangeError("physics.s must lie in [-2, 2]");
    if (!(cfg.solver.dt > 0)) throw RangeError("solver.dt must be positive");
    if (!(cfg.solver.picard_tol > 0)) throw RangeError("solver.picard_tol must be positive");
    if (cfg.solver.picard_max_iter < 1) throw RangeError("solver.picard_max_iter must be positive");
    if (cfg.solver.blowup_threshold < 0) throw RangeError("solver.blowup_threshold must be non-negative");
    if (cfg.solver.monitor_s == 0.5 || cfg.solver.monitor_s == 1.5)
        throw RangeError("solver.monitor_s: 1/2 and 3/2 are transition regularities");
    if (!(cfg.solver.tail_limit > 0)) throw RangeError("solver.tail_limit must be positive");
    if (cfg.window < 0) throw RangeError("solver.window must be non-negative");
    if (cfg.decay_samples < 8) throw RangeError("solver.decay_samples must be at least 8");
    if (cfg.t_min < 0 || cfg.t_max < 0 || (cfg.t_max > 0 && !(cfg.t_max > cfg.t_min)))
        throw RangeError("solver.t_min/t_max must satisfy 0 <= t_min < t_max");
    if (cfg.command == "dispersive" && !(cfg.r >= 2 && cfg.r < 3)) throw RangeError("physics.r must lie in [2, 3)");
    bool nonlinear = cfg.command == "evolve" || cfg.command == "picard" || cfg.command == "stability" ||
                     cfg.command == "globalize";
    if (nonlinear && !cfg.op.is_friedrichs() && cfg.op.alpha() < 0)
        throw RangeError("physics.alpha must be >= 0 for " + cfg.command);
    for (auto* f : {&cfg.datum, &cfg.potential, &cfg.perturb_datum, &cfg.perturb_potential})
        if (f->kind == "file" && !std::filesystem::exists(f->path)) throw RangeError("no such file: " + f->path);
}

RadialGrid make_grid(const RunConfig& cfg) { return RadialGrid(cfg.r_max, cfg.n); }

std::vector<std::pair<double, cplx>> read_field_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw RangeError("cannot open " + path);
    std::vector<std::pair<double, cplx>> rows;
    std::string line;
    bool header = false;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "r,re,im") throw ParseError(ln, path + ": expected header r,re,im");
            header = true;
            continue;
        }
        auto v = to_list(path, line, ln);
        if (v.size() != 3) throw ParseError(ln, path + ": expected three columns");
        if (!rows.empty() && !(v[0] > rows.back().first)) throw ParseError(ln, path + ": r must increase");
        rows.emplace_back(v[0], cplx(v[1], v[2]));
    }
    if (rows.size() < 2) throw RangeError(path + ": need at least two rows");
    return rows;
}

namespace {

// piecewise linear, zero outside the sampled range
cplx interpolate(const std::vector<std::pair<double, cplx>>& rows, double r)
{
    if (r < rows.front().first || r > rows.back().first) return 0.0;
    auto it = std::lower_bound(rows.begin(), rows.end(), r, [](const auto& a, double x) { return a.first < x; });
    if (it == rows.begin()) return it->second;
    auto prev = it - 1;
    double t = (r - prev->first) / (it->first - prev->first);
    return (1 - t) * prev->second + t * it->second;
}

} // namespace

ReducedField make_datum(const FieldSpec& spec, const RadialGrid& g)
{
    if (spec.kind == "zero") return ReducedField(g);
    if (spec.kind == "gaussian") {
        double sig = spec.arg(0, 1.0), a = spec.arg(1, 1.0);
        return sample_reduced(g, [&](double r) { return a * r * std::exp(-r * r / (2 * sig * sig)); });
    }
    if (spec.kind == "green") {
        double lam = spec.arg(0, 1.0), a = spec.arg(1, 1.0);
        return sample_reduced(g, [&](double r) { return a * green_reduced(lam, r); });
    }
    if (spec.kind == "ball_indicator") {
        double R = spec.arg(0, 1.0), a = spec.arg(1, 1.0);
        return sample_reduced(g, [&](double r) { return r <= R ? a * r : 0.0; });
    }
    if (spec.kind == "inverse_power") {
        double gam = spec.arg(0, 1.0), cut = spec.arg(1, 1.0);
        if (gam >= 1.5) throw DomainError("inverse_power datum needs gamma < 3/2 to be square integrable");
        return sample_reduced(g, [&](double r) { return r <= cut ? std::pow(r, 1 - gam) : 0.0; });
    }
    auto rows = read_field_csv(spec.path);
    return sample_reduced(g, [&](double r) { return interpolate(rows, r); });
}

Potential make_potential(const FieldSpec& spec, const RadialGrid& g)
{
    if (spec.kind == "zero") return Potential(PlainRadialField(g));
    if (spec.kind == "gaussian") {
        double sig = spec.arg(0, 1.0), a = spec.arg(1, 1.0);
        return Potential(sample_plain(g, [&](double r) { return a * std::exp(-r * r / (2 * sig * sig)); }));
    }
    if (spec.kind == "green") {
        double lam = spec.arg(0, 1.0), a = spec.arg(1, 1.0);
        auto w = sample_plain(g, [&](double r) { return r > 0 ? a * evaluate_green(lam, r) : 0.0; });
        w[0] = w[1];
        return Potential(w, 1.0);
    }
    if (spec.kind == "ball_indicator") {
        double R = spec.arg(0, 1.0), a = spec.arg(1, 1.0);
        return Potential(sample_plain(g, [&](double r) { return r <= R ? a : 0.0; }));
    }
    if (spec.kind == "inverse_power") {
        double gam = spec.arg(0, 1.0), cut = spec.arg(1, 0.5 * g.r_max);
        auto w = sample_plain(g, [&](double r) { return r > 0 && r <= cut ? std::pow(r, -gam) : 0.0; });
        w[0] = w[1]; // finite surrogate at the singular node
        return Potential(w, gam);
    }
    auto rows = read_field_csv(spec.path);
    PlainRadialField w(g);
    for (int j = 0; j <= g.n; ++j) w[j] = interpolate(rows, g.r(j)).real();
    return Potential(w);
}

} // namespace sh
