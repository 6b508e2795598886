#include "experiments.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "metastab/arrhenius.hpp"
#include "metastab/determinants.hpp"
#include "metastab/errors.hpp"
#include "metastab/io.hpp"
#include "metastab/kramers.hpp"
#include "metastab/ldp.hpp"
#include "metastab/potential_theory.hpp"
#include "metastab/potentials.hpp"
#include "metastab/randomwalk.hpp"
#include "metastab/sde.hpp"
#include "metastab/spde.hpp"
#include "metastab/stats.hpp"
#include "metastab/version.hpp"

namespace metastab::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const std::vector<std::pair<Experiment, std::string_view>>& names() {
    static const std::vector<std::pair<Experiment, std::string_view>> table = {
        {Experiment::sde_hitting, "sde-hitting"},
        {Experiment::spde_hitting, "spde-hitting"},
        {Experiment::ou_check, "ou-check"},
        {Experiment::potential_theory, "potential-theory"},
        {Experiment::determinant, "determinant"},
        {Experiment::kramers_predict, "kramers-predict"},
        {Experiment::rate_functional, "rate-functional"},
        {Experiment::randomwalk, "randomwalk"},
        {Experiment::arrhenius_sweep, "arrhenius-sweep"},
    };
    return table;
}

ParamSpec req(std::string key, ParamType t, std::string help) { return {std::move(key), t, true, nullptr, std::move(help)}; }
ParamSpec opt(std::string key, ParamType t, json def, std::string help) {
    return {std::move(key), t, false, std::move(def), std::move(help)};
}

ParamSpec seed_spec() { return opt("seed", ParamType::integer, 0, "base seed of the per-replica streams"); }
ParamSpec threads_spec() { return opt("threads", ParamType::integer, 1, "worker threads (results do not depend on it)"); }

}  // namespace

std::string_view experiment_name(Experiment e) {
    for (const auto& [k, v] : names()) {
        if (k == e) return v;
    }
    return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
    for (const auto& [k, v] : names()) {
        if (v == name) return k;
    }
    return std::nullopt;
}

const std::vector<Experiment>& all_experiments() {
    static const std::vector<Experiment> all = [] {
        std::vector<Experiment> v;
        for (const auto& [k, _] : names()) v.push_back(k);
        return v;
    }();
    return all;
}

const std::vector<ParamSpec>& parameter_specs(Experiment e) {
    using T = ParamType;
    static const std::vector<ParamSpec> sde = {
        req("eps", T::number, "noise intensity"),
        req("n", T::integer, "number of replicas"),
        opt("dt", T::number, 1e-3, "time step"),
        opt("x0", T::number, -1.0, "initial point"),
        opt("target", T::number, 1.0, "centre of the target ball"),
        opt("delta", T::number, 0.2, "radius of the target ball"),
        opt("t_max", T::number, 0.0, "censoring horizon (0: 1e6 dt)"),
        seed_spec(),
        threads_spec(),
    };
    static const std::vector<ParamSpec> spde = {
        opt("d", T::integer, 1, "space dimension (1 or 2)"),
        opt("L", T::number, 2.0, "torus side length"),
        opt("N", T::integer, 16, "Galerkin cutoff"),
        req("eps", T::number, "noise intensity"),
        req("n", T::integer, "number of replicas"),
        opt("dt", T::number, 1e-3, "time step"),
        opt("delta", T::number, 0.3, "radius of the target ball"),
        opt("norm", T::string, "linf", "target norm: linf or hs"),
        opt("s", T::number, -0.5, "Sobolev exponent for norm=hs"),
        opt("renormalize", T::boolean, nullptr, "Wick counterterm (default: on iff d = 2)"),
        opt("t_max", T::number, 0.0, "censoring horizon (0: 1e6 dt)"),
        opt("snapshot_every", T::integer, 0, "steps between snapshots of replica 0 (0: off)"),
        opt("snapshot_steps", T::integer, 0, "length of the snapshot trajectory in steps"),
        seed_spec(),
        threads_spec(),
    };
    static const std::vector<ParamSpec> ou = {
        opt("eps", T::number, 0.1, "noise intensity"),
        opt("t", T::number, 1.0, "observation time"),
        opt("dt", T::number, 1e-3, "time step"),
        opt("x0", T::number, 1.0, "initial point"),
        opt("n", T::integer, 100000, "number of paths"),
        opt("grid_points", T::integer, 41, "detailed-balance grid size"),
        opt("grid_half_width", T::number, 2.0, "detailed-balance grid covers [-w, w]"),
        seed_spec(),
        threads_spec(),
    };
    static const std::vector<ParamSpec> pt = {
        req("eps", T::number, "noise intensity"),
        opt("a", T::number, -2.0, "left end of the domain"),
        opt("b", T::number, 2.0, "right end of the domain"),
        opt("m", T::integer, 3999, "interior grid nodes"),
        opt("A", T::number_list, json::array({-1.05, -0.95}), "set A as lo,hi"),
        opt("B", T::number_list, json::array({0.8, 1.2}), "set B as lo,hi"),
        opt("x_start", T::number, -1.0, "starting point for the mean hitting time"),
    };
    static const std::vector<ParamSpec> det = {
        req("d", T::integer, "space dimension (1 or 2)"),
        req("L", T::number, "torus side length"),
        req("N", T::integer, "cutoff"),
    };
    static const std::vector<ParamSpec> kramers = {
        req("system", T::string, "quartic, ac1d or ac2d"),
        opt("L", T::number, 2.0, "torus side length"),
        opt("N", T::integer, 64, "cutoff for ac2d"),
        opt("eps", T::number_list, json::array(), "noise levels to evaluate"),
    };
    static const std::vector<ParamSpec> rate = {
        opt("system", T::string, "quartic", "quartic or ac1d"),
        opt("path", T::string, "uphill", "downhill, uphill or file"),
        opt("input", T::string, "", "path file (CSV for quartic, JSON lines for ac1d)"),
        opt("dt", T::number, 1e-3, "time step of generated paths"),
        opt("t_end", T::number, 30.0, "duration of generated paths"),
        opt("L", T::number, 2.0, "torus side length (ac1d)"),
        opt("N", T::integer, 16, "cutoff (ac1d)"),
    };
    static const std::vector<ParamSpec> walk = {
        opt("n", T::integer, 10000, "diffusive scaling parameter"),
        opt("walks", T::integer, 10000, "number of walks"),
        opt("s", T::number, 0.25, "earlier time"),
        opt("t", T::number, 1.0, "later time"),
        seed_spec(),
        threads_spec(),
    };
    static const std::vector<ParamSpec> sweep = {
        opt("system", T::string, "quartic", "quartic or ac1d"),
        req("eps", T::number_list, "noise levels"),
        req("n", T::integer, "replicas per noise level"),
        opt("dt", T::number, 1e-3, "time step"),
        opt("delta", T::number, nullptr, "target radius (default 0.2 quartic, 0.3 ac1d)"),
        opt("L", T::number, 2.0, "torus side length (ac1d)"),
        opt("N", T::integer, 16, "cutoff (ac1d)"),
        opt("t_max", T::number, 0.0, "censoring horizon (0: 1e6 dt)"),
        seed_spec(),
        threads_spec(),
    };
    switch (e) {
        case Experiment::sde_hitting: return sde;
        case Experiment::spde_hitting: return spde;
        case Experiment::ou_check: return ou;
        case Experiment::potential_theory: return pt;
        case Experiment::determinant: return det;
        case Experiment::kramers_predict: return kramers;
        case Experiment::rate_functional: return rate;
        case Experiment::randomwalk: return walk;
        case Experiment::arrhenius_sweep: return sweep;
    }
    return det;
}

namespace {

bool type_matches(ParamType t, const json& v) {
    switch (t) {
        case ParamType::number: return v.is_number();
        case ParamType::integer: return v.is_number_integer();
        case ParamType::boolean: return v.is_boolean();
        case ParamType::string: return v.is_string();
        case ParamType::number_list:
            if (!v.is_array()) return false;
            for (const auto& x : v) {
                if (!x.is_number()) return false;
            }
            return true;
    }
    return false;
}

}  // namespace

json resolve_parameters(Experiment e, const json& given) {
    if (!given.is_object()) throw ValidationError("parameters must be a JSON object");
    const auto& specs = parameter_specs(e);
    for (const auto& [key, _] : given.items()) {
        const bool known = std::any_of(specs.begin(), specs.end(), [&](const ParamSpec& s) { return s.key == key; });
        if (!known) throw ValidationError("unknown parameter '" + key + "'");
    }
    json resolved = json::object();
    for (const auto& s : specs) {
        if (given.contains(s.key) && !given.at(s.key).is_null()) {
            const auto& v = given.at(s.key);
            if (!type_matches(s.type, v)) throw ValidationError("parameter '" + s.key + "' has the wrong type");
            resolved[s.key] = s.type == ParamType::number ? json(v.get<double>()) : v;
        } else if (s.required) {
            throw ValidationError("missing required parameter '" + s.key + "'");
        } else {
            resolved[s.key] = s.default_value;
        }
    }
    return resolved;
}

json parse_flag_value(const ParamSpec& spec, const std::string& text) {
    auto number = [&](const std::string& s) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw ValidationError("parameter '" + spec.key + "' expects a number, got '" + s + "'");
        }
        if (pos != s.size()) throw ValidationError("parameter '" + spec.key + "' expects a number, got '" + s + "'");
        return v;
    };
    switch (spec.type) {
        case ParamType::number: return number(text);
        case ParamType::integer: {
            std::size_t pos = 0;
            long long v = 0;
            try {
                v = std::stoll(text, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != text.size() || text.empty()) {
                throw ValidationError("parameter '" + spec.key + "' expects an integer, got '" + text + "'");
            }
            return v;
        }
        case ParamType::boolean:
            if (text == "true") return true;
            if (text == "false") return false;
            throw ValidationError("parameter '" + spec.key + "' expects true or false");
        case ParamType::string: return text;
        case ParamType::number_list: {
            json arr = json::array();
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) arr.push_back(number(item));
            return arr;
        }
    }
    return nullptr;
}

std::string manifest_hash(Experiment e, const json& resolved) {
    json canonical;
    canonical["experiment"] = std::string(experiment_name(e));
    json params = resolved;
    params.erase("threads");
    canonical["parameters"] = params;
    // FNV-1a, 64 bit.
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical.dump()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

namespace {

using io::format_double;

/// Files produced by an experiment, written only after it completes.
struct Artifacts {
    std::vector<std::pair<std::string, std::string>> files;  // relative path, contents
    json summary = json::object();
};

class Csv {
public:
    Csv(const std::string& hash, std::initializer_list<std::string_view> columns) {
        os_ << "# manifest-hash: " << hash << '\n';
        bool first = true;
        for (auto c : columns) {
            os_ << (first ? "" : ",") << c;
            first = false;
        }
        os_ << '\n';
    }
    template <typename... Cells>
    void row(const Cells&... cells) {
        bool first = true;
        ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
        os_ << '\n';
    }
    std::string str() const { return os_.str(); }

private:
    static std::string cell(double v) { return format_double(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(long v) { return std::to_string(v); }
    static std::string cell(long long v) { return std::to_string(v); }
    static std::string cell(std::size_t v) { return std::to_string(v); }
    static std::string cell(const std::string& v) { return v; }
    static std::string cell(const char* v) { return v; }
    static std::string cell(bool v) { return v ? "true" : "false"; }
    std::ostringstream os_;
};

void require(bool cond, const std::string& message) {
    if (!cond) throw ValidationError(message);
}

double num(const json& p, const char* key) { return p.at(key).get<double>(); }
long long integer(const json& p, const char* key) { return p.at(key).get<long long>(); }
std::string str(const json& p, const char* key) { return p.at(key).get<std::string>(); }
std::vector<double> list(const json& p, const char* key) { return p.at(key).get<std::vector<double>>(); }
unsigned threads_of(const json& p) { return static_cast<unsigned>(integer(p, "threads")); }
std::uint64_t seed_of(const json& p) { return static_cast<std::uint64_t>(integer(p, "seed")); }

void validate_common(const json& p) {
    if (p.contains("threads")) require(integer(p, "threads") >= 1, "threads must be >= 1");
    if (p.contains("seed")) require(integer(p, "seed") >= 0, "seed must be >= 0");
}

Interval interval_of(const json& p, const char* key) {
    const auto v = list(p, key);
    require(v.size() == 2 && v[0] <= v[1], std::string(key) + " must be lo,hi with lo <= hi");
    return {v[0], v[1]};
}

void append_samples(Artifacts& out, const std::string& name, const std::string& hash, const HittingTimeBatch& batch) {
    Csv csv(hash, {"replica", "tau", "censored"});
    for (std::size_t i = 0; i < batch.n_attempted; ++i) csv.row(i, batch.all_times[i], static_cast<bool>(batch.censored[i]));
    out.files.emplace_back(name, csv.str());
}

// ---------------------------------------------------------------------------

SdeRun quartic_run(double eps, double dt, double x0, double t_max, std::uint64_t seed) {
    return SdeRun{quartic_double_well(), eps, dt, Vector::Constant(1, x0), seed, t_max};
}

Artifacts run_sde_hitting(const json& p, const std::string& hash) {
    const double eps = num(p, "eps"), dt = num(p, "dt"), delta = num(p, "delta");
    const long long n = integer(p, "n");
    require(eps > 0.0, "eps must be positive");
    require(dt > 0.0, "dt must be positive");
    require(delta > 0.0, "delta must be positive");
    require(n >= 1, "n must be >= 1");
    require(num(p, "t_max") >= 0.0, "t_max must be >= 0");
    const auto run = quartic_run(eps, dt, num(p, "x0"), num(p, "t_max"), seed_of(p));
    const auto batch = sample_hitting_times(run, Vector::Constant(1, num(p, "target")), delta,
                                            static_cast<std::size_t>(n), threads_of(p));
    const auto pot = quartic_double_well();
    const auto pred = ek_finite(find_critical_point(pot, Vector::Constant(1, -0.9)),
                                find_critical_point(pot, Vector::Constant(1, 0.1)), pot);
    Artifacts out;
    Csv csv(hash, {"eps", "n_attempted", "n_censored", "mean", "stderr", "kramers_prediction"});
    csv.row(eps, batch.n_attempted, batch.n_censored, batch.mean, batch.stderr_mean, pred.predict(eps));
    out.files.emplace_back("results.csv", csv.str());
    append_samples(out, "samples.csv", hash, batch);
    return out;
}

SpdeRun spde_run_from(const json& p, double eps) {
    const int d = static_cast<int>(integer(p, "d"));
    const double length = num(p, "L");
    const long long cutoff = integer(p, "N");
    require(d == 1 || d == 2, "d must be 1 or 2");
    require(length > 0.0 && length < kTwoPi, "L must satisfy 0 < L < 2 pi");
    require(cutoff >= 0 && cutoff <= 4096, "N must lie in [0, 4096]");
    require(eps > 0.0, "eps must be positive");
    const double dt = num(p, "dt");
    require(dt > 0.0 && dt < 1.0, "dt must lie in (0, 1)");
    require(num(p, "t_max") >= 0.0, "t_max must be >= 0");
    SpdeRun run;
    run.field0 = SpectralField::constant(d, length, static_cast<int>(cutoff), -1.0);
    run.epsilon = eps;
    run.dt = dt;
    run.t_max = num(p, "t_max");
    run.seed = seed_of(p);
    run.renormalize = p.contains("renormalize") && !p.at("renormalize").is_null() ? p.at("renormalize").get<bool>()
                                                                                  : d == 2;
    return run;
}

HittingTarget target_from(const json& p, double delta) {
    HittingTarget t;
    t.value = 1.0;
    t.delta = delta;
    require(delta > 0.0, "delta must be positive");
    const std::string norm = p.contains("norm") ? str(p, "norm") : "linf";
    if (norm == "linf") {
        t.norm = HittingNorm::linf;
    } else if (norm == "hs") {
        t.norm = HittingNorm::sobolev;
        t.sobolev_s = num(p, "s");
        require(t.sobolev_s < 0.0, "s must be negative for norm=hs");
    } else {
        throw ValidationError("norm must be linf or hs");
    }
    return t;
}

double allen_cahn_prediction(const SpdeRun& run, double eps) {
    const auto& f = run.field0;
    return f.dim() == 1 ? ek_allen_cahn_1d(f.length()).predict(eps)
                        : ek_allen_cahn_2d(f.length(), std::max(f.cutoff(), 1)).predict(eps);
}

Artifacts run_spde_hitting(const json& p, const std::string& hash) {
    const double eps = num(p, "eps");
    const long long n = integer(p, "n");
    require(n >= 1, "n must be >= 1");
    const auto run = spde_run_from(p, eps);
    const auto target = target_from(p, num(p, "delta"));
    const long long every = integer(p, "snapshot_every"), steps = integer(p, "snapshot_steps");
    require(every >= 0 && steps >= 0, "snapshot parameters must be >= 0");

    const auto batch = sample_spde_hitting_times(run, target, static_cast<std::size_t>(n), threads_of(p));
    Artifacts out;
    Csv csv(hash, {"d", "L", "N", "eps", "n_attempted", "n_censored", "mean", "stderr", "ek_prediction"});
    csv.row(run.field0.dim(), run.field0.length(), run.field0.cutoff(), eps, batch.n_attempted, batch.n_censored,
            batch.mean, batch.stderr_mean, allen_cahn_prediction(run, eps));
    out.files.emplace_back("results.csv", csv.str());
    append_samples(out, "samples.csv", hash, batch);

    if (every > 0 && steps > 0) {
        const auto tr = simulate_spde(run, static_cast<std::size_t>(steps), static_cast<std::size_t>(every), 0);
        AllenCahnEnergy energy{run.field0.dim(), run.field0.length(), run.field0.cutoff(), std::nullopt, 1};
        std::ostringstream summary;
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            std::ostringstream snap;
            io::write_snapshot_csv(snap, tr.times[i], tr.fields[i], tr.fields[i].dealiased_grid());
            std::ostringstream name;
            name << "snapshots/snapshot_" << std::setw(6) << std::setfill('0') << i << ".csv";
            out.files.emplace_back(name.str(), snap.str());
            io::write_summary_jsonl(summary, tr.times[i], tr.fields[i], ac_energy(energy, tr.fields[i]));
        }
        out.files.emplace_back("snapshots/trajectory.jsonl", summary.str());
    }
    return out;
}

Artifacts run_ou_check(const json& p, const std::string& hash) {
    const double eps = num(p, "eps"), t = num(p, "t"), dt = num(p, "dt"), x0 = num(p, "x0");
    const long long n = integer(p, "n"), gp = integer(p, "grid_points");
    const double w = num(p, "grid_half_width");
    require(eps > 0.0 && t > 0.0 && dt > 0.0, "eps, t and dt must be positive");
    require(n >= 2, "n must be >= 2");
    require(gp >= 2 && w > 0.0, "detailed-balance grid needs >= 2 points and positive width");
    SdeRun run{quadratic(Vector::Ones(1)), eps, dt, Vector::Constant(1, x0), seed_of(p), 0.0};
    const auto ends = sample_endpoints(run, t, static_cast<std::size_t>(n), threads_of(p));
    std::vector<double> xs(ends.size()), sq(ends.size());
    for (std::size_t i = 0; i < ends.size(); ++i) xs[i] = ends[i](0);
    const auto s = stats::summarize(xs);
    const double exact_mean = x0 * std::exp(-t);
    const double exact_var = eps * -std::expm1(-2.0 * t);
    std::vector<double> grid;
    for (long long i = 0; i < gp; ++i) grid.push_back(-w + 2.0 * w * static_cast<double>(i) / static_cast<double>(gp - 1));
    const double balance = detailed_balance_residual(t, eps, grid);

    Artifacts out;
    Csv csv(hash, {"quantity", "empirical", "exact", "stderr", "z_score"});
    csv.row("mean", s.mean, exact_mean, s.stderr_mean, (s.mean - exact_mean) / s.stderr_mean);
    csv.row("variance", s.variance, exact_var, s.stderr_variance, (s.variance - exact_var) / s.stderr_variance);
    csv.row("detailed_balance_residual", balance, 0.0, 0.0, 0.0);
    out.files.emplace_back("results.csv", csv.str());
    return out;
}

Artifacts run_potential_theory(const json& p, const std::string& hash) {
    const double eps = num(p, "eps");
    require(eps > 0.0, "eps must be positive");
    const long long m = integer(p, "m");
    require(m >= 3, "m must be >= 3");
    require(num(p, "b") > num(p, "a"), "need b > a");
    const Grid1D grid(num(p, "a"), num(p, "b"), static_cast<int>(m));
    const auto a_set = interval_of(p, "A");
    const auto b_set = interval_of(p, "B");
    const double x_start = num(p, "x_start");
    require(x_start >= grid.a && x_start <= grid.b, "x_start must lie in [a, b]");
    const auto v = quartic_double_well();
    const auto w = solve_poisson(grid, v, eps, b_set);
    const auto committor = solve_committor(grid, v, eps, a_set, b_set);
    const double cap = capacity_dirichlet(grid, v, eps, committor);
    const auto magic = magic_identity(grid, v, eps, a_set, b_set, x_start);
    // 1D asymptotics with V''(0) = -1 and V''(-1) = 2, V(0) = 0, V(-1) = -1/4.
    const double cap_asym = (1.0 / kTwoPi) * std::sqrt(kTwoPi * eps / 1.0);
    const double laplace_asym = std::sqrt(kTwoPi * eps / 2.0) * std::exp(0.25 / eps);
    const double ek = ek_finite(find_critical_point(v, Vector::Constant(1, -0.9)),
                                find_critical_point(v, Vector::Constant(1, 0.1)), v)
                          .predict(eps);

    Artifacts out;
    Csv csv(hash, {"quantity", "value"});
    csv.row("mean_hitting_time", interpolate(grid, w, x_start));
    csv.row("kramers_prediction", ek);
    csv.row("capacity", cap);
    csv.row("capacity_asymptotic", cap_asym);
    csv.row("magic_lhs", magic.lhs);
    csv.row("magic_rhs", magic.rhs);
    csv.row("magic_residual", magic.residual);
    csv.row("laplace_integral", magic.integral);
    csv.row("laplace_asymptotic", laplace_asym);
    out.files.emplace_back("results.csv", csv.str());
    return out;
}

Artifacts run_determinant(const json& p, const std::string& hash) {
    const auto d = integer(p, "d");
    const double length = num(p, "L");
    const auto cutoff = integer(p, "N");
    require(d == 1 || d == 2, "d must be 1 or 2");
    require(length > 0.0 && length < kTwoPi, "L must satisfy 0 < L < 2 pi");
    require(cutoff >= 0 && cutoff <= (d == 1 ? 10'000'000 : 4096), "N out of range");
    const int n = static_cast<int>(cutoff);
    Artifacts out;
    Csv csv(hash, {"d", "L", "N", "kind", "value", "log_abs", "tail_estimate", "closed_form", "relative_error",
                   "counterterm"});
    const double ct = counterterm_trace(length, n, static_cast<int>(d));
    if (d == 1) {
        const auto det = fredholm_det_1d(length, n);
        const double closed = fredholm_closed_form(length);
        csv.row(d, length, n, "fredholm", det.value, det.log.log_abs, det.tail_estimate, closed,
                std::abs(det.value - closed) / std::abs(closed), ct);
        const auto det2 = carleman_det(1, length, n);
        csv.row(d, length, n, "carleman_fredholm", det2.value, det2.log.log_abs, det2.tail_estimate, "nan", "nan", ct);
    } else {
        const auto det2 = carleman_det_2d(length, n);
        csv.row(d, length, n, "carleman_fredholm", det2.value, det2.log.log_abs, det2.tail_estimate, "nan", "nan", ct);
        const auto det = fredholm_det(2, length, n);
        csv.row(d, length, n, "fredholm", det.value, det.log.log_abs, det.tail_estimate, "nan", "nan", ct);
    }
    out.files.emplace_back("results.csv", csv.str());
    return out;
}

Artifacts run_kramers_predict(const json& p, const std::string& hash) {
    const std::string system = str(p, "system");
    const auto eps_list = list(p, "eps");
    for (double e : eps_list) require(e > 0.0, "eps values must be positive");
    RatePrediction pred;
    if (system == "quartic") {
        const auto v = quartic_double_well();
        pred = ek_finite(find_critical_point(v, Vector::Constant(1, -0.9)), find_critical_point(v, Vector::Constant(1, 0.1)), v);
    } else if (system == "ac1d" || system == "ac2d") {
        const double length = num(p, "L");
        require(length > 0.0 && length < kTwoPi, "L must satisfy 0 < L < 2 pi");
        if (system == "ac1d") {
            pred = ek_allen_cahn_1d(length);
        } else {
            const auto cutoff = integer(p, "N");
            require(cutoff >= 0 && cutoff <= 4096, "N must lie in [0, 4096]");
            pred = ek_allen_cahn_2d(length, static_cast<int>(cutoff));
        }
    } else {
        throw ValidationError("system must be quartic, ac1d or ac2d");
    }
    Artifacts out;
    Csv csv(hash, {"system", "barrier", "prefactor", "lambda_minus", "determinant_factor", "eps", "prediction"});
    if (eps_list.empty()) {
        csv.row(system, pred.barrier, pred.prefactor, pred.lambda_minus, pred.determinant_factor, "nan", "nan");
    }
    for (double e : eps_list) {
        csv.row(system, pred.barrier, pred.prefactor, pred.lambda_minus, pred.determinant_factor, e, pred.predict(e));
    }
    out.files.emplace_back("results.csv", csv.str());
    return out;
}

Artifacts run_rate_functional(const json& p, const std::string& hash) {
    const std::string system = str(p, "system");
    const std::string kind = str(p, "path");
    const double dt = num(p, "dt"), t_end = num(p, "t_end");
    require(kind == "downhill" || kind == "uphill" || kind == "file", "path must be downhill, uphill or file");
    require(dt > 0.0 && t_end > dt, "need dt > 0 and t_end > dt");
    double value = 0.0, expected = 0.0;
    std::string expected_text = "nan";
    if (system == "quartic") {
        const auto v = quartic_double_well();
        EuclideanPath path;
        if (kind == "file") {
            const auto file = str(p, "input");
            std::ifstream is(file);
            require(static_cast<bool>(is), "cannot open input path file '" + file + "'");
            path = io::read_path_csv(is);
        } else {
            SdeRun run{v, 0.0, dt, Vector::Constant(1, -1e-6), 0, 0.0};
            const auto tr = simulate_trajectory(run, static_cast<std::size_t>(std::llround(t_end / dt)));
            path.times = tr.times;
            path.points = tr.points;
            if (kind == "uphill") path = reversed(path);
            expected = kind == "uphill" ? 2.0 * (v.value(path.points.back()) - v.value(path.points.front())) : 0.0;
            expected_text = format_double(expected);
        }
        value = rate_functional_sde(path, v);
    } else if (system == "ac1d") {
        const double length = num(p, "L");
        const auto cutoff = integer(p, "N");
        require(length > 0.0 && cutoff >= 0 && cutoff <= 1024, "need L > 0 and 0 <= N <= 1024");
        FieldPath path;
        AllenCahnEnergy energy{1, length, static_cast<int>(cutoff), std::nullopt, 1};
        if (kind == "file") {
            const auto file = str(p, "input");
            std::ifstream is(file);
            require(static_cast<bool>(is), "cannot open input path file '" + file + "'");
            path = io::read_field_path_jsonl(is);
        } else {
            SpdeRun run;
            run.field0 = SpectralField::constant(1, length, static_cast<int>(cutoff), -1e-6);
            if (cutoff >= 1) run.field0.at(1) = run.field0.at(-1) = Complex{1e-7, 0.0};
            run.epsilon = 0.0;
            run.dt = dt;
            const auto tr = simulate_spde(run, static_cast<std::size_t>(std::llround(t_end / dt)));
            path.times = tr.times;
            path.points = tr.fields;
            if (kind == "uphill") path = reversed(path);
            expected = kind == "uphill"
                           ? 2.0 * (ac_energy(energy, path.points.back()) - ac_energy(energy, path.points.front()))
                           : 0.0;
            expected_text = format_double(expected);
        }
        value = rate_functional_ac_1d(path, length);
    } else {
        throw ValidationError("system must be quartic or ac1d");
    }
    Artifacts out;
    Csv csv(hash, {"system", "path", "value", "expected"});
    csv.row(system, kind, value, expected_text);
    out.files.emplace_back("results.csv", csv.str());
    return out;
}

Artifacts run_randomwalk(const json& p, const std::string& hash) {
    const long long n = integer(p, "n"), walks = integer(p, "walks");
    const double s = num(p, "s"), t = num(p, "t");
    require(n >= 1 && walks >= 2, "need n >= 1 and walks >= 2");
    require(s >= 0.0 && t > s, "need 0 <= s < t");
    const std::vector<double> times{s, t};
    const auto rows = sample_rescaled_walks(static_cast<std::size_t>(n), times, static_cast<std::size_t>(walks),
                                            seed_of(p), threads_of(p));
    std::vector<double> incr, end;
    for (const auto& r : rows) {
        incr.push_back(r[1] - r[0]);
        end.push_back(r[1] / std::sqrt(t));
    }
    const auto si = stats::summarize(incr);
    const double ks = stats::ks_statistic_normal(end);
    // S_k / sqrt(n t) lives on a lattice of spacing 2 / sqrt(n t).
    const double ks_lattice = stats::ks_statistic_normal_lattice(end, 2.0 / std::sqrt(static_cast<double>(n) * t));
    const double crit = stats::ks_critical_value(end.size());
    const double exact_var = (std::floor(n * t) - std::floor(n * s)) / static_cast<double>(n);
    Artifacts out;
    Csv csv(hash, {"quantity", "value", "reference", "stderr_or_p"});
    csv.row("increment_variance", si.variance, exact_var, si.stderr_variance);
    csv.row("increment_mean", si.mean, 0.0, si.stderr_mean);
    csv.row("ks_statistic", ks, crit, stats::ks_p_value(ks, end.size()));
    csv.row("ks_statistic_lattice", ks_lattice, crit, stats::ks_p_value(ks_lattice, end.size()));
    out.files.emplace_back("results.csv", csv.str());
    return out;
}

Artifacts run_arrhenius_sweep(const json& p, const std::string& hash) {
    const std::string system = str(p, "system");
    const auto eps_list = list(p, "eps");
    const long long n = integer(p, "n");
    require(n >= 1, "n must be >= 1");
    require(eps_list.size() >= 3, "need at least three noise levels");
    for (double e : eps_list) require(e > 0.0, "eps values must be positive");
    std::vector<std::pair<double, HittingTimeBatch>> batches;
    std::vector<double> predictions;
    if (system == "quartic") {
        const double delta = p.at("delta").is_null() ? 0.2 : num(p, "delta");
        require(delta > 0.0, "delta must be positive");
        const auto v = quartic_double_well();
        const auto pred = ek_finite(find_critical_point(v, Vector::Constant(1, -0.9)),
                                    find_critical_point(v, Vector::Constant(1, 0.1)), v);
        for (double e : eps_list) {
            const auto run = quartic_run(e, num(p, "dt"), -1.0, num(p, "t_max"), seed_of(p));
            batches.emplace_back(e, sample_hitting_times(run, Vector::Constant(1, 1.0), delta,
                                                         static_cast<std::size_t>(n), threads_of(p)));
            predictions.push_back(pred.predict(e));
        }
    } else if (system == "ac1d") {
        json q = p;
        q["d"] = 1;
        q["norm"] = "linf";
        q["renormalize"] = false;
        const double delta = p.at("delta").is_null() ? 0.3 : num(p, "delta");
        for (double e : eps_list) {
            const auto run = spde_run_from(q, e);
            batches.emplace_back(e, sample_spde_hitting_times(run, target_from(q, delta), static_cast<std::size_t>(n),
                                                              threads_of(p)));
            predictions.push_back(allen_cahn_prediction(run, e));
        }
    } else {
        throw ValidationError("system must be quartic or ac1d");
    }
    const auto fit = arrhenius_fit(batches);
    Artifacts out;
    Csv csv(hash, {"eps", "n_attempted", "n_censored", "mean", "stderr", "prediction"});
    for (std::size_t i = 0; i < batches.size(); ++i) {
        const auto& b = batches[i].second;
        csv.row(batches[i].first, b.n_attempted, b.n_censored, b.mean, b.stderr_mean, predictions[i]);
    }
    out.files.emplace_back("results.csv", csv.str());
    Csv fit_csv(hash, {"slope", "intercept", "r_squared"});
    fit_csv.row(fit.slope, fit.intercept, fit.r_squared);
    out.files.emplace_back("fit.csv", fit_csv.str());
    return out;
}

Artifacts dispatch(Experiment e, const json& p, const std::string& hash) {
    validate_common(p);
    switch (e) {
        case Experiment::sde_hitting: return run_sde_hitting(p, hash);
        case Experiment::spde_hitting: return run_spde_hitting(p, hash);
        case Experiment::ou_check: return run_ou_check(p, hash);
        case Experiment::potential_theory: return run_potential_theory(p, hash);
        case Experiment::determinant: return run_determinant(p, hash);
        case Experiment::kramers_predict: return run_kramers_predict(p, hash);
        case Experiment::rate_functional: return run_rate_functional(p, hash);
        case Experiment::randomwalk: return run_randomwalk(p, hash);
        case Experiment::arrhenius_sweep: return run_arrhenius_sweep(p, hash);
    }
    throw ValidationError("unknown experiment");
}

void report(std::ostream& err, const std::string& kind, const std::string& message, int code) {
    json j;
    j["error"] = kind;
    j["message"] = message;
    j["exit_code"] = code;
    err << j.dump() << '\n';
}

void write_file(const fs::path& path, const std::string& contents) {
    fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << contents;
}

}  // namespace

int run(const ExperimentConfig& config, const fs::path& out_dir, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    json resolved;
    std::string hash;
    Artifacts artifacts;
    try {
        resolved = resolve_parameters(config.experiment, config.parameters);
        hash = manifest_hash(config.experiment, resolved);
        artifacts = dispatch(config.experiment, resolved, hash);
    } catch (const ValidationError& e) {
        report(err, "ValidationError", e.what(), kExitValidation);
        return kExitValidation;
    } catch (const InvalidArgument& e) {
        report(err, e.kind(), e.what(), kExitValidation);
        return kExitValidation;
    } catch (const DomainError& e) {
        report(err, e.kind(), e.what(), kExitValidation);
        return kExitValidation;
    } catch (const AllCensored& e) {
        report(err, e.kind(), e.what(), kExitAllCensored);
        return kExitAllCensored;
    } catch (const Error& e) {
        report(err, e.kind(), e.what(), kExitFailure);
        return kExitFailure;
    } catch (const std::exception& e) {
        report(err, "InternalError", e.what(), kExitFailure);
        return kExitFailure;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    try {
        for (const auto& [name, contents] : artifacts.files) write_file(out_dir / name, contents);
        json manifest;
        manifest["experiment"] = std::string(experiment_name(config.experiment));
        manifest["parameters"] = resolved;
        manifest["seed"] = resolved.contains("seed") ? resolved.at("seed") : json(nullptr);
        manifest["version"] = std::string(kVersion);
        manifest["manifest_hash"] = hash;
        manifest["wall_time_seconds"] = wall;
        write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
    } catch (const std::exception& e) {
        report(err, "IoError", e.what(), kExitFailure);
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace metastab::cli
