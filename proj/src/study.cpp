#include "wavediv/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "wavediv/distributions.hpp"
#include "wavediv/oracles.hpp"
#include "wavediv/rng.hpp"
#include "wavediv/special_functions.hpp"
#include "wavediv/stats.hpp"

namespace wavediv {

namespace {

using ordered_json = nlohmann::ordered_json;

int env_thread_limit() {
    const char* raw = std::getenv("WAVEDIV_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    const int v = std::atoi(raw);
    return v < 0 ? 0 : v;
}

void parallel_for(long count, const std::function<void(long)>& body) {
    int limit = env_thread_limit();
    if (limit == 0) limit = static_cast<int>(std::thread::hardware_concurrency());
    if (limit <= 1 || count <= 1) {
        for (long i = 0; i < count; ++i) body(i);
        return;
    }
    limit = static_cast<int>(std::min<long>(limit, count));
    std::atomic<long> next(0);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(limit));
    for (int t = 0; t < limit; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const long i = next.fetch_add(1);
                if (i >= count) return;
                body(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

bool parse_bool(const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw std::invalid_argument("expected a boolean, got: " + v);
}

std::vector<long> parse_long_list(const std::string& v) {
    std::vector<long> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stol(item));
    }
    if (out.empty()) throw std::invalid_argument("empty integer list: " + v);
    return out;
}

std::string trim_copy(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// One side of the comparison: either a known distribution or samples to fit.
struct SideInput {
    std::optional<Distribution> dist;
    std::optional<SampleSet> samples;
    bool known() const { return dist.has_value(); }
};

SideInput resolve_side(const std::string& spec) {
    if (spec.empty()) throw std::invalid_argument("missing input: set both f and g");
    SideInput side;
    if (looks_like_distribution(spec)) {
        side.dist = parse_distribution(spec);
    } else {
        side.samples = read_sample_csv(spec);
    }
    return side;
}

struct FittedSide {
    DensityFn eval;
    std::optional<WaveletDensityEstimate> estimate;
    const SampleSet* samples = nullptr;
    long size = 0;
};

FittedSide fit_side(const SideInput& side, const ScalingTablePtr& table,
                    const StudyConfig& config) {
    FittedSide out;
    if (side.known()) {
        const Distribution dist = *side.dist;
        out.eval = [dist](double x) { return dist.pdf(x); };
        return out;
    }
    std::optional<int> level;
    if (config.resolution >= 0) level = config.resolution;
    out.estimate = fit_density(*side.samples, table, level, config.smoothness);
    const WaveletDensityEstimate est = *out.estimate;
    out.eval = [est](double x) { return est(x); };
    out.samples = &*side.samples;
    out.size = side.samples->size();
    return out;
}

DensityRef side_ref(const SideInput& side, const FittedSide& fitted) {
    if (side.known()) return make_density_ref(*side.dist);
    return make_density_ref(*fitted.estimate);
}

ordered_json config_json(const StudyConfig& c) {
    ordered_json j;
    j["mode"] = mode_name(c.mode);
    j["kind"] = c.kind;
    j["alpha"] = c.alpha;
    j["f"] = c.f;
    j["g"] = c.g;
    j["n"] = c.n;
    j["m"] = c.m;
    j["replications"] = c.replications;
    j["epsilon"] = c.epsilon;
    j["kappa_min"] = c.kappa_min;
    j["wavelet"] = c.wavelet;
    j["depth"] = c.depth;
    j["quadrature_points"] = c.quadrature_points;
    j["quadrature_scheme"] = c.quadrature_scheme;
    j["level"] = c.level;
    j["master_seed"] = c.master_seed;
    j["symmetrized"] = c.symmetrized;
    j["rate_ns"] = c.rate_ns;
    j["threshold"] = c.threshold;
    j["smoothness"] = c.smoothness;
    j["resolution"] = c.resolution;
    return j;
}

std::string side_name(Side side) {
    switch (side) {
        case Side::first: return "first";
        case Side::second: return "second";
        case Side::two_sample: return "two-sample";
        case Side::sym_first: return "symmetrized-first";
        case Side::sym_second: return "symmetrized-second";
        case Side::sym_two_sample: return "symmetrized-two-sample";
    }
    return "?";
}

ordered_json variance_json(const VarianceEstimate& v) {
    ordered_json j;
    j["value"] = v.value;
    if (v.two_sample()) j["second_value"] = v.second_value;
    j["side"] = side_name(v.side);
    j["method"] = v.method == VarianceMethod::plug_in_empirical ? "plug-in-empirical"
                                                                : "closed-form-quadrature";
    j["n"] = v.n;
    if (v.two_sample()) j["m"] = v.m;
    return j;
}

ordered_json estimate_json(const EstimateReport& e) {
    ordered_json j;
    j["kind"] = e.kind;
    if (e.alpha) j["alpha"] = *e.alpha;
    j["point"] = e.point;
    j["variance"] = variance_json(e.variance);
    if (e.standardized) {
        j["standardized"] = *e.standardized;
    } else {
        j["standardized"] = nullptr;
    }
    j["reference"] = e.reference;
    j["ci"] = ordered_json{{"lo", e.ci_lo}, {"hi", e.ci_hi}, {"level", e.level}};
    if (e.rate_bounds) {
        const auto& r = *e.rate_bounds;
        j["rate_bounds"] = ordered_json{{"a1", r.a1},
                                        {"a2", r.a2},
                                        {"a3", r.a3},
                                        {"a4", r.a4},
                                        {"sym_first", r.sym_first},
                                        {"sym_second", r.sym_second}};
    }
    if (e.an_proxy) j["an_proxy"] = *e.an_proxy;
    j["epsilon"] = e.epsilon;
    j["error"] = e.error;
    return j;
}

PhiFunctional make_phi(const StudyConfig& config) {
    const DivergenceKind kind = kind_from_name(config.kind);
    if (kind == DivergenceKind::renyi || kind == DivergenceKind::tsallis) {
        return phi_functional(kind, config.alpha);
    }
    return phi_functional(kind);
}

// named family, or "file:path" / a path-looking string with custom taps
ScalingFilter resolve_filter(const std::string& spec) {
    if (spec.rfind("file:", 0) == 0) return load_filter_file(spec.substr(5));
    if (spec.find('/') != std::string::npos || spec.find(".txt") != std::string::npos) {
        return load_filter_file(spec);
    }
    return builtin_filter(spec);
}

QuadratureRule make_rule(const StudyConfig& config) {
    QuadratureRule rule;
    rule.points = config.quadrature_points;
    if (config.quadrature_scheme == "composite-simpson" || config.quadrature_scheme == "simpson") {
        rule.scheme = QuadratureRule::Scheme::composite_simpson;
    } else if (config.quadrature_scheme == "composite-midpoint" ||
               config.quadrature_scheme == "midpoint") {
        rule.scheme = QuadratureRule::Scheme::composite_midpoint;
    } else {
        throw std::invalid_argument("unknown quadrature scheme: " + config.quadrature_scheme);
    }
    rule.validate();
    return rule;
}

Side pick_side(bool f_known, bool g_known, bool symmetrized) {
    if (f_known && g_known) {
        throw std::invalid_argument("both inputs are known distributions; use oracle mode");
    }
    if (!f_known && !g_known) return symmetrized ? Side::sym_two_sample : Side::two_sample;
    if (g_known) return symmetrized ? Side::sym_first : Side::first;
    return symmetrized ? Side::sym_second : Side::second;
}

} // namespace

std::string mode_name(StudyMode mode) {
    switch (mode) {
        case StudyMode::estimate: return "estimate";
        case StudyMode::mc_normality: return "mc-normality";
        case StudyMode::mc_coverage: return "mc-coverage";
        case StudyMode::rate_study: return "rate-study";
        case StudyMode::density_dump: return "density-dump";
        case StudyMode::oracle: return "oracle";
    }
    return "?";
}

StudyMode mode_from_name(const std::string& name) {
    if (name == "estimate") return StudyMode::estimate;
    if (name == "mc-normality") return StudyMode::mc_normality;
    if (name == "mc-coverage") return StudyMode::mc_coverage;
    if (name == "rate-study") return StudyMode::rate_study;
    if (name == "density-dump") return StudyMode::density_dump;
    if (name == "oracle") return StudyMode::oracle;
    throw std::invalid_argument("unknown study mode: " + name);
}

void apply_config_override(StudyConfig& config, const std::string& key,
                           const std::string& value) {
    if (key == "mode") config.mode = mode_from_name(value);
    else if (key == "kind") config.kind = value;
    else if (key == "alpha") config.alpha = std::stod(value);
    else if (key == "f") config.f = value;
    else if (key == "g") config.g = value;
    else if (key == "n") config.n = std::stol(value);
    else if (key == "m") config.m = std::stol(value);
    else if (key == "replications") config.replications = std::stoi(value);
    else if (key == "epsilon") config.epsilon = std::stod(value);
    else if (key == "kappa_min") config.kappa_min = std::stod(value);
    else if (key == "wavelet") config.wavelet = value;
    else if (key == "depth") config.depth = std::stoi(value);
    else if (key == "quadrature_points") config.quadrature_points = std::stoi(value);
    else if (key == "quadrature_scheme") config.quadrature_scheme = value;
    else if (key == "level") config.level = std::stod(value);
    else if (key == "master_seed") config.master_seed = std::stoull(value);
    else if (key == "out") config.out = value;
    else if (key == "symmetrized") config.symmetrized = parse_bool(value);
    else if (key == "rate_ns") config.rate_ns = parse_long_list(value);
    else if (key == "threshold") config.threshold = std::stod(value);
    else if (key == "smoothness") config.smoothness = std::stod(value);
    else if (key == "resolution") config.resolution = std::stoi(value);
    else if (key == "grid") config.grid = value;
    else if (key == "qq_out") config.qq_out = value;
    else throw std::invalid_argument("unknown config key: " + key);
}

StudyConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    StudyConfig config;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim_copy(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key = value");
        }
        apply_config_override(config, trim_copy(t.substr(0, eq)), trim_copy(t.substr(eq + 1)));
    }
    return config;
}

namespace {

// Shared state of a Monte Carlo experiment: fixed domain, fixed oracle
// reference, per-replication sampling/fit/estimate.
struct McContext {
    PhiFunctional phi;
    ScalingTablePtr table;
    QuadratureRule quad;
    Domain domain;
    Distribution f = Distribution::uniform(0.0, 1.0);
    Distribution g = Distribution::uniform(0.0, 1.0);
    Side side = Side::two_sample;
    long n = 0, m = 0;
    double reference = 0.0;
    // side influences under the true clipped pair, for the level-n
    // standardizer sigma_{h,n}^2 = Var(K_j(h)(X))
    DensityFn infl_first, infl_second;
    DensityFn ftilde, gtilde;
    double d1 = 1.0, d2 = 1.0;
};

// The normality statistic is standardized by the finite-level variance of
// the wavelet empirical process: Var(K_j(psi)(X)) under the true source
// density, where psi is the side's influence restricted to the domain,
// centered, and scaled by the mass renormalizer.  It converges to the
// limit variance Var(psi(X)) as the level grows.
VarianceEstimate oracle_variance_at_level(const McContext& ctx, int level_f, int level_g,
                                          long n, long m) {
    const auto component = [&](bool second, int level) {
        const Domain dom = ctx.domain;
        const DensityFn& infl = second ? ctx.infl_second : ctx.infl_first;
        const DensityFn& tilde = second ? ctx.gtilde : ctx.ftilde;
        const double d_mass = second ? ctx.d2 : ctx.d1;
        const double center = ctx.quad.integrate(
            dom.lo, dom.hi, [&](double x) { return tilde(x) * infl(x); });
        const DensityFn psi = [infl, dom, center, d_mass](double x) {
            if (x < dom.lo || x > dom.hi) return 0.0;
            return (infl(x) - center) / d_mass;
        };
        const Distribution& src = second ? ctx.g : ctx.f;
        const auto bound = [&](bool upper) {
            const double s = upper ? src.support_hi() : src.support_lo();
            if (std::isfinite(s)) return s;
            return src.quantile(upper ? 1.0 - 1e-9 : 1e-9);
        };
        const double W = ctx.table->support_width();
        const double pad = W * std::ldexp(1.0, -level) + 1e-9;
        const double lo = std::min(bound(false), dom.lo - pad);
        const double hi = std::max(bound(true), dom.hi + pad);
        const DensityFn src_pdf = [src](double x) { return src.pdf(x); };
        return sigma_hn(ctx.table, level, psi, {lo, hi}, src_pdf, lo, hi, 16384);
    };

    VarianceEstimate v;
    v.side = ctx.side;
    v.method = VarianceMethod::closed_form_quadrature;
    switch (ctx.side) {
        case Side::first:
        case Side::sym_first:
            v.value = component(false, level_f);
            v.n = n;
            break;
        case Side::second:
        case Side::sym_second:
            v.value = component(true, level_g);
            v.n = m;
            break;
        case Side::two_sample:
        case Side::sym_two_sample:
            v.value = component(false, level_f);
            v.second_value = component(true, level_g);
            v.n = n;
            v.m = m;
            break;
    }
    return v;
}

McContext make_mc_context(const StudyConfig& config) {
    McContext ctx;
    ctx.phi = make_phi(config);
    ctx.table = build_scaling_table(resolve_filter(config.wavelet), config.depth);
    ctx.quad = make_rule(config);
    ctx.f = parse_distribution(config.f);
    ctx.g = parse_distribution(config.g);
    ctx.n = config.n;
    ctx.m = config.m;
    if (config.n < 2 && config.m < 2) {
        throw std::invalid_argument("Monte Carlo modes need n >= 2 (and m >= 2 if two-sample)");
    }
    const bool f_known = config.n == 0;
    const bool g_known = config.m == 0;
    ctx.side = pick_side(f_known, g_known, config.symmetrized);
    ctx.domain = trim_domain(make_density_ref(ctx.f), make_density_ref(ctx.g), config.epsilon,
                             config.kappa_min);
    const bool symmetrized = config.symmetrized;
    const OracleValue ref =
        symmetrized
            ? OracleValue{0.5 * (reference_divergence(ctx.f, ctx.g, ctx.phi, ctx.domain).value +
                                 reference_divergence(ctx.g, ctx.f, ctx.phi, ctx.domain).value),
                          0.0, 0.0}
            : reference_divergence(ctx.f, ctx.g, ctx.phi, ctx.domain);
    ctx.reference = ref.value;

    const Distribution fd = ctx.f;
    const Distribution gd = ctx.g;
    const DensityFn fp = [fd](double x) { return fd.pdf(x); };
    const DensityFn gp = [gd](double x) { return gd.pdf(x); };
    const RenormalizedPair pair = renormalize(fp, gp, ctx.domain, ctx.quad);
    const bool renyi = ctx.phi.kind == DivergenceKind::renyi;
    const double core_fg = renyi ? alpha_core_integral(pair, ctx.phi.alpha, ctx.quad) : 1.0;
    const double core_gf =
        renyi ? alpha_core_integral(pair, ctx.phi.alpha, ctx.quad, true) : 1.0;
    const Side s1 = ctx.side == Side::sym_second || ctx.side == Side::sym_first ||
                            ctx.side == Side::sym_two_sample
                        ? Side::sym_two_sample
                        : Side::two_sample;
    const Side s2 = s1 == Side::sym_two_sample ? Side::sym_second : Side::second;
    ctx.infl_first = side_influence(ctx.phi, s1, pair, core_fg, core_gf);
    ctx.infl_second = side_influence(ctx.phi, s2, pair, core_fg, core_gf);
    ctx.ftilde = [pair](double x) { return pair.ft(x); };
    ctx.gtilde = [pair](double x) { return pair.gt(x); };
    ctx.d1 = pair.d1;
    ctx.d2 = pair.d2;
    return ctx;
}

struct RepOutcome {
    double point = 0.0;
    double standardized = 0.0;
    bool covered = false;
    double abs_error = 0.0;
    double sup_proxy = 0.0;
};

// One replication: sample, fit, estimate, standardize against the oracle
// reference.  sup_grid non-null turns on the sup-distance proxy.
RepOutcome run_replication(const McContext& ctx, const StudyConfig& config, long n, long m,
                           const VarianceEstimate& oracle_var, std::uint64_t rep_seed,
                           const std::vector<double>* sup_grid) {
    RepOutcome out;
    const bool f_estimated = ctx.side != Side::second && ctx.side != Side::sym_second;
    const bool g_estimated = ctx.side == Side::second || ctx.side == Side::sym_second ||
                             ctx.side == Side::two_sample || ctx.side == Side::sym_two_sample;

    std::optional<SampleSet> sx, sy;
    std::optional<WaveletDensityEstimate> fn, gm;
    DensityFn f_eval, g_eval;

    std::optional<int> level;
    if (config.resolution >= 0) level = config.resolution;

    if (f_estimated) {
        sx = sample(ctx.f, n, mix_seed(rep_seed, 1));
        fn = fit_density(*sx, ctx.table, level, config.smoothness);
        const WaveletDensityEstimate est = *fn;
        f_eval = [est](double x) { return est(x); };
    } else {
        const Distribution dist = ctx.f;
        f_eval = [dist](double x) { return dist.pdf(x); };
    }
    if (g_estimated) {
        sy = sample(ctx.g, m, mix_seed(rep_seed, 2));
        gm = fit_density(*sy, ctx.table, level, config.smoothness);
        const WaveletDensityEstimate est = *gm;
        g_eval = [est](double x) { return est(x); };
    } else {
        const Distribution dist = ctx.g;
        g_eval = [dist](double x) { return dist.pdf(x); };
    }

    const bool symmetrized = config.symmetrized;
    const DivergenceValue dv = symmetrized
                                   ? symmetrized_divergence(ctx.phi, f_eval, g_eval, ctx.domain,
                                                            ctx.quad)
                                   : divergence(ctx.phi, f_eval, g_eval, ctx.domain, ctx.quad);
    out.point = dv.value;
    out.abs_error = std::fabs(dv.value - ctx.reference);

    // normality statistic: standardized by the level-n closed-form variance
    out.standardized = standardized_statistic(dv.value, ctx.reference, oracle_var);

    // practical interval: plug-in variance from this replication's fits
    const VarianceEstimate var =
        plug_in_variance(ctx.phi, ctx.side, sx ? &*sx : nullptr, sy ? &*sy : nullptr, f_eval,
                         g_eval, ctx.domain, ctx.quad);
    const auto ci = confidence_interval(dv.value, var, config.level);
    out.covered = ctx.reference >= ci.first && ctx.reference <= ci.second;

    if (sup_grid != nullptr) {
        double an = 0.0, bm = 0.0;
        if (fn) {
            const Distribution dist = ctx.f;
            an = sup_distance(*fn, [dist](double x) { return dist.pdf(x); }, *sup_grid);
        }
        if (gm) {
            const Distribution dist = ctx.g;
            bm = sup_distance(*gm, [dist](double x) { return dist.pdf(x); }, *sup_grid);
        }
        out.sup_proxy = std::max(an, bm);
    }
    return out;
}

StudyReport run_mc_study(const StudyConfig& config) {
    StudyReport report;
    report.config = config;
    report.mode = mode_name(config.mode);

    const McContext ctx = make_mc_context(config);
    report.reference = ctx.reference;

    const int R = config.replications;
    if (R < 1) throw std::invalid_argument("replications must be >= 1");
    report.replications.assign(static_cast<std::size_t>(R), {});

    const int level_f =
        config.resolution >= 0 ? config.resolution : resolution_level(std::max(ctx.n, 1L));
    const int level_g =
        config.resolution >= 0 ? config.resolution : resolution_level(std::max(ctx.m, 1L));
    const VarianceEstimate oracle_var =
        oracle_variance_at_level(ctx, level_f, level_g, ctx.n, ctx.m);

    parallel_for(R, [&](long r) {
        ReplicationRecord& rec = report.replications[static_cast<std::size_t>(r)];
        rec.index = static_cast<int>(r);
        try {
            const RepOutcome o = run_replication(ctx, config, ctx.n, ctx.m, oracle_var,
                                                 mix_seed(config.master_seed, r), nullptr);
            rec.point = o.point;
            rec.standardized = o.standardized;
            rec.covered = o.covered;
            rec.abs_error = o.abs_error;
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
    });

    std::vector<double> z;
    int covered = 0, clean = 0;
    for (const auto& rec : report.replications) {
        if (!rec.error.empty()) {
            ++report.excluded;
            continue;
        }
        ++clean;
        z.push_back(rec.standardized);
        if (rec.covered) ++covered;
    }
    if (report.excluded > R / 20) {
        throw std::runtime_error("more than 5% of replications failed (" +
                                 std::to_string(report.excluded) + "/" + std::to_string(R) + ")");
    }
    if (clean > 0) {
        report.ks = ks_distance_to_normal(z);
        report.coverage = static_cast<double>(covered) / clean;
        report.mean_statistic = mean(z);
        report.sd_statistic = clean > 1 ? sample_sd(z) : 0.0;
    }

    if (!config.qq_out.empty()) {
        std::vector<double> sorted = z;
        std::sort(sorted.begin(), sorted.end());
        std::ofstream qq(config.qq_out);
        if (!qq) throw std::runtime_error("cannot write QQ file: " + config.qq_out);
        qq << "theoretical,empirical\n";
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(sorted.size());
            qq << normal_quantile(p) << "," << sorted[i] << "\n";
        }
    }
    return report;
}

StudyReport run_rate_study(const StudyConfig& config) {
    StudyReport report;
    report.config = config;
    report.mode = mode_name(config.mode);

    // the sweep fixes n per row; two-sample rows use m = n
    const bool two_sample = config.m != 0 || config.n == 0;

    McContext ctx = make_mc_context([&] {
        StudyConfig c = config;
        c.n = config.rate_ns.front();
        c.m = two_sample ? c.n : 0;
        return c;
    }());
    report.reference = ctx.reference;

    // A-constants from the true pair; the two-sample a.s. bound uses A1 + A2
    // (or the symmetrized halves).
    const Distribution f = ctx.f;
    const Distribution g = ctx.g;
    const RateBoundConstants bounds = rate_bound_constants(
        ctx.phi, [f](double x) { return f.pdf(x); }, [g](double x) { return g.pdf(x); },
        ctx.domain, ctx.quad);
    double bound_const = 0.0;
    switch (ctx.side) {
        case Side::first: bound_const = bounds.a1; break;
        case Side::second: bound_const = bounds.a2; break;
        case Side::two_sample: bound_const = bounds.a1 + bounds.a2; break;
        case Side::sym_first: bound_const = bounds.sym_first; break;
        case Side::sym_second: bound_const = bounds.sym_second; break;
        case Side::sym_two_sample: bound_const = bounds.sym_first + bounds.sym_second; break;
    }

    const int R = config.replications;
    if (R < 1) throw std::invalid_argument("replications must be >= 1");

    int rep_base = 0;
    for (long n : config.rate_ns) {
        const long m = two_sample ? n : 0;
        const int level = config.resolution >= 0 ? config.resolution : resolution_level(n);
        const std::vector<double> grid =
            sup_norm_grid(ctx.domain.lo, ctx.domain.hi, level, config.depth);
        const VarianceEstimate oracle_var = oracle_variance_at_level(ctx, level, level, n, m);

        std::vector<ReplicationRecord> rows(static_cast<std::size_t>(R));
        parallel_for(R, [&](long r) {
            ReplicationRecord& rec = rows[static_cast<std::size_t>(r)];
            rec.index = rep_base + static_cast<int>(r);
            try {
                const RepOutcome o =
                    run_replication(ctx, config, n, m, oracle_var,
                                    mix_seed(config.master_seed, rep_base + r), &grid);
                rec.point = o.point;
                rec.standardized = o.standardized;
                rec.covered = o.covered;
                rec.abs_error = o.abs_error;
                rec.sup_proxy = o.sup_proxy;
                rec.bound_ok = o.abs_error <= 1.5 * bound_const * o.sup_proxy;
            } catch (const std::exception& e) {
                rec.error = e.what();
            }
        });
        rep_base += R;

        RateStudyRow row;
        row.n = n;
        std::vector<double> errs, sups;
        int ok = 0, clean = 0;
        for (const auto& rec : rows) {
            if (!rec.error.empty()) {
                ++row.excluded;
                ++report.excluded;
                continue;
            }
            ++clean;
            errs.push_back(rec.abs_error);
            sups.push_back(rec.sup_proxy);
            if (rec.bound_ok) ++ok;
        }
        if (row.excluded > R / 20) {
            throw std::runtime_error("more than 5% of replications failed at n = " +
                                     std::to_string(n));
        }
        row.median_abs_error = median(errs);
        row.median_sup_proxy = median(sups);
        row.bound_fraction = clean > 0 ? static_cast<double>(ok) / clean : 0.0;
        report.rate_rows.push_back(row);
        for (auto& rec : rows) report.replications.push_back(std::move(rec));
    }
    return report;
}

StudyReport run_estimate(const StudyConfig& config) {
    StudyReport report;
    report.config = config;
    report.mode = mode_name(config.mode);

    const PhiFunctional phi = make_phi(config);
    const ScalingTablePtr table = build_scaling_table(resolve_filter(config.wavelet), config.depth);
    const QuadratureRule quad = make_rule(config);

    const SideInput f_in = resolve_side(config.f);
    const SideInput g_in = resolve_side(config.g);
    const Side side = pick_side(f_in.known(), g_in.known(), config.symmetrized);

    const FittedSide f_fit = fit_side(f_in, table, config);
    const FittedSide g_fit = fit_side(g_in, table, config);

    const Domain domain = trim_domain(side_ref(f_in, f_fit), side_ref(g_in, g_fit),
                                      config.epsilon, config.kappa_min);

    const DivergenceValue dv =
        config.symmetrized
            ? symmetrized_divergence(phi, f_fit.eval, g_fit.eval, domain, quad)
            : divergence(phi, f_fit.eval, g_fit.eval, domain, quad);

    EstimateReport est;
    est.kind = config.kind;
    if (phi.is_alpha_family()) est.alpha = phi.alpha;
    est.point = dv.value;
    est.reference = config.threshold;
    est.level = config.level;
    est.epsilon = config.epsilon;

    est.variance = plug_in_variance(phi, side, f_fit.samples, g_fit.samples, f_fit.eval,
                                    g_fit.eval, domain, quad);
    const auto ci = confidence_interval(dv.value, est.variance, config.level);
    est.ci_lo = ci.first;
    est.ci_hi = ci.second;
    try {
        est.standardized = standardized_statistic(dv.value, config.threshold, est.variance);
    } catch (const DegenerateVarianceError& e) {
        est.error = e.what();
    }
    est.rate_bounds = rate_bound_constants(phi, f_fit.eval, g_fit.eval, domain, quad);

    report.estimate = std::move(est);
    report.reference = config.threshold;
    return report;
}

StudyReport run_density_dump(const StudyConfig& config) {
    StudyReport report;
    report.config = config;
    report.mode = mode_name(config.mode);

    const ScalingTablePtr table = build_scaling_table(resolve_filter(config.wavelet), config.depth);
    const SideInput in = resolve_side(config.f);
    SampleSet samples;
    if (in.known()) {
        if (config.n < 1) throw std::invalid_argument("density-dump from a distribution needs n");
        samples = sample(*in.dist, config.n, mix_seed(config.master_seed, 0));
    } else {
        samples = *in.samples;
    }
    std::optional<int> level;
    if (config.resolution >= 0) level = config.resolution;
    const WaveletDensityEstimate est = fit_density(samples, table, level, config.smoothness);

    double lo = est.support_begin(), hi = est.support_end();
    long count = 512;
    if (!config.grid.empty()) {
        std::stringstream ss(config.grid);
        std::string a, b, c;
        if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c)) {
            throw std::invalid_argument("grid must be lo:hi:count");
        }
        lo = std::stod(a);
        hi = std::stod(b);
        count = std::stol(c);
        if (!(hi > lo) || count < 2) throw std::invalid_argument("bad grid spec");
    }

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!config.out.empty()) {
        file.open(config.out);
        if (!file) throw std::runtime_error("cannot write density file: " + config.out);
        os = &file;
    }
    (*os) << "x,fn\n";
    const double h = (hi - lo) / static_cast<double>(count - 1);
    for (long i = 0; i < count; ++i) {
        const double x = lo + h * static_cast<double>(i);
        (*os) << x << "," << est(x) << "\n";
    }
    return report;
}

StudyReport run_oracle(const StudyConfig& config) {
    StudyReport report;
    report.config = config;
    report.mode = mode_name(config.mode);

    const PhiFunctional phi = make_phi(config);
    const Distribution f = parse_distribution(config.f);
    const Distribution g = parse_distribution(config.g);

    EstimateReport est;
    est.kind = config.kind;
    if (phi.is_alpha_family()) est.alpha = phi.alpha;
    est.level = config.level;
    est.epsilon = config.epsilon;

    if (config.epsilon > 0.0) {
        const Domain domain = trim_domain(make_density_ref(f), make_density_ref(g),
                                          config.epsilon, config.kappa_min);
        const OracleValue v = config.symmetrized
                                  ? OracleValue{0.5 * (reference_divergence(f, g, phi, domain).value +
                                                       reference_divergence(g, f, phi, domain).value),
                                                0.0, 0.0}
                                  : reference_divergence(f, g, phi, domain);
        est.point = v.value;
        est.an_proxy = v.error_estimate;
    } else {
        // raw value on the effective common support
        const auto effective = [](const Distribution& d, bool upper) {
            const double s = upper ? d.support_hi() : d.support_lo();
            if (std::isfinite(s)) return s;
            return d.quantile(upper ? 1.0 - 1e-15 : 1e-15);
        };
        const double lo = std::max(effective(f, false), effective(g, false));
        const double hi = std::min(effective(f, true), effective(g, true));
        if (!(hi > lo)) throw std::runtime_error("oracle: supports do not overlap");
        const auto fp = [f](double x) { return f.pdf(x); };
        const auto gp = [g](double x) { return g.pdf(x); };
        const OracleValue v = quadrature_oracle(fp, gp, phi, lo, hi);
        est.point = v.value;
        est.an_proxy = v.error_estimate;
        if (const auto closed = closed_form_divergence(f, g, phi)) {
            est.reference = *closed;
        } else {
            est.reference = v.value;
        }
    }
    report.estimate = std::move(est);
    return report;
}

} // namespace

std::string StudyReport::to_json_text() const {
    ordered_json j;
    j["version"] = kVersion;
    j["mode"] = mode;
    j["config"] = config_json(config);
    if (estimate) j["estimate"] = estimate_json(*estimate);
    if (mode == "mc-normality" || mode == "mc-coverage" || mode == "rate-study") {
        j["reference"] = reference;
        ordered_json summary;
        if (ks) summary["ks"] = *ks;
        if (coverage) summary["coverage"] = *coverage;
        if (mean_statistic) summary["mean"] = *mean_statistic;
        if (sd_statistic) summary["sd"] = *sd_statistic;
        summary["excluded"] = excluded;
        if (!rate_rows.empty()) {
            ordered_json rows = ordered_json::array();
            for (const auto& r : rate_rows) {
                rows.push_back(ordered_json{{"n", r.n},
                                            {"median_abs_error", r.median_abs_error},
                                            {"median_sup_proxy", r.median_sup_proxy},
                                            {"bound_fraction", r.bound_fraction},
                                            {"excluded", r.excluded}});
            }
            summary["by_n"] = rows;
        }
        j["summary"] = summary;
        ordered_json reps = ordered_json::array();
        for (const auto& r : replications) {
            ordered_json rj;
            rj["index"] = r.index;
            if (r.error.empty()) {
                rj["point"] = r.point;
                rj["standardized"] = r.standardized;
                rj["covered"] = r.covered;
                rj["abs_error"] = r.abs_error;
                if (mode == "rate-study") {
                    rj["sup_proxy"] = r.sup_proxy;
                    rj["bound_ok"] = r.bound_ok;
                }
            } else {
                rj["error"] = r.error;
            }
            reps.push_back(std::move(rj));
        }
        j["replications"] = reps;
    }
    j["wall_clock_seconds"] = wall_clock_seconds;
    return j.dump(2) + "\n";
}

StudyReport run_study(const StudyConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    StudyReport report;
    switch (config.mode) {
        case StudyMode::estimate: report = run_estimate(config); break;
        case StudyMode::mc_normality:
        case StudyMode::mc_coverage: report = run_mc_study(config); break;
        case StudyMode::rate_study: report = run_rate_study(config); break;
        case StudyMode::density_dump: report = run_density_dump(config); break;
        case StudyMode::oracle: report = run_oracle(config); break;
    }
    const auto stop = std::chrono::steady_clock::now();
    report.wall_clock_seconds = std::chrono::duration<double>(stop - start).count();
    return report;
}

} // namespace wavediv
