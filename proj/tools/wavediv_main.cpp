#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wavediv/oracles.hpp"
#include "wavediv/study.hpp"

namespace {

using wavediv::StudyConfig;
using wavediv::StudyMode;

void add_common_options(CLI::App* cmd, StudyConfig& config, std::string& config_path) {
    cmd->add_option("--config", config_path, "config file (key = value lines)");
    cmd->add_option("--kind", config.kind, "divergence kind: renyi|tsallis|kl|l2");
    cmd->add_option("--alpha", config.alpha, "alpha for the Renyi/Tsallis families");
    cmd->add_option("--f", config.f, "first input: distribution spec or CSV path");
    cmd->add_option("--g", config.g, "second input: distribution spec or CSV path");
    cmd->add_option("--n", config.n, "sample size from f (0 = f is known)");
    cmd->add_option("--m", config.m, "sample size from g (0 = g is known)");
    cmd->add_option("--replications", config.replications, "Monte Carlo replications");
    cmd->add_option("--epsilon", config.epsilon, "domain trimming mass");
    cmd->add_option("--kappa-min", config.kappa_min, "density floor for clipping");
    cmd->add_option("--wavelet", config.wavelet,
                    "scaling family, or file:path with custom taps");
    cmd->add_option("--depth", config.depth, "scaling table depth");
    cmd->add_option("--quadrature-points", config.quadrature_points,
                    "composite quadrature subintervals");
    cmd->add_option("--quadrature-scheme", config.quadrature_scheme,
                    "composite-simpson or composite-midpoint");
    cmd->add_option("--level", config.level, "confidence level");
    cmd->add_option("--seed", config.master_seed, "master seed");
    cmd->add_option("--out", config.out, "report path (default stdout)");
    cmd->add_flag("--symmetrized", config.symmetrized, "use the symmetrized divergence");
    cmd->add_option("--resolution", config.resolution,
                    "wavelet resolution level override (-1 = schedule)");
    cmd->add_option("--smoothness", config.smoothness, "assumed Besov smoothness (metadata)");
    cmd->add_option("--threshold", config.threshold, "reference value for test statistics");
    cmd->add_option("--qq-out", config.qq_out, "write sorted QQ pairs to this CSV");
    cmd->add_option("--grid", config.grid, "density dump grid lo:hi:count");
}

void emit_report(const wavediv::StudyReport& report, const StudyConfig& config) {
    const std::string text = report.to_json_text();
    if (config.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(config.out);
        if (!out) throw std::runtime_error("cannot write report: " + config.out);
        out << text;
    }
}

// --config is honored before flag overlay, so flags win over file values.
std::string find_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) return argv[i + 1];
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    return {};
}

} // namespace

int main(int argc, char** argv) {
    StudyConfig config;
    std::string config_path;
    std::string rate_ns_arg;
    std::string mc_mode = "mc-normality";

    try {
        const std::string preload = find_config_path(argc, argv);
        if (!preload.empty()) config = wavediv::load_config_file(preload);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"wavediv: phi-divergence estimation between densities via linear wavelet "
                 "estimators, with asymptotic-variance confidence intervals"};
    app.require_subcommand(1);

    CLI::App* estimate = app.add_subcommand("estimate", "one- or two-sample divergence estimate");
    CLI::App* test = app.add_subcommand("test", "threshold test: reject when the CI clears it");
    CLI::App* mc = app.add_subcommand("mc-study", "Monte Carlo normality/coverage study");
    CLI::App* rate = app.add_subcommand("rate-study", "consistency sweep over sample sizes");
    CLI::App* density = app.add_subcommand("density", "fit and dump a wavelet density estimate");
    CLI::App* oracle = app.add_subcommand("oracle", "closed-form / quadrature reference values");

    for (CLI::App* cmd : {estimate, test, mc, rate, density, oracle}) {
        add_common_options(cmd, config, config_path);
    }
    mc->add_option("--mode", mc_mode, "mc-normality or mc-coverage");
    rate->add_option("--rate-ns", rate_ns_arg, "comma-separated sweep sizes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "estimate" || sub == "test") {
            config.mode = StudyMode::estimate;
        } else if (sub == "mc-study") {
            config.mode = wavediv::mode_from_name(mc_mode);
        } else if (sub == "rate-study") {
            config.mode = StudyMode::rate_study;
            if (!rate_ns_arg.empty()) {
                wavediv::apply_config_override(config, "rate_ns", rate_ns_arg);
            }
        } else if (sub == "density") {
            config.mode = StudyMode::density_dump;
        } else if (sub == "oracle") {
            config.mode = StudyMode::oracle;
            // raw (untrimmed) values unless epsilon was given explicitly
            if (oracle->count("--epsilon") == 0 && config_path.empty()) config.epsilon = 0.0;
        }

        wavediv::StudyReport report = wavediv::run_study(config);

        if (sub == "oracle" && report.estimate) {
            std::printf("%.10g +/- %.1e\n", report.estimate->point,
                        report.estimate->an_proxy.value_or(0.0));
        }
        if (sub == "test" && report.estimate) {
            const auto& est = *report.estimate;
            if (!est.error.empty()) {
                std::printf("degenerate variance: no standardized statistic (%s)\n",
                            est.error.c_str());
            } else {
                const bool reject = est.ci_lo > config.threshold;
                std::printf("point=%.6g ci=[%.6g, %.6g] threshold=%g -> %s\n", est.point,
                            est.ci_lo, est.ci_hi, config.threshold,
                            reject ? "reject equality" : "no evidence against equality");
            }
        }
        if (sub != "density") {
            emit_report(report, config);
        }
        return 0;
    } catch (const wavediv::InfiniteDivergenceError& e) {
        std::cout << "infinite\n";
        std::cerr << "note: " << e.what() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
