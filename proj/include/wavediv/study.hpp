#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wavediv/inference.hpp"

namespace wavediv {

inline constexpr const char* kVersion = "0.1.0";

enum class StudyMode { estimate, mc_normality, mc_coverage, rate_study, density_dump, oracle };

std::string mode_name(StudyMode mode);
StudyMode mode_from_name(const std::string& name);

// Flat experiment configuration.  f/g accept either the distribution grammar
// ("beta(2,5)") or a CSV path of raw samples; whichever side is a CSV gets
// estimated.
struct StudyConfig {
    StudyMode mode = StudyMode::estimate;
    std::string kind = "kl";
    double alpha = 2.0;
    std::string f;
    std::string g;
    long n = 0;
    long m = 0;
    int replications = 1;
    double epsilon = 0.02;
    double kappa_min = 1e-8;
    std::string wavelet = "daubechies-4";
    int depth = 12;
    int quadrature_points = 2048;
    std::string quadrature_scheme = "composite-simpson";
    double level = 0.95;
    std::uint64_t master_seed = 20260808;
    std::string out;       // report path; empty = stdout
    bool symmetrized = false;
    std::vector<long> rate_ns = {500, 2000, 8000};
    double threshold = 0.0;
    double smoothness = 1.5;
    int resolution = -1;   // wavelet level override; -1 = schedule from n
    std::string grid;      // density dumps: "lo:hi:count"
    std::string qq_out;    // optional QQ pair CSV for mc studies
};

// key = value lines; blank lines and '#' comments ignored.
StudyConfig load_config_file(const std::string& path);
void apply_config_override(StudyConfig& config, const std::string& key, const std::string& value);

// Point-estimate record produced by estimate/test runs and by every Monte
// Carlo replication.
struct EstimateReport {
    std::string kind;
    std::optional<double> alpha;
    double point = 0.0;
    VarianceEstimate variance;
    std::optional<double> standardized;
    double reference = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;
    double level = 0.95;
    std::optional<RateBoundConstants> rate_bounds;
    std::optional<double> an_proxy;
    double epsilon = 0.0;
    std::string error; // degenerate-variance and friends; empty when clean
};

struct ReplicationRecord {
    int index = 0;
    double point = 0.0;
    double standardized = 0.0;
    bool covered = false;
    double abs_error = 0.0;
    double sup_proxy = 0.0; // c_{n,m}: max of the per-sample sup-distances
    bool bound_ok = false;
    std::string error;
};

struct RateStudyRow {
    long n = 0;
    double median_abs_error = 0.0;
    double median_sup_proxy = 0.0;
    double bound_fraction = 0.0;
    int excluded = 0;
};

struct StudyReport {
    StudyConfig config;
    std::string mode;
    std::optional<EstimateReport> estimate;      // estimate mode
    std::vector<ReplicationRecord> replications; // mc + rate modes
    double reference = 0.0;
    // mc summaries
    std::optional<double> ks;
    std::optional<double> coverage;
    std::optional<double> mean_statistic;
    std::optional<double> sd_statistic;
    int excluded = 0;
    // rate-study summaries
    std::vector<RateStudyRow> rate_rows;
    double wall_clock_seconds = 0.0;

    // Stable-key-order JSON; wall_clock_seconds is the only field expected
    // to change between identical runs.
    std::string to_json_text() const;
};

// Executes the configured study.  Deterministic given the config (up to the
// wall-clock field); replications may run in parallel, bounded by the
// WAVEDIV_THREADS environment variable (0/unset = hardware concurrency).
StudyReport run_study(const StudyConfig& config);

} // namespace wavediv
