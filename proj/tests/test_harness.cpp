#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wavediv/rng.hpp"
#include "wavediv/study.hpp"

using namespace wavediv;

namespace {

const std::string kDir = WAVEDIV_TEST_DIR;
const std::string kCli = WAVEDIV_CLI_PATH;

std::string write_file(const std::string& name, const std::string& content) {
    const std::string path = kDir + "/" + name;
    std::ofstream out(path);
    REQUIRE(out.good());
    out << content;
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// report text with the wall-clock line removed
std::string strip_wall_clock(const std::string& text) {
    std::stringstream in(text), out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find("wall_clock_seconds") != std::string::npos) continue;
        out << line << "\n";
    }
    return out.str();
}

int run_cli(const std::string& args, const std::string& stdout_file) {
    const std::string cmd = kCli + " " + args + " > " + stdout_file + " 2> " + stdout_file +
                            ".err";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

StudyConfig small_mc_config() {
    StudyConfig c;
    c.mode = StudyMode::mc_normality;
    c.kind = "kl";
    c.f = "beta(2,5)";
    c.g = "beta(3,3)";
    c.n = 300;
    c.m = 300;
    c.replications = 24;
    c.epsilon = 0.02;
    c.quadrature_points = 256;
    c.master_seed = 99;
    return c;
}

} // namespace

TEST_CASE("seed mixing is injective over a large index range") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t r = 0; r < 200000; ++r) {
        seen.insert(mix_seed(0xabcdef, r));
    }
    CHECK(seen.size() == 200000);
    CHECK(mix_seed(1, 0) != mix_seed(2, 0));
}

TEST_CASE("config files parse and flags override") {
    const std::string path = write_file("cfg_basic.conf",
                                        "# comment\n"
                                        "mode = mc-normality\n"
                                        "kind = tsallis\n"
                                        "alpha = 2\n"
                                        "f = beta(2,5)\n"
                                        "g = beta(3,3)\n"
                                        "n = 400\n"
                                        "m = 400\n"
                                        "replications = 5\n"
                                        "epsilon = 0.05\n"
                                        "rate_ns = 100,200\n"
                                        "master_seed = 7\n");
    StudyConfig c = load_config_file(path);
    CHECK(c.mode == StudyMode::mc_normality);
    CHECK(c.kind == "tsallis");
    CHECK(c.alpha == 2.0);
    CHECK(c.epsilon == 0.05);
    CHECK(c.rate_ns == std::vector<long>{100, 200});
    apply_config_override(c, "epsilon", "0.01");
    CHECK(c.epsilon == 0.01);
    apply_config_override(c, "quadrature_scheme", "composite-midpoint");
    CHECK(c.quadrature_scheme == "composite-midpoint");
    apply_config_override(c, "kappa_min", "1e-6");
    CHECK(c.kappa_min == 1e-6);
    CHECK_THROWS_AS(apply_config_override(c, "bogus", "1"), std::invalid_argument);
    CHECK_THROWS_AS(load_config_file(kDir + "/does_not_exist.conf"), std::runtime_error);
}

TEST_CASE("estimate mode surfaces the degenerate-variance error") {
    std::string rows = "value\n";
    for (int i = 0; i < 10; ++i) rows += "0.7\n";
    const std::string fx = write_file("degenerate_x.csv", rows);
    const std::string fy = write_file("degenerate_y.csv", rows);

    StudyConfig c;
    c.mode = StudyMode::estimate;
    c.kind = "kl";
    c.f = fx;
    c.g = fy;
    const StudyReport report = run_study(c);
    REQUIRE(report.estimate.has_value());
    CHECK(report.estimate->error.find("degenerate") != std::string::npos);
    CHECK(!report.estimate->standardized.has_value());
    CHECK(report.estimate->point == doctest::Approx(0.0).epsilon(1e-10));
    // the interval degenerates instead of inventing a p-value
    CHECK(report.estimate->ci_lo == doctest::Approx(report.estimate->ci_hi));
}

TEST_CASE("estimate mode on distinct samples produces a usable report") {
    const auto sx = sample(Distribution::beta(2, 5), 800, 11);
    const auto sy = sample(Distribution::beta(3, 3), 700, 12);
    write_sample_csv(kDir + "/est_x.csv", sx);
    write_sample_csv(kDir + "/est_y.csv", sy);

    StudyConfig c;
    c.mode = StudyMode::estimate;
    c.kind = "tsallis";
    c.alpha = 2.0;
    c.f = kDir + "/est_x.csv";
    c.g = kDir + "/est_y.csv";
    const StudyReport report = run_study(c);
    REQUIRE(report.estimate.has_value());
    CHECK(report.estimate->error.empty());
    CHECK(report.estimate->point > 0.0);
    CHECK(report.estimate->variance.value > 0.0);
    CHECK(report.estimate->ci_lo < report.estimate->point);
    CHECK(report.estimate->ci_hi > report.estimate->point);
    CHECK(report.estimate->variance.n == 800);
    CHECK(report.estimate->variance.m == 700);

    // one-sample side against a known g
    StudyConfig c1 = c;
    c1.kind = "kl";
    c1.g = "beta(3,3)";
    const StudyReport r1 = run_study(c1);
    CHECK(r1.estimate->variance.side == Side::first);
}

TEST_CASE("sample CSV round trip and missing-file errors") {
    SampleSet s;
    s.values = {1.0, -2.5, 3.25e-3};
    write_sample_csv(kDir + "/roundtrip.csv", s);
    const SampleSet back = read_sample_csv(kDir + "/roundtrip.csv");
    REQUIRE(back.values.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(back.values[i] == s.values[i]);

    try {
        read_sample_csv(kDir + "/missing_file.csv");
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("missing_file.csv") != std::string::npos);
    }
}

TEST_CASE("mc study summary fields and report schema") {
    const StudyConfig c = small_mc_config();
    const StudyReport report = run_study(c);
    REQUIRE(report.ks.has_value());
    REQUIRE(report.coverage.has_value());
    CHECK(report.excluded == 0);
    CHECK(static_cast<int>(report.replications.size()) == c.replications);
    CHECK(*report.coverage >= 0.0);
    CHECK(*report.coverage <= 1.0);

    const auto j = nlohmann::ordered_json::parse(report.to_json_text());
    const std::vector<std::string> top = {"version", "mode", "config", "reference",
                                          "summary", "replications", "wall_clock_seconds"};
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        REQUIRE(i < top.size());
        CHECK(it.key() == top[i]);
    }
    CHECK(j["summary"].contains("ks"));
    CHECK(j["summary"].contains("coverage"));
    CHECK(j["summary"].contains("mean"));
    CHECK(j["summary"].contains("sd"));
    CHECK(j["replications"].size() == static_cast<std::size_t>(c.replications));
    CHECK(j["replications"][0].contains("standardized"));
}

TEST_CASE("study reports are byte-identical across runs and thread counts") {
    const StudyConfig c = small_mc_config();
    const std::string a = run_study(c).to_json_text();
    const std::string b = run_study(c).to_json_text();
    CHECK(strip_wall_clock(a) == strip_wall_clock(b));

    setenv("WAVEDIV_THREADS", "1", 1);
    const std::string serial = run_study(c).to_json_text();
    setenv("WAVEDIV_THREADS", "2", 1);
    const std::string parallel = run_study(c).to_json_text();
    unsetenv("WAVEDIV_THREADS");
    CHECK(strip_wall_clock(serial) == strip_wall_clock(parallel));
}

TEST_CASE("symmetrized two-sample study runs the full pipeline") {
    StudyConfig c;
    c.mode = StudyMode::mc_normality;
    c.kind = "kl";
    c.f = "beta(2,5)";
    c.g = "beta(3,3)";
    c.n = 4000;
    c.m = 4000;
    c.replications = 60;
    c.epsilon = 0.09;
    c.master_seed = 99;
    c.symmetrized = true;
    const StudyReport report = run_study(c);
    CHECK(report.excluded == 0);
    REQUIRE(report.ks.has_value());
    CHECK(std::fabs(*report.mean_statistic) < 0.5);
    CHECK(*report.sd_statistic > 0.7);
    CHECK(*report.sd_statistic < 1.4);
    // the symmetrized reference is direction-invariant
    StudyConfig swapped = c;
    std::swap(swapped.f, swapped.g);
    const StudyReport rev = run_study(swapped);
    CHECK(report.reference == doctest::Approx(rev.reference).epsilon(1e-12));
}

TEST_CASE("second-side study estimates g against a known f") {
    StudyConfig c;
    c.mode = StudyMode::mc_coverage; // alias of the same engine
    c.kind = "kl";
    c.f = "beta(2,5)";
    c.g = "beta(3,3)";
    c.n = 0;
    c.m = 4000;
    c.replications = 150;
    c.epsilon = 0.09;
    c.master_seed = 99;
    const StudyReport report = run_study(c);
    CHECK(report.mode == "mc-coverage");
    CHECK(report.excluded == 0);
    REQUIRE(report.coverage.has_value());
    CHECK(*report.coverage >= 0.9);
    CHECK(std::fabs(*report.mean_statistic) < 1.0);
    const auto j = nlohmann::ordered_json::parse(report.to_json_text());
    CHECK(j["config"]["mode"] == "mc-coverage");
}

TEST_CASE("midpoint scheme drives a study end to end") {
    StudyConfig c = small_mc_config();
    c.quadrature_scheme = "composite-midpoint";
    c.replications = 12;
    const StudyReport mid = run_study(c);
    StudyConfig s = c;
    s.quadrature_scheme = "composite-simpson";
    const StudyReport simp = run_study(s);
    CHECK(mid.excluded == 0);
    // the two rules agree on the smooth clipped reference to quadrature error
    CHECK(mid.reference == doctest::Approx(simp.reference).epsilon(1e-9));
    StudyConfig bad = c;
    bad.quadrature_scheme = "gauss";
    CHECK_THROWS_AS(run_study(bad), std::invalid_argument);
}

TEST_CASE("hostile pre-asymptotic configs still run cleanly") {
    // ratio-heavy domain at tiny n: no distributional claims, but the
    // pipeline must complete with no excluded replications
    StudyConfig c = small_mc_config();
    c.kind = "tsallis";
    c.alpha = 2.0;
    c.symmetrized = true;
    c.replications = 24;
    const StudyReport report = run_study(c);
    CHECK(report.excluded == 0);
    CHECK(report.ks.has_value());
}

TEST_CASE("one-sample a.s. bound proxy holds at n = 8000") {
    // first-side restatement: |J(f_n, g) - J| <= 1.5 A1 a_n for >= 90% of runs
    StudyConfig c;
    c.mode = StudyMode::rate_study;
    c.kind = "kl";
    c.f = "beta(2,5)";
    c.g = "beta(3,3)";
    c.n = 8000;
    c.m = 0;
    c.replications = 50;
    c.epsilon = 0.02;
    c.master_seed = 911;
    c.rate_ns = {8000};
    const StudyReport report = run_study(c);
    REQUIRE(report.rate_rows.size() == 1);
    CHECK(report.rate_rows[0].bound_fraction >= 0.9);
}

TEST_CASE("rate study report rows") {
    StudyConfig c;
    c.mode = StudyMode::rate_study;
    c.kind = "tsallis";
    c.alpha = 2.0;
    c.f = "beta(2,5)";
    c.g = "beta(3,3)";
    c.n = 200;
    c.m = 200;
    c.replications = 8;
    c.quadrature_points = 256;
    c.rate_ns = {200, 800};
    c.master_seed = 5;
    const StudyReport report = run_study(c);
    REQUIRE(report.rate_rows.size() == 2);
    CHECK(report.rate_rows[0].n == 200);
    CHECK(report.rate_rows[1].n == 800);
    CHECK(report.rate_rows[0].median_abs_error > 0.0);
    CHECK(report.rate_rows[0].median_sup_proxy > 0.0);
}

TEST_CASE("cli: oracle prints the dual-oracle value") {
    const std::string out = kDir + "/cli_oracle.txt";
    const int code =
        run_cli("oracle --kind kl --f \"gaussian(0,1)\" --g \"gaussian(1,1)\"", out);
    CHECK(code == 0);
    const std::string text = slurp(out);
    CHECK(text.find("0.5") != std::string::npos);
    CHECK(text.find("+/-") != std::string::npos);
    const double printed = std::stod(text);
    CHECK(std::fabs(printed - 0.5) <= 2e-9);
}

TEST_CASE("cli: usage and runtime error codes") {
    CHECK(run_cli("estimate --no-such-flag", kDir + "/cli_usage.txt") == 1);
    CHECK(run_cli("bogus-subcommand", kDir + "/cli_usage2.txt") == 1);
    const int code = run_cli("estimate --kind kl --f " + kDir + "/nope.csv --g \"beta(3,3)\"",
                             kDir + "/cli_missing.txt");
    CHECK(code == 2);
    const std::string err = slurp(kDir + "/cli_missing.txt.err");
    CHECK(err.find("nope.csv") != std::string::npos);
}

TEST_CASE("custom filter files reach the harness through the wavelet key") {
    // symmlet-8 taps written to a file must reproduce the builtin family
    const ScalingFilter sym = builtin_filter("symmlet-8");
    std::string taps;
    char buf[40];
    for (double h : sym.coefficients) {
        std::snprintf(buf, sizeof buf, "%.17g\n", h);
        taps += buf;
    }
    const std::string path = write_file("harness_filter.txt", taps);

    const auto sx = sample(Distribution::beta(2, 5), 500, 21);
    write_sample_csv(kDir + "/filt_x.csv", sx);
    StudyConfig c;
    c.mode = StudyMode::estimate;
    c.kind = "l2";
    c.f = kDir + "/filt_x.csv";
    c.g = "beta(3,3)";
    StudyConfig viafile = c;
    viafile.wavelet = "file:" + path;
    c.wavelet = "symmlet-8";
    const StudyReport builtin_run = run_study(c);
    const StudyReport file_run = run_study(viafile);
    CHECK(builtin_run.estimate->point == doctest::Approx(file_run.estimate->point).epsilon(1e-12));
}

TEST_CASE("cli: density dump emits the grid CSV") {
    const auto sx = sample(Distribution::beta(2, 5), 500, 3);
    write_sample_csv(kDir + "/dump_in.csv", sx);
    const std::string out = kDir + "/dump_out.csv";
    const int code = run_cli("density --f " + kDir + "/dump_in.csv --grid 0:1:64 --out " + out,
                             kDir + "/cli_density.txt");
    CHECK(code == 0);
    std::ifstream in(out);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,fn");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 64);
}

TEST_CASE("cli: same seed twice gives byte-identical reports") {
    const std::string args = "mc-study --kind kl --f \"beta(2,5)\" --g \"beta(3,3)\" --n 200 "
                             "--m 200 --replications 6 --quadrature-points 256 --seed 31 --out ";
    REQUIRE(run_cli(args + kDir + "/det_a.json", kDir + "/cli_det_a.txt") == 0);
    REQUIRE(run_cli(args + kDir + "/det_b.json", kDir + "/cli_det_b.txt") == 0);
    CHECK(strip_wall_clock(slurp(kDir + "/det_a.json")) ==
          strip_wall_clock(slurp(kDir + "/det_b.json")));
}
