#include <doctest.h>

#include <cmath>
#include <vector>

#include "wavediv/scaling_filter.hpp"
#include "wavediv/scaling_table.hpp"

using namespace wavediv;

namespace {

// deterministic grid of non-dyadic points inside [lo, hi]
std::vector<double> irrational_grid(double lo, double hi, int count) {
    std::vector<double> g;
    g.reserve(count);
    for (int i = 0; i < count; ++i) {
        double t = std::fmod(0.5 + i * 0.6180339887498949, 1.0);
        g.push_back(lo + t * (hi - lo));
    }
    return g;
}

double partition_of_unity(const ScalingFunctionTable& table, double x) {
    const double W = table.support_width();
    double acc = 0.0;
    const long k0 = static_cast<long>(std::floor(x - W)) + 1;
    const long k1 = static_cast<long>(std::floor(x));
    for (long k = k0; k <= k1; ++k) acc += table(x - static_cast<double>(k));
    return acc;
}

} // namespace

TEST_CASE("builtin filters satisfy the tap identities") {
    for (const char* name :
         {"haar", "daubechies-2", "daubechies-4", "daubechies-6", "daubechies-8", "symmlet-8"}) {
        const ScalingFilter f = builtin_filter(name);
        CHECK_NOTHROW(validate_filter(f));
        double sum = 0.0;
        for (double h : f.coefficients) sum += h;
        CHECK(std::fabs(sum - std::sqrt(2.0)) < 1e-12);
    }
    CHECK_THROWS_AS(builtin_filter("coiflet-6"), std::invalid_argument);
}

TEST_CASE("malformed filters are refused") {
    ScalingFilter bad;
    bad.family_id = "bad";
    bad.coefficients = {0.9, 0.5142135623730951}; // sums to sqrt2 but not orthonormal
    CHECK_THROWS_AS(validate_filter(bad), std::invalid_argument);
    CHECK_THROWS_AS(build_scaling_table(bad, 10), std::invalid_argument);
}

TEST_CASE("haar table is the unit indicator") {
    const auto table = build_scaling_table(builtin_filter("haar"), 10);
    CHECK((*table)(0.5) == doctest::Approx(1.0));
    CHECK((*table)(0.0) == doctest::Approx(1.0));
    CHECK((*table)(0.25) == doctest::Approx(1.0));
    CHECK((*table)(1.0) == 0.0);
    CHECK((*table)(-0.1) == 0.0);
    CHECK((*table)(table->support_end() + 1.0) == 0.0);
    CHECK(table_mass(*table) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("daubechies-4 integer values match the eigenvector") {
    const auto table = build_scaling_table(builtin_filter("daubechies-4"), 12);
    // phi(1) = (1+sqrt3)/2, phi(2) = (1-sqrt3)/2 solve the refinement
    // eigenproblem with sum 1
    CHECK((*table)(1.0) == doctest::Approx((1.0 + std::sqrt(3.0)) / 2.0).epsilon(1e-12));
    CHECK((*table)(2.0) == doctest::Approx((1.0 - std::sqrt(3.0)) / 2.0).epsilon(1e-12));
    CHECK((*table)(0.0) == doctest::Approx(0.0));
    CHECK(table->support_end() == doctest::Approx(3.0));
}

TEST_CASE("partition of unity on a 1000-point grid (daubechies-4, depth 12)") {
    const auto table = build_scaling_table(builtin_filter("daubechies-4"), 12);
    double worst = 0.0;
    for (double x : irrational_grid(-0.7, 4.3, 1000)) {
        worst = std::max(worst, std::fabs(partition_of_unity(*table, x) - 1.0));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("unit mass and shift orthonormality from the table grid") {
    const auto table = build_scaling_table(builtin_filter("daubechies-4"), 12);
    CHECK(std::fabs(table_mass(*table) - 1.0) <= 1e-8);
    for (int k = 0; k <= 3; ++k) {
        const double target = k == 0 ? 1.0 : 0.0;
        CHECK(std::fabs(shift_product_integral(*table, k) - target) <= 1e-4);
    }
}

TEST_CASE("kernel identities") {
    const auto haar = build_scaling_table(builtin_filter("haar"), 10);
    CHECK(kernel(*haar, 0.25, 0.25) == doctest::Approx(1.0));
    CHECK(kernel(*haar, 0.25, 1.5) == 0.0);

    const auto db4 = build_scaling_table(builtin_filter("daubechies-4"), 12);
    const double W = db4->support_width();
    // symmetric and zero past the support width
    for (double x : irrational_grid(0.0, 3.0, 25)) {
        for (double y : irrational_grid(-1.0, 2.0, 25)) {
            CHECK(kernel(*db4, x, y) == kernel(*db4, y, x));
            CHECK(kernel(*db4, x, y + W + 1.0 + x) == 0.0);
            CHECK(std::fabs(kernel(*db4, x, y)) <= db4->majorant_bound());
        }
    }
}

TEST_CASE("kernel_at_level scales exactly") {
    const auto haar = build_scaling_table(builtin_filter("haar"), 10);
    CHECK(kernel_at_level(*haar, 3, 0.1, 0.1) == doctest::Approx(8.0));
    const auto db4 = build_scaling_table(builtin_filter("daubechies-4"), 12);
    for (double x : irrational_grid(0.0, 1.0, 10)) {
        CHECK(kernel_at_level(*db4, 0, x, 0.3) == kernel(*db4, x, 0.3));
        CHECK(kernel_at_level(*db4, 4, x, 0.3) == 16.0 * kernel(*db4, 16.0 * x, 16.0 * 0.3));
    }
}

TEST_CASE("kernel integrates to one in each variable") {
    const auto db4 = build_scaling_table(builtin_filter("daubechies-4"), 12);
    const double W = db4->support_width();
    // trapezoid on the table-aligned dyadic lattice, where the interpolated
    // kernel is piecewise linear with breakpoints at the nodes
    const double h = std::ldexp(1.0, -db4->depth());
    for (double x : {0.37, 1.7, 2.9}) {
        const long a = static_cast<long>(std::floor((x - W) / h)) - 1;
        const long b = static_cast<long>(std::ceil((x + W) / h)) + 1;
        double acc = 0.0;
        for (long i = a; i <= b; ++i) {
            double term = kernel(*db4, x, static_cast<double>(i) * h);
            if (i == a || i == b) term *= 0.5;
            acc += term;
        }
        CHECK(std::fabs(acc * h - 1.0) <= 1e-5);
    }
}

TEST_CASE("level kernel keeps unit mass in each variable") {
    const auto db4 = build_scaling_table(builtin_filter("daubechies-4"), 12);
    const int j = 3;
    const double W = db4->support_width();
    const double h = std::ldexp(1.0, -(j + db4->depth()));
    for (double x : {0.11, 0.52}) {
        const double reach = W * std::ldexp(1.0, -j);
        const long a = static_cast<long>(std::floor((x - reach) / h)) - 1;
        const long b = static_cast<long>(std::ceil((x + reach) / h)) + 1;
        double acc = 0.0;
        for (long i = a; i <= b; ++i) {
            double term = kernel_at_level(*db4, j, x, static_cast<double>(i) * h);
            if (i == a || i == b) term *= 0.5;
            acc += term;
        }
        CHECK(std::fabs(acc * h - 1.0) <= 1e-5);
    }
}

TEST_CASE("projection refuses a degenerate quadrature resolution") {
    const auto db4 = build_scaling_table(builtin_filter("daubechies-4"), 8);
    CHECK_THROWS_AS(project(db4, 3, [](double) { return 1.0; }, {0.0, 1.0}, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(project(db4, 3, [](double) { return 1.0; }, {0.0, 1.0}, 9),
                    std::invalid_argument);
}

TEST_CASE("projection reproduces constants and linears (daubechies-4)") {
    const auto db4 = build_scaling_table(builtin_filter("daubechies-4"), 12);
    const int j = 3;
    const auto one = project(db4, j, [](double) { return 1.0; }, {-2.0, 3.0});
    const auto ident = project(db4, j, [](double y) { return y; }, {-2.0, 3.0});
    for (double x : irrational_grid(0.0, 1.0, 20)) {
        CHECK(std::fabs(one(x) - 1.0) <= 1e-5);
        CHECK(std::fabs(ident(x) - x) <= 1e-4);
    }
}

TEST_CASE("projection error decreases with the level for a Lipschitz target") {
    const auto db4 = build_scaling_table(builtin_filter("daubechies-4"), 12);
    const auto h = [](double y) { return std::fabs(std::sin(3.0 * y)) + 0.2 * y; };
    double prev = 1e9;
    for (int j : {2, 4, 6}) {
        const auto kj = project(db4, j, h, {-1.0, 2.0});
        double sup = 0.0;
        for (double x : irrational_grid(0.2, 0.8, 200)) {
            sup = std::max(sup, std::fabs(kj(x) - h(x)));
        }
        CHECK(sup < prev);
        prev = sup;
    }
}

TEST_CASE("custom filter file loads and builds") {
    const std::string path = std::string(WAVEDIV_TEST_DIR) + "/custom_filter.txt";
    {
        FILE* f = std::fopen(path.c_str(), "w");
        REQUIRE(f != nullptr);
        const ScalingFilter db4 = builtin_filter("daubechies-4");
        std::fprintf(f, "# daubechies-4 taps\n");
        for (double h : db4.coefficients) std::fprintf(f, "%.17g\n", h);
        std::fclose(f);
    }
    const ScalingFilter loaded = load_filter_file(path);
    const auto table = build_scaling_table(loaded, 8);
    CHECK((*table)(1.0) == doctest::Approx((1.0 + std::sqrt(3.0)) / 2.0).epsilon(1e-10));
}
