#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "sdm1/numerics.hpp"

using namespace sdm1;

TEST_CASE("find_root_bracketed solves known roots") {
    const auto sq2 = [](double x) { return x * x - 2.0; };
    const RootResult r1 = find_root_bracketed(sq2, make_bracket(sq2, 1.0, 2.0));
    CHECK(r1.converged);
    CHECK(r1.x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    const auto identity = [](double x) { return x; };
    const RootResult r2 =
        find_root_bracketed(identity, make_bracket(identity, -1.0, 1.0));
    CHECK(r2.converged);
    CHECK(std::abs(r2.x) < 1e-12);

    // independent oracle: exp evaluated at the returned root recovers 5
    const auto exp5 = [](double x) { return std::exp(x) - 5.0; };
    const RootResult r3 = find_root_bracketed(exp5, make_bracket(exp5, 0.0, 3.0));
    CHECK(r3.converged);
    CHECK(std::abs(std::exp(r3.x) - 5.0) < 5e-11);
    CHECK(r3.x == doctest::Approx(1.6094379124341003).epsilon(1e-12));
}

TEST_CASE("find_root_bracketed rejects invalid brackets") {
    const auto positive = [](double x) { return x * x + 1.0; };
    CHECK_THROWS_AS(make_bracket(positive, 1.0, 2.0), NoSignChange);
    CHECK_THROWS_AS(find_root_bracketed(positive, Bracket{1.0, 2.0, 2.0, 5.0}),
                    NoSignChange);
    CHECK_THROWS_AS(find_root_bracketed(positive, Bracket{2.0, 1.0, -1.0, 1.0}),
                    NoSignChange);

    const auto sqrt_shift = [](double x) { return std::sqrt(x) - 0.5; };
    CHECK_THROWS_AS(make_bracket(sqrt_shift, -1.0, 1.0), NonFiniteEval);

    const auto nan_inside = [](double x) {
        if (x > 0.2 && x < 0.8) return std::numeric_limits<double>::quiet_NaN();
        return x < 0.5 ? -1.0 : 1.0;
    };
    CHECK_THROWS_AS(
        find_root_bracketed(nan_inside, Bracket{0.0, 1.0, -1.0, 1.0}),
        NonFiniteEval);
}

TEST_CASE("find_root_bracketed flags exhausted iterations") {
    RootConfig cfg;
    cfg.max_iter = 3;
    cfg.abs_tol_x = 1e-300;
    cfg.rel_tol_x = 0.0;
    cfg.abs_tol_f = 0.0;
    const auto f = [](double x) { return std::tanh(50.0 * (x - 0.3217)); };
    const RootResult res = find_root_bracketed(f, make_bracket(f, 0.0, 1.0), cfg);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations == 3);
    CHECK(std::isfinite(res.x));
    CHECK(res.x > 0.0);
    CHECK(res.x < 1.0);
}

TEST_CASE("find_root_bracketed never evaluates outside the bracket") {
    double min_x = 1e300, max_x = -1e300;
    const auto f = [&](double x) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        return std::tanh(100.0 * (x - 0.3)) + 1e-4;
    };
    const RootResult res = find_root_bracketed(f, make_bracket(f, -2.0, 2.0));
    CHECK(res.converged);
    CHECK(min_x >= -2.0);
    CHECK(max_x <= 2.0);
    // a bracket endpoint still straddles the root
    const double f_root = std::tanh(100.0 * (res.x - 0.3)) + 1e-4;
    const double f_lo = std::tanh(100.0 * (-2.0 - 0.3)) + 1e-4;
    const double f_hi = std::tanh(100.0 * (2.0 - 0.3)) + 1e-4;
    CHECK((f_lo * f_root <= 0.0 || f_root * f_hi <= 0.0));
}

TEST_CASE("solve_linear_3x3 basic systems") {
    const Mat3 identity{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    const Vec3 x1 = solve_linear_3x3(identity, {1, 2, 3});
    CHECK(x1[0] == doctest::Approx(1.0));
    CHECK(x1[1] == doctest::Approx(2.0));
    CHECK(x1[2] == doctest::Approx(3.0));

    const Mat3 diag{{{2, 0, 0}, {0, 4, 0}, {0, 0, 8}}};
    const Vec3 x2 = solve_linear_3x3(diag, {2, 4, 8});
    for (double v : x2) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

    const Mat3 singular{{{1, 2, 3}, {2, 4, 6}, {0, 1, 1}}};
    CHECK_THROWS_AS(solve_linear_3x3(singular, {1, 1, 1}), SingularMatrix);
}

TEST_CASE("solve_linear_3x3 residuals on random well-conditioned systems") {
    std::mt19937 rng(20240517);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        Mat3 m{};
        Vec3 b{};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) m[i][j] = dist(rng);
            m[i][i] += (m[i][i] < 0 ? -4.0 : 4.0);  // diagonal dominance
            b[i] = dist(rng);
        }
        const Vec3 x = solve_linear_3x3(m, b);
        double resid = 0.0, scale = 1.0;
        for (int i = 0; i < 3; ++i) {
            double row = -b[i];
            for (int j = 0; j < 3; ++j) row += m[i][j] * x[j];
            resid = std::max(resid, std::abs(row));
            scale = std::max(scale, std::abs(b[i]));
        }
        worst = std::max(worst, resid / scale);
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("exp_rescaled factors out the largest exponent") {
    {
        const double e[] = {0.0, 0.0};
        const double w[] = {1.0, -1.0};
        const ScaledSum s = exp_rescaled(e, w);
        CHECK(s.value == 0.0);
        CHECK(s.scale == 0.0);
    }
    {
        const double e[] = {1000.0, 999.0};
        const double w[] = {1.0, 1.0};
        const ScaledSum s = exp_rescaled(e, w);
        CHECK(s.scale == 1000.0);
        CHECK(s.value == doctest::Approx(1.0 + std::exp(-1.0)).epsilon(1e-15));
        CHECK(std::isfinite(s.value));
    }
    {
        const double e[] = {0.0};
        const double w[] = {3.0};
        const ScaledSum s = exp_rescaled(e, w);
        CHECK(s.value == 3.0);
        CHECK(s.scale == 0.0);
    }
}

TEST_CASE("exp_rescaled matches the naive sum below the overflow line") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> exp_dist(-50.0, 690.0);
    std::uniform_real_distribution<double> w_dist(-10.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> e(4), w(4);
        for (int i = 0; i < 4; ++i) {
            e[i] = exp_dist(rng);
            w[i] = w_dist(rng);
        }
        const ScaledSum s = exp_rescaled(e, w);
        double naive = 0.0;
        for (int i = 0; i < 4; ++i) naive += w[i] * std::exp(e[i]);
        const double reconstructed = s.value * std::exp(s.scale);
        CHECK(reconstructed ==
              doctest::Approx(naive).epsilon(1e-12).scale(std::abs(naive)));
    }
}

TEST_CASE("exp_rescaled rejects bad input") {
    const double e1[] = {1.0};
    const double w2[] = {1.0, 2.0};
    CHECK_THROWS_AS(exp_rescaled({e1, 1}, {w2, 2}), ValidationError);
    CHECK_THROWS_AS(exp_rescaled(std::span<const double>{},
                                 std::span<const double>{}),
                    ValidationError);
    const double bad[] = {std::numeric_limits<double>::quiet_NaN()};
    const double w1[] = {1.0};
    CHECK_THROWS_AS(exp_rescaled(bad, w1), ValidationError);
}

TEST_CASE("count_sign_changes counts transversal crossings") {
    const auto f = [](double x) { return std::sin(x); };
    CHECK(count_sign_changes(f, 0.1, 10.0, 1000) == 3);
    const auto g = [](double x) { return x * x + 1.0; };
    CHECK(count_sign_changes(g, -5.0, 5.0, 100) == 0);
}
