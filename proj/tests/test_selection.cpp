#include "support.hpp"

#include <doctest.h>

using namespace neariso;

TEST_CASE("AIC of the saturated Gaussian fit") {
    std::vector<double> x{0.4, -1.0, 2.5, 0.1, 0.0};
    std::vector<double> w(x.size(), 1.0);
    Fit f = fit_generalized(x, w, Family::normal(), 0.0);
    double n = static_cast<double>(x.size());
    CHECK(aic(x, w, Family::normal(), f) == doctest::Approx(n * std::log(2.0 * M_PI) + 2.0 * n));
    CHECK(cp_gaussian(x, 1.0, f) == doctest::Approx(n));
}

TEST_CASE("Cp formula") {
    // residual norm^2 = 5, n = 10, K = 3
    std::vector<double> x(10, 0.0);
    Fit f;
    f.family = Family::normal();
    f.eta.assign(10, 0.0);
    f.eta[0] = 2.0;
    f.eta[1] = 1.0;
    f.theta = f.eta;
    f.pieces = 3;
    CHECK(cp_gaussian(x, 1.0, f) == doctest::Approx(1.0));
}

TEST_CASE("AIC decomposition and Cp equivalence") {
    std::mt19937_64 rng(19);
    auto x = testing::uniform_vec(rng, 30, -2.0, 2.0);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += 0.05 * static_cast<double>(i);
    std::vector<double> w(x.size(), 1.0);
    auto p = solve_path(x, w, Family::normal());
    auto ta = select_lambda(x, w, Family::normal(), p, Criterion::aic());
    auto tc = select_lambda(x, w, Family::normal(), p, Criterion::cp(1.0));
    REQUIRE(ta.entries.size() == p.knots.size());
    double shift = ta.entries[0].value - tc.entries[0].value;
    for (std::size_t k = 0; k < ta.entries.size(); ++k) {
        CHECK(ta.entries[k].lambda == p.knots[k].lambda);
        CHECK(ta.entries[k].value - tc.entries[k].value == doctest::Approx(shift).epsilon(1e-9));
        Fit f = fit_generalized(p, Family::normal(), ta.entries[k].lambda);
        double ll = log_likelihood(x, w, Family::normal(), f);
        CHECK(aic(x, w, Family::normal(), f) + 2.0 * ll - 2.0 * static_cast<double>(f.pieces) == doctest::Approx(0.0));
    }
    CHECK(ta.selected == tc.selected);

    // selection does not depend on evaluation order
    auto e = ta.entries;
    std::reverse(e.begin(), e.end());
    auto it = std::min_element(e.begin(), e.end(), [](const TraceEntry& a, const TraceEntry& b) {
        return a.value < b.value || (a.value == b.value && a.lambda < b.lambda);
    });
    CHECK(it->lambda == ta.selected_lambda());
}

TEST_CASE("ties select the smaller lambda") {
    // isotonic data: single knot; constant data: every knot gives the same fit
    auto p = solve_path({1.0, 1.0}, {1.0, 1.0}, Family::normal());
    auto t = select_lambda({1.0, 1.0}, {1.0, 1.0}, Family::normal(), p, Criterion::aic());
    CHECK(t.selected == 0);
    CHECK(t.selected_lambda() == 0.0);
}

TEST_CASE("resolve lambda") {
    std::vector<double> x{3, 1, 2, 0.5, 4}, w(5, 1.0);
    auto p = solve_path(x, w, Family::normal());
    CHECK(resolve_lambda(x, w, Family::normal(), p, Criterion::lambda(0.37)) == 0.37);
    double near = resolve_lambda(x, w, Family::normal(), p, Criterion::nearest_knot(0.37));
    auto ks = p.knot_lambdas();
    CHECK(std::find(ks.begin(), ks.end(), near) != ks.end());
}

TEST_CASE("grids and truths") {
    auto g = doubling_grid(3);
    CHECK(g == std::vector<double>{0, 1, 2, 4, 8});
    auto s = sawtooth(0.2, 0.8, 50, 100);
    REQUIRE(s.size() == 100);
    CHECK(s[0] == 0.2);
    CHECK(s[49] == doctest::Approx(0.8));
    CHECK(s[50] == 0.2);
}

TEST_CASE("degenerate bias study") {
    BiasStudyConfig c;
    c.family = Family::normal();
    c.weights.assign(5, 1.0);
    c.eta_true = {0.0, 0.5, 1.0, 1.5, 2.0};
    c.grid = {0.0};
    c.replications = 1;
    c.inner = 10;
    c.seed = 42;
    auto r = bias_study(c);
    REQUIRE(r.mean_aic.size() == 1);
    auto rng = replication_rng(42, 0);
    std::vector<double> x(5);
    for (std::size_t i = 0; i < 5; ++i) x[i] = sample(c.family, c.eta_true[i], 1.0, rng);
    Fit f = fit_generalized(x, c.weights, c.family, 0.0);
    CHECK(r.mean_aic[0] == doctest::Approx(aic(x, c.weights, c.family, f)).epsilon(1e-12));
}

TEST_CASE("bias study is reproducible and thread independent") {
    BiasStudyConfig c;
    c.family = Family::binomial();
    c.weights.assign(40, 20.0);
    c.eta_true = sawtooth(0.2, 0.8, 20, 40);
    c.grid = doubling_grid(6);
    c.replications = 40;
    c.inner = 20;
    c.seed = 9;
    auto a = bias_study(c);
    auto b = bias_study(c);
    c.threads = 4;
    auto t = bias_study(c);
    CHECK(a.mean_aic == b.mean_aic);
    CHECK(a.mean_2d == b.mean_2d);
    CHECK(a.mean_aic == t.mean_aic);
    CHECK(a.mean_2d == t.mean_2d);
    CHECK(a.replications == 40);
}

TEST_CASE("chi-square bias shrinks with degrees of freedom") {
    auto gap = [](double d) {
        BiasStudyConfig c;
        c.family = Family::chisq(d);
        c.weights.assign(100, d / 2.0);
        auto s = sawtooth(1.0, 10.0, 50, 100);
        for (double& v : s) v *= 2.0; // mean parameter is 2s
        c.eta_true = s;
        c.grid = doubling_grid(10);
        c.replications = 200;
        c.inner = 50;
        c.seed = 5;
        c.threads = 4;
        auto r = bias_study(c);
        auto k = static_cast<std::size_t>(std::min_element(r.mean_2d.begin(), r.mean_2d.end()) - r.mean_2d.begin());
        return std::abs(r.mean_aic[k] - r.mean_2d[k]);
    };
    CHECK(gap(10.0) < gap(2.0));
}
