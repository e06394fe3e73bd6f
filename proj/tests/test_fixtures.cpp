// Reproduction of the bundled reference fits.
#include "support.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace neariso;
using testing::kData;
using testing::max_abs_diff;

namespace {
// Reference curves are plain numeric CSV with their own headers.
std::vector<double> column(const std::string& file, const std::string& name) {
    std::ifstream in(kData + "/" + file);
    REQUIRE(in);
    std::string line;
    std::vector<std::string> head;
    std::vector<double> out;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) f.push_back(c);
        if (head.empty()) {
            head = f;
            continue;
        }
        auto at = std::find(head.begin(), head.end(), name) - head.begin();
        REQUIRE(static_cast<std::size_t>(at) < f.size());
        out.push_back(std::stod(f[static_cast<std::size_t>(at)]));
    }
    return out;
}

double knot_near(const SolutionPath& p, double target, double scale = 1.0) {
    double best = p.knots.front().lambda;
    for (double k : p.knot_lambdas())
        if (std::abs(k / scale - target) < std::abs(best / scale - target)) best = k;
    return best;
}
} // namespace

TEST_CASE("gaussian isotonic and nearly isotonic fits") {
    auto x = column("gaussian.csv", "value");
    auto p = solve_path(WeightedSeries::unit(x));
    auto iso = expand(isotonic_fit(WeightedSeries::unit(x)), x.size());
    CHECK(max_abs_diff(iso, column("gaussian_isotonic.csv", "value")) <= 1e-9);
    for (int i = 3; i < 10; ++i) CHECK(iso[i] == doctest::Approx(0.573791).epsilon(1e-6));
    double k = knot_near(p, 3.68);
    CHECK(k == doctest::Approx(3.684408).epsilon(1e-6));
    CHECK(max_abs_diff(fit_at(p, k).eta, column("gaussian_neariso.csv", "value")) <= 1e-9);
}

TEST_CASE("binomial panels") {
    Dataset d = read_dataset(kData + "/binomial.csv");
    auto p = solve_path(d.value, d.weight, Family::binomial());
    CHECK(p.terminal_lambda() / 10.0 == doctest::Approx(5.05283018867925).epsilon(1e-12));
    auto f = fit_generalized(p, Family::binomial(), knot_near(p, 0.604, 10.0));
    CHECK(max_abs_diff(f.eta, column("binomial_fit_0.604.csv", "value")) <= 1e-9);
    auto t = fit_generalized(p, Family::binomial(), p.terminal_lambda());
    for (int i = 23; i < 76; ++i) CHECK(std::abs(t.eta[i] - 0.49433962264150955) <= 1e-12);
    CHECK(max_abs_diff(t.eta, column("binomial_fit_5.05.csv", "value")) <= 1e-9);
    auto s = fit_generalized(p, Family::binomial(), knot_near(p, 0.2, 10.0));
    CHECK(max_abs_diff(s.eta, column("binomial_fit_0.200.csv", "value")) <= 1e-9);
}

TEST_CASE("chi-square panels") {
    Dataset d = read_dataset(kData + "/chisq.csv");
    auto p = solve_path(d.value, d.weight, Family::chisq(5.0));
    for (auto [target, file] : {std::pair{270.04, "chisq_fit_270.04.csv"}, std::pair{80.68, "chisq_fit_80.68.csv"},
                                std::pair{39.55, "chisq_fit_39.55.csv"}}) {
        auto f = fit_generalized(p, Family::chisq(5.0), knot_near(p, target));
        std::vector<double> s(f.eta.size());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = f.eta[i] / 2.0;
        CHECK(max_abs_diff(s, column(file, "value")) <= 1e-9);
    }
}

TEST_CASE("sunspot spectrum fit") {
    Dataset d = read_dataset(kData + "/sunspot_periodogram.csv");
    auto f = spectrum_fit(periodogram_from_ordinates(d.value, 98), Criterion::aic());
    auto ref = column("sunspot_fit.csv", "logfit");
    REQUIRE(ref.size() == f.fitted.size());
    double e = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) e = std::max(e, std::abs(std::log(f.fitted[i]) - ref[i]));
    CHECK(e <= 1e-6);
}

TEST_CASE("MLDA reference fit is a knot of the Poisson path") {
    Dataset d = read_dataset(kData + "/mlda.csv");
    auto ref = column("mlda_fit.csv", "fit");
    auto p = solve_path(d.value, d.weights_or(1.0), Family::poisson(), Direction::Decreasing);
    double best = INFINITY;
    for (double k : p.knot_lambdas()) best = std::min(best, max_abs_diff(fit_at(p, k).eta, ref));
    CHECK(best <= 1e-6);
}
