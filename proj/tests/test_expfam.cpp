#include "support.hpp"

#include <doctest.h>

using namespace neariso;

namespace {
const Family kAll[] = {Family::normal(), Family::binomial(), Family::poisson(), Family::gamma(1.0)};

double random_theta(const Family& f, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    double t = u(rng);
    return f.kind == Kind::GammaScale ? -std::exp(t / 2.0) : t;
}
} // namespace

TEST_CASE("psi at reference points") {
    CHECK(psi(Family::normal(), 0.0) == 0.0);
    CHECK(psi(Family::poisson(), 0.0) == 1.0);
    CHECK(psi(Family::gamma(1.0), -1.0) == doctest::Approx(0.0));
    CHECK(psi(Family::binomial(), 0.0) == doctest::Approx(std::log(2.0)));
    CHECK_THROWS_AS(psi(Family::gamma(1.0), 0.5), DomainError);
}

TEST_CASE("mean map and its inverse") {
    CHECK(mean_map(Family::binomial(), 0.0) == 0.5);
    CHECK(mean_map(Family::normal(), 3.7) == 3.7);
    CHECK(mean_map(Family::gamma(1.0), -0.5) == 2.0);
    CHECK(mean_map_inv(Family::binomial(), 0.5) == doctest::Approx(0.0));
    CHECK(mean_map_inv(Family::gamma(1.0), 2.0) == -0.5);
    CHECK(mean_map_inv(Family::binomial(), 1.0) == INFINITY);
    CHECK(mean_map_inv(Family::binomial(), 0.0) == -INFINITY);
    CHECK(mean_map_inv(Family::poisson(), 0.0) == -INFINITY);
    CHECK_THROWS_AS(mean_map_inv(Family::poisson(), -0.1), DomainError);
    CHECK_THROWS_AS(mean_map_inv(Family::binomial(), 1.5), DomainError);
}

TEST_CASE("natural domains") {
    CHECK(natural_domain(Family::normal()).lower == -INFINITY);
    CHECK(natural_domain(Family::gamma(2.0)).upper == 0.0);
    CHECK(in_natural_domain(Family::poisson(), 40.0));
    CHECK_FALSE(in_natural_domain(Family::gamma(2.0), 0.0));
}

TEST_CASE("chi-square is gamma with half the degrees of freedom") {
    Family c = Family::chisq(5.0);
    CHECK(c.kind == Kind::GammaScale);
    CHECK(c.shape == 2.5);
    CHECK(c.default_weight() == 2.5);
    CHECK(kind_from_string("chisq") == Kind::GammaScale);
    CHECK_THROWS_AS(kind_from_string("nosuch"), DomainError);
}

TEST_CASE("log densities at reference points") {
    double lc = std::lgamma(11.0) - 2.0 * std::lgamma(6.0);
    CHECK(log_density(Family::binomial(), 5.0, 0.5, 10.0) == doctest::Approx(lc - 10.0 * std::log(2.0)).epsilon(1e-13));
    CHECK(log_density(Family::poisson(), 0.0, 0.0, 1.0) == 0.0);
    // chi-square d=2, s=1: exponential with mean 2; the mean parameter is 2s
    CHECK(log_density(Family::chisq(2.0), 2.0, 2.0, 1.0) == doctest::Approx(std::log(0.5) - 1.0).epsilon(1e-13));
    // binomial boundary fits stay finite when x matches
    CHECK(log_density(Family::binomial(), 10.0, 1.0, 10.0) == doctest::Approx(0.0));
    CHECK(log_density(Family::binomial(), 9.0, 1.0, 10.0) == -INFINITY);
}

TEST_CASE("support checks") {
    CHECK_THROWS_AS(check_support(Family::binomial(), 11.0, 10.0), SupportError);
    CHECK_THROWS_AS(check_support(Family::binomial(), 2.5, 10.0), SupportError);
    CHECK_THROWS_AS(check_support(Family::poisson(), -1.0, 1.0), SupportError);
    CHECK_THROWS_AS(check_support(Family::gamma(1.0), 0.0, 1.0), SupportError);
    CHECK_NOTHROW(check_support(Family::binomial(), 0.0, 10.0));
}

TEST_CASE("round trip and convexity over random parameters") {
    std::mt19937_64 rng(11);
    for (const Family& f : kAll) {
        for (int k = 0; k < 1000; ++k) {
            double t = random_theta(f, rng);
            double back = mean_map_inv(f, mean_map(f, t));
            REQUIRE(std::abs(back - t) <= 1e-10 * (1.0 + std::abs(t)));
            double u = random_theta(f, rng);
            double a = std::min(t, u), b = std::max(t, u);
            if (a == b) continue;
            CHECK(psi(f, 0.5 * (a + b)) <= 0.5 * (psi(f, a) + psi(f, b)) + 1e-15 * (1.0 + std::abs(psi(f, a))));
            CHECK(mean_map(f, a) <= mean_map(f, b));
        }
    }
}

TEST_CASE("binomial and poisson probabilities sum to one") {
    for (int N = 1; N <= 20; ++N) {
        for (double p : {0.05, 0.3, 0.5, 0.9}) {
            double s = 0.0;
            for (int x = 0; x <= N; ++x) s += std::exp(log_density(Family::binomial(), x, p, N));
            CHECK(std::abs(s - 1.0) <= 1e-12);
        }
    }
    for (double m : {0.1, 1.0, 7.5, 30.0}) {
        double s = 0.0;
        for (int x = 0; x < 400; ++x) s += std::exp(log_density(Family::poisson(), x, m, 1.0));
        CHECK(s >= 1.0 - 1e-10);
    }
}

TEST_CASE("gamma density integrates to one") {
    // Simpson on a log-spaced grid, shape 2.5, mean 3
    const Family f = Family::gamma(2.5);
    const int n = 20000;
    double a = std::log(1e-8), b = std::log(200.0), h = (b - a) / n, s = 0.0;
    for (int i = 0; i <= n; ++i) {
        double u = a + i * h, x = std::exp(u);
        double g = std::exp(log_density(f, x, 3.0, 2.5)) * x;
        s += g * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    CHECK(s * h / 3.0 == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("samplers") {
    std::mt19937_64 rng(5);
    CHECK_THROWS_AS(sample(Family::binomial(), 1.0, 1.0, rng), DomainError);
    double p = sample(Family::poisson(), 4.0, 1.0, rng);
    CHECK(p >= 0.0);
    CHECK(p == std::floor(p));

    // chi-square d=5, s=1: mean parameter 2, weight 2.5, sample mean 5
    std::mt19937_64 r2(7);
    double s = 0.0;
    const int m = 1000000;
    for (int i = 0; i < m; ++i) s += sample(Family::chisq(5.0), 2.0, 2.5, r2);
    CHECK(std::abs(s / m - 5.0) <= 0.02);

    std::mt19937_64 a(99), b(99);
    for (int i = 0; i < 50; ++i) CHECK(sample(Family::binomial(), 0.3, 20.0, a) == sample(Family::binomial(), 0.3, 20.0, b));
}
