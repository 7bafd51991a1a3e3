#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "hacomp/error.hpp"
#include "hacomp/stats.hpp"
#include "../support/oracle.hpp"

using namespace hacomp;
using namespace hacomp::stats;
using V = std::vector<double>;

// Student (1908) sleep data, extra hours of sleep under two drugs.
static const V kSleep1{0.7, -1.6, -0.2, -1.2, -0.1, 3.4, 3.7, 0.8, 0.0, 2.0};
static const V kSleep2{1.9, 0.8, 1.1, 0.1, -0.1, 4.4, 5.5, 1.6, 4.6, 3.4};

TEST_CASE("descriptive statistics") {
    const V x{1, 2, 3, 4, 5};
    CHECK(mean(x) == 3.0);
    CHECK(variance(x) == 2.5);
    CHECK(median(x) == 3.0);
    CHECK(median(V{4, 1, 3, 2}) == 2.5);
}

TEST_CASE("cohens_d") {
    CHECK(cohens_d(V{2, 4, 6, 8}, V{1, 3, 5, 7}) == doctest::Approx(0.3873).epsilon(1e-3));
    CHECK(cohens_d(V{1, 2, 3}, V{1, 2, 3}) == 0.0);
    CHECK(cohens_d(V{10, 12}, 11.0) == 0.0);
    CHECK(cohens_d(V{1, 3, 5, 7}, V{2, 4, 6, 8}) == doctest::Approx(-0.3873).epsilon(1e-3));
    CHECK_THROWS_AS(cohens_d(V{1, 1}, V{2, 2}), DegenerateError);
    CHECK_THROWS_AS(cohens_d(V{3, 3, 3}, 1.0), DegenerateError);
}

TEST_CASE("t_test") {
    SUBCASE("identical samples") {
        const auto r = t_test(V{1, 2, 3, 4, 5}, V{1, 2, 3, 4, 5});
        CHECK(r.statistic == 0.0);
        CHECK(r.p_value == doctest::Approx(1.0));
    }
    SUBCASE("constant one-sample at the reference") {
        const auto r = t_test(V(10, 163.08), 163.08);
        CHECK(r.p_value == 1.0);
    }
    SUBCASE("small two-sample case") {
        const auto r = t_test(V{5, 6, 7, 8}, V{1, 2, 3, 4});
        CHECK(r.statistic == doctest::Approx(4.381780460041329).epsilon(1e-9));
        CHECK(r.p_value == doctest::Approx(0.004659214943993936).epsilon(1e-6));
        REQUIRE(r.df);
        CHECK(*r.df == 6.0);
        CHECK(r.statistic == doctest::Approx(oracle::pooled_t({5, 6, 7, 8}, {1, 2, 3, 4})));
    }
    SUBCASE("sleep data, pooled and welch") {
        const auto r = t_test(kSleep1, kSleep2);
        CHECK(r.statistic == doctest::Approx(-1.8608134674868524).epsilon(1e-9));
        CHECK(std::abs(r.p_value - 0.07918671421593829) < 1e-6);
        const auto w = t_test(kSleep1, kSleep2, Variance::welch);
        CHECK(std::abs(w.p_value - 0.07939414018735823) < 1e-6);
        CHECK(*w.df == doctest::Approx(17.776473516178488).epsilon(1e-9));
    }
    SUBCASE("one-sample") {
        const auto r = t_test(V{1, 2, 3, 4, 5}, 2.0);
        CHECK(r.statistic == doctest::Approx(1.414213562373095));
        CHECK(r.p_value == doctest::Approx(0.23019964108049873).epsilon(1e-6));
        CHECK(r.test_name == TestName::t_one_sample);
    }
    SUBCASE("swapping negates t and d, keeps p") {
        const auto a = t_test(kSleep1, kSleep2);
        const auto b = t_test(kSleep2, kSleep1);
        CHECK(a.statistic == doctest::Approx(-b.statistic));
        CHECK(*a.effect_size_d == doctest::Approx(-*b.effect_size_d));
        CHECK(a.p_value == doctest::Approx(b.p_value));
    }
    SUBCASE("zero variance with a mean gap is degenerate") {
        CHECK_THROWS_AS(t_test(V{1, 1, 1}, V{2, 2, 2}), DegenerateError);
    }
    SUBCASE("too few observations") {
        CHECK_THROWS_AS(t_test(V{1}, V{1, 2}), ValidationError);
    }
}

TEST_CASE("mann_whitney_u") {
    SUBCASE("complete separation") {
        const auto r = mann_whitney_u(V{1, 2, 3}, V{4, 5, 6});
        CHECK(r.statistic == 0.0);
        CHECK(r.exact);
        CHECK(r.p_value == doctest::Approx(0.1));
    }
    SUBCASE("identical multisets") {
        const V a{1, 2, 3, 4};
        const auto r = mann_whitney_u(a, a);
        CHECK(r.statistic == doctest::Approx(8.0));
        CHECK(r.p_value == doctest::Approx(1.0));
    }
    SUBCASE("asymptotic path with ties") {
        const V a{1.1, 2.3, 2.3, 4.0, 5.5, 6.1, 7.7, 8.0};
        const V b{3.3, 4.4, 5.5, 9.1, 9.9, 10.2, 11.0};
        const auto r = mann_whitney_u(a, b);
        CHECK_FALSE(r.exact);
        CHECK(r.statistic == 12.5);
        CHECK(r.p_value == doctest::Approx(0.08203109391893869).epsilon(1e-6));
    }
    SUBCASE("exact path equals permutation enumeration") {
        std::mt19937_64 eng(4);
        std::uniform_int_distribution<int> val(0, 6);
        for (int na = 1; na <= 9; ++na) {
            for (int nb = 1; na + nb <= 10; ++nb) {
                for (int rep = 0; rep < 3; ++rep) {
                    V a, b;
                    for (int i = 0; i < na; ++i) a.push_back(val(eng));
                    for (int i = 0; i < nb; ++i) b.push_back(val(eng));
                    const auto r = mann_whitney_u(a, b, MwMethod::exact);
                    const auto o = oracle::permutation_mann_whitney(a, b);
                    CHECK(r.statistic == doctest::Approx(o.u_a));
                    CHECK(r.p_value == doctest::Approx(o.p).epsilon(1e-9));
                }
            }
        }
    }
    SUBCASE("normal approximation tracks the exact path on small samples") {
        std::mt19937_64 eng(77);
        std::normal_distribution<double> z(0.0, 1.0);
        for (int rep = 0; rep < 200; ++rep) {
            V a, b;
            for (int i = 0; i < 7; ++i) a.push_back(z(eng));
            for (int i = 0; i < 7; ++i) b.push_back(z(eng) + 0.5);
            const auto ex = mann_whitney_u(a, b, MwMethod::exact);
            const auto as = mann_whitney_u(a, b, MwMethod::asymptotic);
            CHECK(std::abs(ex.p_value - as.p_value) <= 0.05);
        }
    }
}

TEST_CASE("bonferroni") {
    CHECK(bonferroni(0.01, 4) == doctest::Approx(0.04));
    CHECK(bonferroni(0.4, 4) == 1.0);
    CHECK(bonferroni(0.05, 1) == 0.05);
    CHECK(bonferroni(1.0, 3) == 1.0);
    CHECK(bonferroni(0.02, 3) <= bonferroni(0.03, 3));
    CHECK(bonferroni(0.02, 3) <= bonferroni(0.02, 4));
    CHECK_THROWS_AS(bonferroni(0.1, 0), ValidationError);
    CHECK_THROWS_AS(bonferroni(1.5, 1), ValidationError);
}

TEST_CASE("mad_outliers") {
    const auto m = mad_outliers(V{1, 2, 3, 4, 100}, 3.0);
    CHECK(m == std::vector<bool>{false, false, false, false, true});
    CHECK(mad_outliers(V{5, 5, 5}, 3.0) == std::vector<bool>{false, false, false});
    CHECK(mad_outliers(V{1, 2, 3, 4, 5}, 3.0) == std::vector<bool>(5, false));
    CHECK(mad_outliers(V{5, 5, 5, 6}, 3.0) == std::vector<bool>{false, false, false, true});
    CHECK_THROWS_AS(mad_outliers(V{1, 2}, 3.0), ValidationError);

    const V x{0.3, 1.2, 2.2, 2.9, 3.1, 4.8, 40.0, -25.0};
    const auto base = mad_outliers(x, 3.0);
    for (double a : {2.0, -0.5, 1000.0}) {
        V y;
        for (double v : x) y.push_back(a * v + 17.0);
        CHECK(mad_outliers(y, 3.0) == base);
    }
}

TEST_CASE("sample_size") {
    PowerRequest req;
    const auto one = sample_size(req);
    CHECK(std::abs(one.per_group - 26) <= 1);
    CHECK(one.total == 2 * one.per_group);
    CHECK(achieved_power(req, one.per_group) >= 0.8);
    CHECK(achieved_power(req, one.per_group - 1) < 0.8);

    req.comparisons = 4;
    const auto t4 = sample_size(req);
    CHECK(t4.per_group == 37);

    req.design = PowerDesign::mann_whitney;
    const auto mw4 = sample_size(req);
    CHECK(mw4.total == 86);

    req.d = 0.65;
    const auto mw65 = sample_size(req);
    CHECK(std::abs(mw65.total - 128) <= 4);

    PowerRequest mono;
    int prev = 0;
    for (double p : {0.5, 0.8, 0.9, 0.95, 0.99, 0.999}) {
        mono.power = p;
        const int n = sample_size(mono).per_group;
        CHECK(n > prev);
        prev = n;
    }

    PowerRequest normal;
    normal.model = PowerModel::normal;
    const auto nn = sample_size(normal);
    CHECK(nn.per_group == 25);

    PowerRequest bad;
    bad.d = 0.0;
    CHECK_THROWS_AS(sample_size(bad), ValidationError);
    bad.d = 0.5;
    bad.alpha = 1.5;
    CHECK_THROWS_AS(sample_size(bad), ValidationError);
}

TEST_CASE("confidence intervals") {
    const auto ci = confidence_interval(V{1, 2, 3, 4, 5}, 0.95);
    CHECK(ci.lo == doctest::Approx(1.036756838522439).epsilon(1e-9));
    CHECK(ci.hi == doctest::Approx(4.9632431614775605).epsilon(1e-9));

    const auto flat = confidence_interval(V{7, 7, 7}, 0.95);
    CHECK(flat.lo == 7.0);
    CHECK(flat.hi == 7.0);

    const auto wide = confidence_interval(V{1, 2, 3, 4, 5}, 0.99);
    CHECK(wide.lo < ci.lo);
    CHECK(wide.hi > ci.hi);

    const auto b1 = bootstrap_interval(V{1, 2, 3, 4, 5, 6}, 0.95, 42, 1000);
    const auto b2 = bootstrap_interval(V{1, 2, 3, 4, 5, 6}, 0.95, 42, 1000);
    CHECK(b1.lo == b2.lo);
    CHECK(b1.hi == b2.hi);
    CHECK(b1.lo < 3.5);
    CHECK(b1.hi > 3.5);
}

TEST_CASE("distribution helpers") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054));
    CHECK(student_t_quantile(0.975, 4) == doctest::Approx(2.7764451051977987));
    CHECK(student_t_two_tailed_p(0.0, 5) == doctest::Approx(1.0));
}

TEST_CASE("test names") {
    CHECK(test_name_from_string("mann_whitney_u") == TestName::mann_whitney_u);
    CHECK(std::string(to_string(TestName::t_two_sample)) == "t_two_sample");
    CHECK_THROWS_AS(test_name_from_string("anova"), ValidationError);
}
