#include "hacomp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/non_central_t.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "hacomp/error.hpp"
#include "hacomp/rng.hpp"

namespace hacomp::stats {

namespace bm = boost::math;

const char* to_string(TestName name) {
    switch (name) {
        case TestName::t_two_sample: return "t_two_sample";
        case TestName::t_one_sample: return "t_one_sample";
        case TestName::welch_two_sample: return "welch_two_sample";
        case TestName::mann_whitney_u: return "mann_whitney_u";
    }
    return "unknown";
}

TestName test_name_from_string(const std::string& name) {
    if (name == "t_two_sample" || name == "t" || name == "student") return TestName::t_two_sample;
    if (name == "t_one_sample") return TestName::t_one_sample;
    if (name == "welch_two_sample" || name == "welch") return TestName::welch_two_sample;
    if (name == "mann_whitney_u" || name == "mann_whitney" || name == "mwu") {
        return TestName::mann_whitney_u;
    }
    throw ValidationError("unknown test '" + name + "'");
}

double normal_cdf(double z) { return bm::cdf(bm::normal_distribution<>(), z); }

double normal_quantile(double p) { return bm::quantile(bm::normal_distribution<>(), p); }

double student_t_quantile(double p, double df) {
    return bm::quantile(bm::students_t_distribution<>(df), p);
}

double student_t_two_tailed_p(double t, double df) {
    if (std::isnan(t)) return 1.0;
    const double tail = bm::cdf(bm::complement(bm::students_t_distribution<>(df), std::fabs(t)));
    return std::clamp(2.0 * tail, 0.0, 1.0);
}

double mean(std::span<const double> x) {
    if (x.empty()) throw ValidationError("mean of empty sample");
    // shifted by the first value so that a constant sample has an exact mean
    const double x0 = x.front();
    double s = 0.0;
    for (double v : x) s += v - x0;
    return x0 + s / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) throw ValidationError("variance needs at least 2 values");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

double median(std::span<const double> x) {
    if (x.empty()) throw ValidationError("median of empty sample");
    std::vector<double> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

namespace {

void require_size(std::span<const double> x, std::size_t n, const char* what) {
    if (x.size() < n) {
        throw ValidationError(std::string(what) + ": sample needs at least " + std::to_string(n) +
                              " values, got " + std::to_string(x.size()));
    }
}

double pooled_sd(std::span<const double> a, std::span<const double> b) {
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    return std::sqrt(((na - 1.0) * variance(a) + (nb - 1.0) * variance(b)) / (na + nb - 2.0));
}

}  // namespace

double cohens_d(std::span<const double> a, std::span<const double> b) {
    require_size(a, 2, "cohens_d");
    require_size(b, 2, "cohens_d");
    const double sd = pooled_sd(a, b);
    if (!(sd > 0.0)) throw DegenerateError("cohens_d: pooled standard deviation is zero");
    return (mean(a) - mean(b)) / sd;
}

double cohens_d(std::span<const double> a, double reference) {
    require_size(a, 2, "cohens_d");
    const double sd = stddev(a);
    if (!(sd > 0.0)) throw DegenerateError("cohens_d: standard deviation is zero");
    return (mean(a) - reference) / sd;
}

namespace {

// Zero spread on both sides: equal centres give "no evidence of a
// difference" (t = 0, p = 1, d = 0); otherwise the statistic is undefined.
TestResult no_spread_result(TestName name, double diff, std::size_t na, std::size_t nb) {
    if (diff != 0.0) {
        throw DegenerateError(std::string(to_string(name)) +
                              ": zero variance with a non-zero mean difference");
    }
    TestResult r;
    r.test_name = name;
    r.statistic = 0.0;
    r.p_value = 1.0;
    r.effect_size_d = 0.0;
    r.n_a = na;
    r.n_b = nb;
    return r;
}

}  // namespace

TestResult t_test(std::span<const double> a, std::span<const double> b, Variance var) {
    require_size(a, 2, "t_test");
    require_size(b, 2, "t_test");
    const TestName name =
        var == Variance::pooled ? TestName::t_two_sample : TestName::welch_two_sample;
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double diff = mean(a) - mean(b);
    const double va = variance(a);
    const double vb = variance(b);
    if (va == 0.0 && vb == 0.0) {
        auto r = no_spread_result(name, diff, a.size(), b.size());
        r.df = na + nb - 2.0;
        return r;
    }

    TestResult r;
    r.test_name = name;
    r.n_a = a.size();
    r.n_b = b.size();
    if (var == Variance::pooled) {
        const double df = na + nb - 2.0;
        const double sp = std::sqrt(((na - 1.0) * va + (nb - 1.0) * vb) / df);
        r.statistic = diff / (sp * std::sqrt(1.0 / na + 1.0 / nb));
        r.df = df;
    } else {
        const double sa = va / na;
        const double sb = vb / nb;
        r.statistic = diff / std::sqrt(sa + sb);
        r.df = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    }
    r.p_value = student_t_two_tailed_p(r.statistic, *r.df);
    r.effect_size_d = diff / pooled_sd(a, b);
    return r;
}

TestResult t_test(std::span<const double> a, double reference) {
    require_size(a, 2, "t_test");
    const double n = static_cast<double>(a.size());
    const double diff = mean(a) - reference;
    const double sd = stddev(a);
    if (sd == 0.0) {
        auto r = no_spread_result(TestName::t_one_sample, diff, a.size(), 0);
        r.df = n - 1.0;
        return r;
    }
    TestResult r;
    r.test_name = TestName::t_one_sample;
    r.n_a = a.size();
    r.statistic = diff / (sd / std::sqrt(n));
    r.df = n - 1.0;
    r.p_value = student_t_two_tailed_p(r.statistic, *r.df);
    r.effect_size_d = diff / sd;
    return r;
}

namespace {

struct Ranked {
    std::vector<long> doubled_ranks;  // 2 * midrank, always an integer
    long doubled_rank_sum_a = 0;
    double tie_term = 0.0;  // sum over tie groups of (t^3 - t)
};

Ranked rank_samples(std::span<const double> a, std::span<const double> b) {
    struct Item {
        double v;
        bool in_a;
    };
    std::vector<Item> items;
    items.reserve(a.size() + b.size());
    for (double v : a) items.push_back({v, true});
    for (double v : b) items.push_back({v, false});
    std::stable_sort(items.begin(), items.end(),
                     [](const Item& x, const Item& y) { return x.v < y.v; });

    Ranked out;
    out.doubled_ranks.resize(items.size());
    std::size_t i = 0;
    while (i < items.size()) {
        std::size_t j = i;
        while (j + 1 < items.size() && items[j + 1].v == items[i].v) ++j;
        // ranks i+1 .. j+1, midrank doubled = (i+1) + (j+1)
        const long doubled = static_cast<long>(i + j + 2);
        const double t = static_cast<double>(j - i + 1);
        out.tie_term += t * t * t - t;
        for (std::size_t k = i; k <= j; ++k) {
            out.doubled_ranks[k] = doubled;
            if (items[k].in_a) out.doubled_rank_sum_a += doubled;
        }
        i = j + 1;
    }
    return out;
}

// Exact null distribution of the doubled rank sum of a size-n_a subset,
// counted by dynamic programming over the pooled doubled ranks.
double exact_two_sided_p(const Ranked& ranked, std::size_t na) {
    const auto& r = ranked.doubled_ranks;
    const long max_sum = std::accumulate(r.begin(), r.end(), 0L);
    // ways[j][s]: subsets of size j with doubled rank sum s
    std::vector<std::vector<double>> ways(na + 1, std::vector<double>(max_sum + 1, 0.0));
    ways[0][0] = 1.0;
    for (long rank : r) {
        for (std::size_t j = na; j >= 1; --j) {
            auto& dst = ways[j];
            const auto& src = ways[j - 1];
            for (long s = max_sum; s >= rank; --s) dst[s] += src[s - rank];
        }
    }
    const auto& dist = ways[na];
    double total = 0.0, lower = 0.0, upper = 0.0;
    const long obs = ranked.doubled_rank_sum_a;
    for (long s = 0; s <= max_sum; ++s) {
        total += dist[s];
        if (s <= obs) lower += dist[s];
        if (s >= obs) upper += dist[s];
    }
    return std::min(1.0, 2.0 * std::min(lower, upper) / total);
}

}  // namespace

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                          MwMethod method) {
    require_size(a, 1, "mann_whitney_u");
    require_size(b, 1, "mann_whitney_u");
    for (double v : a) {
        if (std::isnan(v)) throw ValidationError("mann_whitney_u: NaN in sample");
    }
    for (double v : b) {
        if (std::isnan(v)) throw ValidationError("mann_whitney_u: NaN in sample");
    }
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const auto ranked = rank_samples(a, b);

    TestResult r;
    r.test_name = TestName::mann_whitney_u;
    r.n_a = a.size();
    r.n_b = b.size();
    r.statistic = static_cast<double>(ranked.doubled_rank_sum_a) / 2.0 - na * (na + 1.0) / 2.0;

    const bool use_exact = method == MwMethod::exact ||
                           (method == MwMethod::automatic && na * nb <= 20.0);
    if (use_exact) {
        r.exact = true;
        r.p_value = exact_two_sided_p(ranked, a.size());
    } else {
        const double n = na + nb;
        const double mu = na * nb / 2.0;
        const double var = na * nb / 12.0 * ((n + 1.0) - ranked.tie_term / (n * (n - 1.0)));
        if (var <= 0.0) {
            r.p_value = 1.0;
        } else {
            const double dev = std::max(0.0, std::fabs(r.statistic - mu) - 0.5);
            const double z = dev / std::sqrt(var);
            r.p_value = std::clamp(2.0 * (1.0 - normal_cdf(z)), 0.0, 1.0);
        }
    }

    if (a.size() >= 2 && b.size() >= 2) {
        const double sd = pooled_sd(a, b);
        if (sd > 0.0) {
            r.effect_size_d = (mean(a) - mean(b)) / sd;
        } else if (mean(a) == mean(b)) {
            r.effect_size_d = 0.0;
        }
    }
    return r;
}

double bonferroni(double p, int comparisons) {
    if (comparisons < 1) throw ValidationError("bonferroni: comparisons must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("bonferroni: p must lie in [0, 1]");
    return std::min(1.0, p * static_cast<double>(comparisons));
}

std::vector<bool> mad_outliers(std::span<const double> values, double threshold) {
    if (values.size() < 3) throw ValidationError("mad_outliers: needs at least 3 values");
    if (!(threshold > 0.0)) throw ValidationError("mad_outliers: threshold must be > 0");
    const double med = median(values);
    std::vector<double> dev(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) dev[i] = std::fabs(values[i] - med);
    const double mad = median(dev);

    std::vector<bool> flags(values.size(), false);
    if (mad == 0.0) {
        if (std::isfinite(threshold)) {
            for (std::size_t i = 0; i < values.size(); ++i) flags[i] = values[i] != med;
        }
        return flags;
    }
    const double scale = kMadScale * mad;
    for (std::size_t i = 0; i < values.size(); ++i) flags[i] = dev[i] / scale > threshold;
    return flags;
}

void validate(const PowerRequest& req) {
    if (!(req.d > 0.0) || !std::isfinite(req.d)) throw ValidationError("power: d must be > 0");
    if (!(req.alpha > 0.0 && req.alpha < 1.0)) throw ValidationError("power: alpha must lie in (0, 1)");
    if (!(req.power > 0.0 && req.power < 1.0)) throw ValidationError("power: power must lie in (0, 1)");
    if (req.comparisons < 1) throw ValidationError("power: comparisons must be >= 1");
    if (req.design == PowerDesign::mann_whitney && !(req.are > 0.0 && req.are <= 1.5)) {
        throw ValidationError("power: ARE must lie in (0, 1.5]");
    }
}

double achieved_power(const PowerRequest& req, int n) {
    validate(req);
    const double alpha = req.alpha / static_cast<double>(req.comparisons);
    const double nn = static_cast<double>(n);

    double ncp = 0.0;
    double df = 0.0;
    switch (req.design) {
        case PowerDesign::two_sample:
            ncp = req.d * std::sqrt(nn / 2.0);
            df = 2.0 * nn - 2.0;
            break;
        case PowerDesign::one_sample:
            ncp = req.d * std::sqrt(nn);
            df = nn - 1.0;
            break;
        case PowerDesign::mann_whitney:
            // t-test power with the sample size deflated by the ARE
            ncp = req.d * std::sqrt(nn * req.are / 2.0);
            df = 2.0 * nn * req.are - 2.0;
            break;
    }
    if (req.model == PowerModel::normal) {
        const double zc = normal_quantile(1.0 - alpha / 2.0);
        return normal_cdf(ncp - zc) + normal_cdf(-ncp - zc);
    }
    if (!(df > 0.0)) return 0.0;
    const double tc = student_t_quantile(1.0 - alpha / 2.0, df);
    const bm::non_central_t_distribution<> nct(df, ncp);
    return bm::cdf(bm::complement(nct, tc)) + bm::cdf(nct, -tc);
}

SampleSize sample_size(const PowerRequest& req) {
    validate(req);
    constexpr int kLimit = 10'000'000;
    // exponential search for an upper bound, then bisect
    int lo = 2;
    if (achieved_power(req, lo) >= req.power) {
        const int total = req.design == PowerDesign::one_sample ? lo : 2 * lo;
        return {lo, total, achieved_power(req, lo)};
    }
    int hi = lo;
    while (achieved_power(req, hi) < req.power) {
        lo = hi;
        hi *= 2;
        if (hi > kLimit) throw ConfigError("power: required sample size exceeds 10^7");
    }
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (achieved_power(req, mid) >= req.power) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    const int total = req.design == PowerDesign::one_sample ? hi : 2 * hi;
    return {hi, total, achieved_power(req, hi)};
}

Interval confidence_interval(std::span<const double> values, double level) {
    require_size(values, 2, "confidence_interval");
    if (!(level > 0.0 && level < 1.0)) throw ValidationError("confidence level must lie in (0, 1)");
    const double n = static_cast<double>(values.size());
    const double m = mean(values);
    const double se = stddev(values) / std::sqrt(n);
    if (se == 0.0) return {m, m};
    const double half = student_t_quantile((1.0 + level) / 2.0, n - 1.0) * se;
    return {m - half, m + half};
}

Interval bootstrap_interval(std::span<const double> values, double level, std::uint64_t seed,
                            int resamples) {
    require_size(values, 2, "bootstrap_interval");
    if (!(level > 0.0 && level < 1.0)) throw ValidationError("confidence level must lie in (0, 1)");
    if (resamples < 10) throw ValidationError("bootstrap needs at least 10 resamples");
    auto eng = make_stream(seed, 0xB007, 0);
    const std::size_t n = values.size();
    std::vector<double> means(static_cast<std::size_t>(resamples));
    for (auto& m : means) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(uniform01(eng) * static_cast<double>(n));
            s += values[std::min(k, n - 1)];
        }
        m = s / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    auto pick = [&](double q) {
        const double pos = q * static_cast<double>(means.size() - 1);
        const auto i = static_cast<std::size_t>(std::floor(pos));
        const auto j = std::min(i + 1, means.size() - 1);
        return means[i] + (pos - static_cast<double>(i)) * (means[j] - means[i]);
    };
    const double tail = (1.0 - level) / 2.0;
    return {pick(tail), pick(1.0 - tail)};
}

}  // namespace hacomp::stats
