#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hacomp::stats {

enum class TestName { t_two_sample, t_one_sample, welch_two_sample, mann_whitney_u };

const char* to_string(TestName name);
TestName test_name_from_string(const std::string& name);

// All reported tests are two-tailed.
struct TestResult {
    TestName test_name = TestName::t_two_sample;
    double statistic = 0.0;
    double p_value = 1.0;
    std::optional<double> p_adjusted;
    std::optional<double> effect_size_d;
    std::optional<double> df;  // t tests only
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    bool exact = false;  // Mann-Whitney: exact distribution used
};

double mean(std::span<const double> x);
// Sample variance (n - 1 denominator).
double variance(std::span<const double> x);
double stddev(std::span<const double> x);
double median(std::span<const double> x);

// Two-sample Cohen's d with the (n - 1)-weighted pooled SD. Throws
// DegenerateError when the pooled SD is zero.
double cohens_d(std::span<const double> a, std::span<const double> b);
// One-sample d against a reference value.
double cohens_d(std::span<const double> a, double reference);

enum class Variance { pooled, welch };

// Student's two-sample t test (pooled variance by default).
TestResult t_test(std::span<const double> a, std::span<const double> b,
                  Variance variance = Variance::pooled);
// One-sample t test against `reference`.
TestResult t_test(std::span<const double> a, double reference);

enum class MwMethod { automatic, exact, asymptotic };

// U is reported for sample `a`: U_a = R_a - n_a (n_a + 1) / 2. The automatic
// method uses the exact null distribution when n_a * n_b <= 20 and the
// tie-corrected normal approximation with continuity correction otherwise.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                          MwMethod method = MwMethod::automatic);

double bonferroni(double p, int comparisons);

// Flags x with |x - median| / (1.4826 * MAD) > threshold. When MAD is zero
// every value different from the median is flagged (finite threshold only).
std::vector<bool> mad_outliers(std::span<const double> values, double threshold = 3.0);

inline constexpr double kMadScale = 1.4826;

enum class PowerDesign { two_sample, one_sample, mann_whitney };
enum class PowerModel { noncentral_t, normal };

// Minimum asymptotic relative efficiency of the Wilcoxon-Mann-Whitney test
// relative to the t test (Hodges-Lehmann bound, 108/125).
inline constexpr double kMinAre = 0.864;

struct PowerRequest {
    double d = 0.8;
    double alpha = 0.05;
    double power = 0.8;
    int comparisons = 1;
    PowerDesign design = PowerDesign::two_sample;
    PowerModel model = PowerModel::noncentral_t;
    double are = kMinAre;  // mann_whitney design only
};

struct SampleSize {
    int per_group = 0;
    int total = 0;
    double achieved_power = 0.0;
};

void validate(const PowerRequest& req);
// Power at `n` per group (or `n` subjects for one-sample).
double achieved_power(const PowerRequest& req, int n);
// Smallest n with achieved_power >= req.power.
SampleSize sample_size(const PowerRequest& req);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// mean +- t_{(1+level)/2, n-1} * SE
Interval confidence_interval(std::span<const double> values, double level = 0.95);
// Percentile bootstrap of the mean, fixed seed.
Interval bootstrap_interval(std::span<const double> values, double level, std::uint64_t seed,
                            int resamples = 2000);

// Distribution helpers shared with the simulator and tests.
double normal_cdf(double z);
double normal_quantile(double p);
double student_t_quantile(double p, double df);
double student_t_two_tailed_p(double t, double df);

}  // namespace hacomp::stats
