#pragma once

// Closed-form confusion-matrix algebra for a binary damage detector operating
// on a population with a known base rate of damage.

#include <cstdint>
#include <string>
#include <type_traits>

#include "baserate/probability.hpp"

namespace baserate {

/// Conditional performance of a detector: P(flag | damaged) and P(flag | intact).
class DetectorProfile {
public:
    DetectorProfile(double tpr, double fpr)
        : tpr_(tpr, "tpr"), fpr_(fpr, "fpr") {}
    DetectorProfile(Probability tpr, Probability fpr) : tpr_(tpr), fpr_(fpr) {}

    Probability tpr() const noexcept { return tpr_; }
    Probability fpr() const noexcept { return fpr_; }
    Probability fnr() const noexcept { return tpr_.complement(); }
    Probability tnr() const noexcept { return fpr_.complement(); }

private:
    Probability tpr_;
    Probability fpr_;
};

/// The monitored stock: base rate of damage and number of examined cases.
struct Population {
    Probability base_rate;
    std::uint64_t size = 0;
};

enum class CountMode { expected, empirical };

template <typename Cell>
struct BasicConfusionCounts {
    static constexpr CountMode mode =
        std::is_floating_point_v<Cell> ? CountMode::expected : CountMode::empirical;

    Cell tp{};
    Cell fn{};
    Cell fp{};
    Cell tn{};

    Cell damaged() const { return tp + fn; }
    Cell intact() const { return fp + tn; }
    Cell flagged() const { return tp + fp; }
    Cell cleared() const { return fn + tn; }
    Cell total() const { return tp + fn + fp + tn; }
};

/// Real-valued cells, N times a rate product. Never rounded.
using ExpectedCounts = BasicConfusionCounts<double>;
/// Integer tallies from a realized population.
using EmpiricalCounts = BasicConfusionCounts<std::int64_t>;

struct MetricsReport {
    MaybeValue accuracy;
    MaybeValue precision;
    MaybeValue recall;
    MaybeValue f1;

    bool operator==(const MetricsReport&) const = default;
};

struct PosteriorReport {
    double prior = 0.0;
    double likelihood_positive = 0.0;
    double likelihood_false = 0.0;
    double marginal_positive = 0.0;
    MaybeValue posterior;
};

/// P(H | e) for prior P(H), likelihoods P(e | H) and P(e | not H).
/// Undefined when the evidence has zero marginal probability. Every posterior
/// and precision in the library goes through this expression so that the
/// precision/posterior identity holds bit-for-bit.
MaybeValue bayes_posterior(double prior, double likelihood_h, double likelihood_not_h) noexcept;

/// P(e) = P(e | H) P(H) + P(e | not H) (1 - P(H)), same association as bayes_posterior.
double marginal_probability(double prior, double likelihood_h, double likelihood_not_h) noexcept;

ExpectedCounts expected_counts(const DetectorProfile& profile, const Population& population);

MetricsReport metrics(const DetectorProfile& profile, Probability base_rate);

/// The TPR = 1 simplification. Field-for-field equal to metrics({1, fpr}, b).
MetricsReport metrics_perfect_recall(Probability fpr, Probability base_rate);

/// Metrics read directly off a confusion matrix as cell ratios.
template <typename Cell>
MetricsReport metrics_from_counts(const BasicConfusionCounts<Cell>& counts);

PosteriorReport posterior_given_positive(const DetectorProfile& profile, Probability base_rate);

enum class RequirementFlag {
    none,
    /// Target precision is below the base rate: no FPR requirement exists.
    unconstrained,
    /// Base rate is zero: the detector has nothing to find.
    degenerate_no_damage,
    /// FPR is zero: precision is 1 for every positive base rate.
    any_base_rate,
};

std::string to_string(RequirementFlag flag);

struct Requirement {
    /// For `unconstrained` this is the raw formula value (> 1).
    double value = 0.0;
    RequirementFlag flag = RequirementFlag::none;
};

/// FPR needed by a perfect-recall detector to reach target_precision at base_rate.
/// Throws std::domain_error for target_precision = 0 or base_rate = 1.
Requirement required_fpr(Probability base_rate, Probability target_precision);

/// Base rate needed by a perfect-recall detector with the given FPR to reach
/// target_precision. Throws std::domain_error for target_precision = 0.
Requirement required_base_rate(Probability fpr, Probability target_precision);

/// Rates view (rows sum to 100%, ignores the base rate) of a detector.
std::string render_confusion(const DetectorProfile& profile);

/// Counts view with row sums, column sums and grand total.
template <typename Cell>
std::string render_confusion(const BasicConfusionCounts<Cell>& counts);

inline constexpr const char* kRatesTableWarning =
    "warning: rates ignore the base rate of damage; precision cannot be read from this table";

}  // namespace baserate
