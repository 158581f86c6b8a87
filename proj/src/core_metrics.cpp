#include "baserate/core_metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace baserate {

MaybeValue bayes_posterior(double prior, double likelihood_h, double likelihood_not_h) noexcept {
    const double joint = prior * likelihood_h;
    const double marginal = likelihood_not_h * (1.0 - prior) + joint;
    if (!(marginal > 0.0)) {
        return std::nullopt;
    }
    return joint / marginal;
}

double marginal_probability(double prior, double likelihood_h, double likelihood_not_h) noexcept {
    return likelihood_not_h * (1.0 - prior) + prior * likelihood_h;
}

ExpectedCounts expected_counts(const DetectorProfile& profile, const Population& population) {
    const double n = static_cast<double>(population.size);
    const double b = population.base_rate;
    const double tpr = profile.tpr();
    const double fpr = profile.fpr();
    return ExpectedCounts{
        .tp = n * b * tpr,
        .fn = n * b * (1.0 - tpr),
        .fp = n * fpr * (1.0 - b),
        .tn = n * (1.0 - b) * (1.0 - fpr),
    };
}

MetricsReport metrics(const DetectorProfile& profile, Probability base_rate) {
    const double b = base_rate;
    const double tpr = profile.tpr();
    const double fpr = profile.fpr();

    MetricsReport report;
    report.accuracy = 1.0 - fpr * (1.0 - b) - b * (1.0 - tpr);
    report.precision = bayes_posterior(b, tpr, fpr);
    report.recall = tpr;
    const double f1_den = fpr * (1.0 - b) + b * (1.0 + tpr);
    if (f1_den > 0.0) {
        report.f1 = 2.0 * b * tpr / f1_den;
    }
    return report;
}

MetricsReport metrics_perfect_recall(Probability fpr_p, Probability base_rate) {
    const double b = base_rate;
    const double fpr = fpr_p;

    MetricsReport report;
    report.accuracy = 1.0 - fpr * (1.0 - b);
    const double precision_den = fpr * (1.0 - b) + b;
    if (precision_den > 0.0) {
        report.precision = b / precision_den;
    }
    report.recall = 1.0;
    const double f1_den = fpr * (1.0 - b) + 2.0 * b;
    if (f1_den > 0.0) {
        report.f1 = 2.0 * b / f1_den;
    }
    return report;
}

namespace {

MaybeValue ratio(double num, double den) {
    if (!(den > 0.0)) {
        return std::nullopt;
    }
    return num / den;
}

}  // namespace

template <typename Cell>
MetricsReport metrics_from_counts(const BasicConfusionCounts<Cell>& counts) {
    const double tp = static_cast<double>(counts.tp);
    const double fn = static_cast<double>(counts.fn);
    const double fp = static_cast<double>(counts.fp);
    const double tn = static_cast<double>(counts.tn);

    MetricsReport report;
    report.accuracy = ratio(tp + tn, tp + fn + fp + tn);
    report.precision = ratio(tp, tp + fp);
    report.recall = ratio(tp, tp + fn);
    report.f1 = ratio(2.0 * tp, 2.0 * tp + fp + fn);
    return report;
}

template MetricsReport metrics_from_counts(const ExpectedCounts&);
template MetricsReport metrics_from_counts(const EmpiricalCounts&);

PosteriorReport posterior_given_positive(const DetectorProfile& profile, Probability base_rate) {
    const double b = base_rate;
    const double tpr = profile.tpr();
    const double fpr = profile.fpr();
    return PosteriorReport{
        .prior = b,
        .likelihood_positive = tpr,
        .likelihood_false = fpr,
        .marginal_positive = marginal_probability(b, tpr, fpr),
        .posterior = bayes_posterior(b, tpr, fpr),
    };
}

std::string to_string(RequirementFlag flag) {
    switch (flag) {
        case RequirementFlag::none:
            return "none";
        case RequirementFlag::unconstrained:
            return "unconstrained";
        case RequirementFlag::degenerate_no_damage:
            return "degenerate_no_damage";
        case RequirementFlag::any_base_rate:
            return "any_base_rate";
    }
    return "unknown";
}

Requirement required_fpr(Probability base_rate, Probability target_precision) {
    const double b = base_rate;
    const double precision = target_precision;
    if (precision == 0.0) {
        throw std::domain_error("required_fpr: target precision must be > 0");
    }
    if (b == 1.0) {
        throw std::domain_error("required_fpr: base rate must be < 1");
    }
    if (b == 0.0) {
        return {0.0, RequirementFlag::degenerate_no_damage};
    }
    const double fpr = (b / precision) * ((1.0 - precision) / (1.0 - b));
    if (precision < b) {
        return {fpr, RequirementFlag::unconstrained};
    }
    // precision >= b means the exact value is <= 1; rounding may overshoot by an ulp.
    return {std::min(fpr, 1.0), RequirementFlag::none};
}

Requirement required_base_rate(Probability fpr_p, Probability target_precision) {
    const double fpr = fpr_p;
    const double precision = target_precision;
    if (precision == 0.0) {
        throw std::domain_error("required_base_rate: target precision must be > 0");
    }
    if (fpr == 0.0) {
        return {0.0, RequirementFlag::any_base_rate};
    }
    const double b = precision * fpr / (1.0 - precision + precision * fpr);
    return {std::min(b, 1.0), RequirementFlag::none};
}

}  // namespace baserate
