#include "baserate/decision.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace baserate::decision {

std::string to_string(Outcome outcome) {
    return outcome == Outcome::positive ? "positive" : "negative";
}

Outcome outcome_from_string(const std::string& text) {
    if (text == "positive") {
        return Outcome::positive;
    }
    if (text == "negative") {
        return Outcome::negative;
    }
    throw std::invalid_argument("outcome must be \"positive\" or \"negative\", got \"" + text + "\"");
}

double Evidence::likelihood_damaged() const noexcept {
    return outcome == Outcome::positive ? profile.tpr().value() : profile.fnr().value();
}

double Evidence::likelihood_intact() const noexcept {
    return outcome == Outcome::positive ? profile.fpr().value() : profile.tnr().value();
}

std::optional<double> Evidence::likelihood_ratio() const noexcept {
    const double num = likelihood_damaged();
    const double den = likelihood_intact();
    if (den == 0.0) {
        if (num == 0.0) {
            return std::nullopt;
        }
        return std::numeric_limits<double>::infinity();
    }
    return num / den;
}

double update_posterior(Probability prior, std::span<const Evidence> evidence) {
    const double p0 = prior;
    if (p0 == 0.0 || p0 == 1.0) {
        return p0;
    }

    std::optional<std::size_t> zero_ratio;
    std::optional<std::size_t> infinite_ratio;
    for (std::size_t i = 0; i < evidence.size(); ++i) {
        const double ld = evidence[i].likelihood_damaged();
        const double li = evidence[i].likelihood_intact();
        if (ld == 0.0 && li == 0.0) {
            throw EvidenceError(EvidenceError::Kind::uninformative_degenerate, i,
                                fmt::format("evidence {}: outcome has probability zero under both "
                                            "damage states (likelihood ratio 0/0)",
                                            i));
        }
        if (ld == 0.0 && !zero_ratio) {
            zero_ratio = i;
        }
        if (li == 0.0 && !infinite_ratio) {
            infinite_ratio = i;
        }
    }
    if (zero_ratio && infinite_ratio) {
        throw EvidenceError(EvidenceError::Kind::contradictory, std::max(*zero_ratio, *infinite_ratio),
                            fmt::format("evidence {} rules damage out while evidence {} rules it in",
                                        *zero_ratio, *infinite_ratio));
    }
    if (zero_ratio) {
        return 0.0;
    }
    if (infinite_ratio) {
        return 1.0;
    }

    // All likelihoods are positive here, so every step has a positive marginal.
    double p = p0;
    for (const Evidence& e : evidence) {
        p = *bayes_posterior(p, e.likelihood_damaged(), e.likelihood_intact());
    }
    return p;
}

CostModel::CostModel(double cost_false_positive, double cost_false_negative)
    : fp_(cost_false_positive), fn_(cost_false_negative) {
    auto check = [](double c, const char* name) {
        if (!std::isfinite(c) || c < 0.0) {
            throw std::invalid_argument(fmt::format("{} must be a finite nonnegative cost, got {}", name, c));
        }
    };
    check(fp_, "cost_false_positive");
    check(fn_, "cost_false_negative");
    if (!(fp_ + fn_ > 0.0)) {
        throw std::invalid_argument("cost_false_positive + cost_false_negative must be > 0");
    }
}

double act_threshold(const CostModel& costs) noexcept {
    return costs.cost_false_positive() / (costs.cost_false_positive() + costs.cost_false_negative());
}

std::string to_string(Action action) { return action == Action::act ? "act" : "no_act"; }

Decision decide(Probability posterior, const CostModel& costs) noexcept {
    const double p = posterior;
    Decision d;
    d.expected_cost_act = (1.0 - p) * costs.cost_false_positive();
    d.expected_cost_no_act = p * costs.cost_false_negative();
    const double scale = std::max(1.0, costs.cost_false_positive() + costs.cost_false_negative());
    const double tie_band = 1e-12 * scale;
    d.action = d.expected_cost_act <= d.expected_cost_no_act + tie_band ? Action::act : Action::no_act;
    return d;
}

RocCurve::RocCurve(std::vector<OperatingPoint> points) : points_(std::move(points)) {
    if (points_.empty()) {
        throw std::invalid_argument("ROC curve must contain at least one operating point");
    }
    std::stable_sort(points_.begin(), points_.end(), [](const OperatingPoint& a, const OperatingPoint& b) {
        if (a.fpr.value() != b.fpr.value()) {
            return a.fpr.value() > b.fpr.value();
        }
        return a.tpr.value() > b.tpr.value();
    });
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (points_[i].tpr.value() > points_[i - 1].tpr.value()) {
            throw std::invalid_argument(fmt::format(
                "ROC curve is not a staircase: threshold {} has fpr {} < {} but tpr {} > {}",
                points_[i].threshold, points_[i].fpr.value(), points_[i - 1].fpr.value(),
                points_[i].tpr.value(), points_[i - 1].tpr.value()));
        }
    }
}

Selection select_operating_point(const RocCurve& curve, Probability base_rate,
                                 Probability target_precision) {
    if (target_precision.value() == 0.0) {
        throw std::domain_error("select_operating_point: target precision must be > 0");
    }
    Selection best_qualifying;
    MaybeValue best_precision;
    for (const OperatingPoint& op : curve.points()) {
        const MaybeValue precision = metrics(DetectorProfile(op.tpr, op.fpr), base_rate).precision;
        if (!precision) {
            continue;
        }
        if (!best_precision || *precision > *best_precision) {
            best_precision = precision;
        }
        if (*precision < target_precision.value()) {
            continue;
        }
        const auto& cur = best_qualifying.point;
        const bool better = !cur || op.tpr.value() > cur->tpr.value() ||
                            (op.tpr.value() == cur->tpr.value() && op.fpr.value() < cur->fpr.value());
        if (better) {
            best_qualifying.point = op;
            best_qualifying.precision = precision;
        }
    }
    if (!best_qualifying.point) {
        best_qualifying.precision = best_precision;
    }
    return best_qualifying;
}

}  // namespace baserate::decision
