#pragma once

// Acting on detector output: Bayesian updating over independent follow-up
// tests, expected-cost act/no-act rule, and choosing an operating point on a
// detector's threshold curve.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "baserate/core_metrics.hpp"

namespace baserate::decision {

enum class Outcome { positive, negative };

std::string to_string(Outcome outcome);
Outcome outcome_from_string(const std::string& text);

struct Evidence {
    DetectorProfile profile;
    Outcome outcome = Outcome::positive;

    /// P(outcome | damaged).
    double likelihood_damaged() const noexcept;
    /// P(outcome | intact).
    double likelihood_intact() const noexcept;
    /// likelihood_damaged / likelihood_intact; +inf when only the denominator
    /// is zero, nullopt for 0/0.
    std::optional<double> likelihood_ratio() const noexcept;
};

class EvidenceError : public std::domain_error {
public:
    enum class Kind {
        /// Both conditional probabilities of the observed outcome are zero.
        uninformative_degenerate,
        /// The sequence holds both a zero and an infinite likelihood ratio.
        contradictory,
    };

    EvidenceError(Kind kind, std::size_t index, const std::string& what)
        : std::domain_error(what), kind_(kind), index_(index) {}

    Kind kind() const noexcept { return kind_; }
    /// Position of the offending entry in the sequence.
    std::size_t index() const noexcept { return index_; }

private:
    Kind kind_;
    std::size_t index_;
};

/// Posterior probability of damage after observing every entry, treating the
/// tests as conditionally independent given the damage state. Equivalent to
/// multiplying prior odds by each likelihood ratio; evaluated as repeated
/// Bayes steps so a single positive entry matches posterior_given_positive
/// exactly. Priors of 0 and 1 are returned unchanged.
double update_posterior(Probability prior, std::span<const Evidence> evidence);

/// Costs of the two wrong decisions. True outcomes cost nothing.
class CostModel {
public:
    CostModel(double cost_false_positive, double cost_false_negative);

    double cost_false_positive() const noexcept { return fp_; }
    double cost_false_negative() const noexcept { return fn_; }

private:
    double fp_;
    double fn_;
};

/// Posterior at and above which acting has the lower expected cost.
double act_threshold(const CostModel& costs) noexcept;

enum class Action { act, no_act };

std::string to_string(Action action);

struct Decision {
    Action action = Action::act;
    double expected_cost_act = 0.0;
    double expected_cost_no_act = 0.0;
};

/// Costs within 1e-12 of each other (scaled by the total cost when that
/// exceeds 1) count as a tie, which resolves to acting.
Decision decide(Probability posterior, const CostModel& costs) noexcept;

struct OperatingPoint {
    double threshold = 0.0;
    Probability tpr;
    Probability fpr;
};

/// Finite ROC staircase, stored by descending fpr. The constructor sorts its
/// input and rejects empty curves and any point whose tpr rises as fpr falls.
class RocCurve {
public:
    explicit RocCurve(std::vector<OperatingPoint> points);

    std::span<const OperatingPoint> points() const noexcept { return points_; }

private:
    std::vector<OperatingPoint> points_;
};

struct Selection {
    /// Highest-tpr point whose precision meets the target (ties: lower fpr).
    std::optional<OperatingPoint> point;
    /// Precision of the chosen point, or the best one on the curve when nothing qualifies.
    MaybeValue precision;
};

Selection select_operating_point(const RocCurve& curve, Probability base_rate,
                                 Probability target_precision);

}  // namespace baserate::decision
