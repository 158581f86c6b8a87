#pragma once

// Parametric grids over (base rate, FPR) and requirement curves, emitted as
// CSV or JSON for external plotting. All cell values come from core_metrics.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "baserate/core_metrics.hpp"

namespace baserate::sweep {

inline constexpr const char* kArtifactVersion = "1.0.0";

struct MetricSelection {
    bool accuracy = true;
    bool precision = true;
    bool recall = true;
    bool f1 = true;

    bool operator==(const MetricSelection&) const = default;
};

/// Both lists must be nonempty and strictly ascending; every value is a
/// probability by construction.
struct SweepSpec {
    std::vector<Probability> b_values;
    std::vector<Probability> fpr_values;
    Probability tpr{1.0};
    MetricSelection selected;
};

struct SweepRow {
    double b = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
    MetricsReport metrics;
};

struct SweepResult {
    SweepSpec spec;
    /// b-major, then fpr.
    std::vector<SweepRow> rows;
};

/// Throws std::invalid_argument when either axis is empty or not strictly ascending.
void validate(const SweepSpec& spec);

SweepResult run_sweep(const SweepSpec& spec);

inline constexpr double kZoomLimit = 0.10;

/// run_sweep restricted to b, fpr <= 0.10.
SweepResult zoom_sweep(const SweepSpec& spec);

/// 101 points per axis over [0, 1].
SweepSpec full_preset();
/// 0 to 0.10 in steps of 0.001 on both axes.
SweepSpec zoom_preset();

/// i / denominator for i = 0..last_index, each correctly rounded.
std::vector<Probability> uniform_grid(std::size_t last_index, double denominator);

/// Columns b,fpr,tpr then the selected metrics in the order
/// accuracy,precision,recall,f1; 9 significant digits; undefined as `null`.
std::string to_csv(const SweepResult& result);
std::string to_json(const SweepResult& result);

/// Inverse of to_csv. The selection is recovered from the header;
/// b_values and fpr_values are the distinct values in row order.
SweepResult parse_csv(std::istream& in);

struct RequirementRow {
    double b = 0.0;
    double target = 0.0;
    double required_fpr = 0.0;
    RequirementFlag flag = RequirementFlag::none;
};

/// Target-major table of required_fpr over b_range.
std::vector<RequirementRow> requirement_curve(std::span<const Probability> precision_targets,
                                              std::span<const Probability> b_range);

std::string requirement_csv(std::span<const RequirementRow> rows);

}  // namespace baserate::sweep
