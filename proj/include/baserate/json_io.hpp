#pragma once

// JSON shapes shared by the CLI and the file readers. Field names are stable.

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "baserate/core_metrics.hpp"
#include "baserate/decision.hpp"
#include "baserate/montecarlo.hpp"

namespace baserate::json_io {

using Json = nlohmann::ordered_json;

/// Number, or null for undefined.
Json maybe(const MaybeValue& value);

Json to_json(const MetricsReport& report);
Json to_json(const PosteriorReport& report);
Json to_json(const Requirement& requirement);
Json to_json(const decision::Decision& decision);

template <typename Cell>
Json to_json(const BasicConfusionCounts<Cell>& counts);

Json to_json(const montecarlo::SimulationConfig& config, const montecarlo::SimulationResult& result);

/// Thrown by the readers below; carries the 1-based line (JSON lines) or array
/// element index that failed, plus the field when one is to blame.
class InputError : public std::runtime_error {
public:
    InputError(std::size_t line, std::string field, const std::string& what)
        : std::runtime_error(what), line_(line), field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

/// Evidence entries {"tpr", "fpr", "outcome"}: either one JSON object per
/// line, or a single JSON array of such objects.
std::vector<decision::Evidence> read_evidence(std::istream& in);

/// ROC points {"threshold", "tpr", "fpr"} in the same two layouts.
decision::RocCurve read_roc_curve(std::istream& in);

}  // namespace baserate::json_io
