#include "baserate/json_io.hpp"

#include <fmt/format.h>

#include <istream>
#include <iterator>
#include <sstream>

namespace baserate::json_io {

Json maybe(const MaybeValue& value) { return value ? Json(*value) : Json(nullptr); }

Json to_json(const MetricsReport& report) {
    Json j;
    j["accuracy"] = maybe(report.accuracy);
    j["precision"] = maybe(report.precision);
    j["recall"] = maybe(report.recall);
    j["f1"] = maybe(report.f1);
    return j;
}

Json to_json(const PosteriorReport& report) {
    Json j;
    j["prior"] = report.prior;
    j["likelihood_positive"] = report.likelihood_positive;
    j["likelihood_false"] = report.likelihood_false;
    j["marginal_positive"] = report.marginal_positive;
    j["posterior"] = maybe(report.posterior);
    return j;
}

Json to_json(const Requirement& requirement) {
    Json j;
    j["value"] = requirement.value;
    j["flag"] = to_string(requirement.flag);
    return j;
}

Json to_json(const decision::Decision& d) {
    Json j;
    j["action"] = decision::to_string(d.action);
    j["expected_cost_act"] = d.expected_cost_act;
    j["expected_cost_no_act"] = d.expected_cost_no_act;
    return j;
}

template <typename Cell>
Json to_json(const BasicConfusionCounts<Cell>& counts) {
    Json j;
    j["mode"] = counts.mode == CountMode::expected ? "expected" : "empirical";
    j["tp"] = counts.tp;
    j["fn"] = counts.fn;
    j["fp"] = counts.fp;
    j["tn"] = counts.tn;
    return j;
}

template Json to_json(const ExpectedCounts&);
template Json to_json(const EmpiricalCounts&);

Json to_json(const montecarlo::SimulationConfig& config, const montecarlo::SimulationResult& result) {
    Json j;
    j["seed"] = config.seed;
    j["generator"] = montecarlo::kGeneratorId;
    Json cfg;
    cfg["tpr"] = config.profile.tpr().value();
    cfg["fpr"] = config.profile.fpr().value();
    cfg["base_rate"] = config.population.base_rate.value();
    cfg["n"] = config.population.size;
    cfg["chunk_size"] = config.chunk_size;
    j["config"] = std::move(cfg);
    j["counts"] = to_json(result.counts);
    j["metrics"] = to_json(result.empirical_metrics);
    j["standard_error_precision"] = maybe(result.standard_error_precision);
    return j;
}

namespace {

// Each entry paired with its 1-based line (JSON lines) or element index (array).
std::vector<std::pair<std::size_t, Json>> read_records(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::vector<std::pair<std::size_t, Json>> out;

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return out;
    }
    if (text[first] == '[') {
        Json doc;
        try {
            doc = Json::parse(text);
        } catch (const Json::parse_error& e) {
            throw InputError(0, "", fmt::format("malformed JSON array: {}", e.what()));
        }
        std::size_t index = 0;
        for (auto& item : doc) {
            out.emplace_back(++index, std::move(item));
        }
        return out;
    }

    std::istringstream lines(text);
    std::size_t line_no = 0;
    for (std::string line; std::getline(lines, line);) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            out.emplace_back(line_no, Json::parse(line));
        } catch (const Json::parse_error& e) {
            throw InputError(line_no, "", fmt::format("line {}: malformed JSON: {}", line_no, e.what()));
        }
    }
    return out;
}

void require_object(std::size_t line, const Json& j) {
    if (!j.is_object()) {
        throw InputError(line, "", fmt::format("line {}: expected a JSON object", line));
    }
}

double number_field(std::size_t line, const Json& j, const char* field) {
    const auto it = j.find(field);
    if (it == j.end()) {
        throw InputError(line, field, fmt::format("line {}: missing field \"{}\"", line, field));
    }
    if (!it->is_number()) {
        throw InputError(line, field, fmt::format("line {}: field \"{}\" must be a number", line, field));
    }
    return it->get<double>();
}

Probability probability_field(std::size_t line, const Json& j, const char* field) {
    const double v = number_field(line, j, field);
    try {
        return Probability(v, field);
    } catch (const std::invalid_argument& e) {
        throw InputError(line, field, fmt::format("line {}: {}", line, e.what()));
    }
}

}  // namespace

std::vector<decision::Evidence> read_evidence(std::istream& in) {
    std::vector<decision::Evidence> evidence;
    for (const auto& [line, j] : read_records(in)) {
        require_object(line, j);
        const Probability tpr = probability_field(line, j, "tpr");
        const Probability fpr = probability_field(line, j, "fpr");
        const auto it = j.find("outcome");
        if (it == j.end() || !it->is_string()) {
            throw InputError(line, "outcome",
                             fmt::format("line {}: field \"outcome\" must be \"positive\" or \"negative\"", line));
        }
        decision::Outcome outcome{};
        try {
            outcome = decision::outcome_from_string(it->get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw InputError(line, "outcome", fmt::format("line {}: {}", line, e.what()));
        }
        evidence.push_back(decision::Evidence{DetectorProfile(tpr, fpr), outcome});
    }
    return evidence;
}

decision::RocCurve read_roc_curve(std::istream& in) {
    std::vector<decision::OperatingPoint> points;
    for (const auto& [line, j] : read_records(in)) {
        require_object(line, j);
        points.push_back(decision::OperatingPoint{.threshold = number_field(line, j, "threshold"),
                                                  .tpr = probability_field(line, j, "tpr"),
                                                  .fpr = probability_field(line, j, "fpr")});
    }
    try {
        return decision::RocCurve(std::move(points));
    } catch (const std::invalid_argument& e) {
        throw InputError(0, "", e.what());
    }
}

}  // namespace baserate::json_io
