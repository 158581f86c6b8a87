#include "baserate/sweep.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <istream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

#include "baserate/json_io.hpp"

namespace baserate::sweep {

namespace {

void check_axis(std::span<const Probability> values, const char* name) {
    if (values.empty()) {
        throw std::invalid_argument(fmt::format("sweep: {} must be nonempty", name));
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i].value() > values[i - 1].value())) {
            throw std::invalid_argument(
                fmt::format("sweep: {} must be strictly ascending ({} follows {})", name,
                            values[i].value(), values[i - 1].value()));
        }
    }
}

std::string csv_number(double v) { return fmt::format("{:.9g}", v); }

std::string csv_cell(const MaybeValue& v) { return v ? csv_number(*v) : "null"; }

struct Column {
    const char* name;
    bool MetricSelection::*flag;
    MaybeValue MetricsReport::*field;
};

constexpr Column kMetricColumns[] = {
    {"accuracy", &MetricSelection::accuracy, &MetricsReport::accuracy},
    {"precision", &MetricSelection::precision, &MetricsReport::precision},
    {"recall", &MetricSelection::recall, &MetricsReport::recall},
    {"f1", &MetricSelection::f1, &MetricsReport::f1},
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) {
        fields.push_back(f);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

double parse_number(const std::string& text, std::size_t line_no) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty()) {
        throw std::runtime_error(fmt::format("sweep csv line {}: '{}' is not a number", line_no, text));
    }
    return v;
}

}  // namespace

void validate(const SweepSpec& spec) {
    check_axis(spec.b_values, "b_values");
    check_axis(spec.fpr_values, "fpr_values");
}

SweepResult run_sweep(const SweepSpec& spec) {
    validate(spec);
    SweepResult result{.spec = spec, .rows = {}};
    result.rows.reserve(spec.b_values.size() * spec.fpr_values.size());
    for (const Probability b : spec.b_values) {
        for (const Probability fpr : spec.fpr_values) {
            result.rows.push_back(SweepRow{.b = b,
                                           .fpr = fpr,
                                           .tpr = spec.tpr,
                                           .metrics = metrics(DetectorProfile(spec.tpr, fpr), b)});
        }
    }
    return result;
}

SweepResult zoom_sweep(const SweepSpec& spec) {
    auto check = [](std::span<const Probability> values, const char* name) {
        for (const Probability v : values) {
            if (v.value() > kZoomLimit) {
                throw std::invalid_argument(
                    fmt::format("zoom sweep: {} value {} exceeds {}", name, v.value(), kZoomLimit));
            }
        }
    };
    check(spec.b_values, "b_values");
    check(spec.fpr_values, "fpr_values");
    return run_sweep(spec);
}

std::vector<Probability> uniform_grid(std::size_t last_index, double denominator) {
    std::vector<Probability> out;
    out.reserve(last_index + 1);
    for (std::size_t i = 0; i <= last_index; ++i) {
        out.emplace_back(static_cast<double>(i) / denominator);
    }
    return out;
}

SweepSpec full_preset() {
    return SweepSpec{.b_values = uniform_grid(100, 100.0), .fpr_values = uniform_grid(100, 100.0), .selected = {}};
}

SweepSpec zoom_preset() {
    return SweepSpec{.b_values = uniform_grid(100, 1000.0), .fpr_values = uniform_grid(100, 1000.0), .selected = {}};
}

std::string to_csv(const SweepResult& result) {
    const MetricSelection& sel = result.spec.selected;
    std::string out = "b,fpr,tpr";
    for (const Column& c : kMetricColumns) {
        if (sel.*(c.flag)) {
            out += ',';
            out += c.name;
        }
    }
    out += '\n';
    for (const SweepRow& row : result.rows) {
        out += csv_number(row.b);
        out += ',';
        out += csv_number(row.fpr);
        out += ',';
        out += csv_number(row.tpr);
        for (const Column& c : kMetricColumns) {
            if (sel.*(c.flag)) {
                out += ',';
                out += csv_cell(row.metrics.*(c.field));
            }
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const SweepResult& result) {
    using nlohmann::ordered_json;
    const MetricSelection& sel = result.spec.selected;
    ordered_json doc;
    ordered_json meta;
    meta["artifact_version"] = kArtifactVersion;
    meta["tpr"] = result.spec.tpr.value();
    ordered_json bs = ordered_json::array();
    for (const Probability b : result.spec.b_values) {
        bs.push_back(b.value());
    }
    ordered_json fprs = ordered_json::array();
    for (const Probability f : result.spec.fpr_values) {
        fprs.push_back(f.value());
    }
    meta["b_values"] = std::move(bs);
    meta["fpr_values"] = std::move(fprs);
    ordered_json selected = ordered_json::array();
    for (const Column& c : kMetricColumns) {
        if (sel.*(c.flag)) {
            selected.push_back(c.name);
        }
    }
    meta["metrics_selected"] = std::move(selected);
    doc["metadata"] = std::move(meta);

    ordered_json rows = ordered_json::array();
    for (const SweepRow& row : result.rows) {
        ordered_json r;
        r["b"] = row.b;
        r["fpr"] = row.fpr;
        r["tpr"] = row.tpr;
        for (const Column& c : kMetricColumns) {
            if (sel.*(c.flag)) {
                r[c.name] = json_io::maybe(row.metrics.*(c.field));
            }
        }
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

SweepResult parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("sweep csv: missing header row");
    }
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "b" || header[1] != "fpr" || header[2] != "tpr") {
        throw std::runtime_error("sweep csv: header must start with b,fpr,tpr");
    }

    SweepResult result;
    result.spec.selected = MetricSelection{false, false, false, false};
    std::vector<const Column*> columns;
    std::size_t next = 0;
    for (std::size_t i = 3; i < header.size(); ++i) {
        while (next < std::size(kMetricColumns) && header[i] != kMetricColumns[next].name) {
            ++next;
        }
        if (next == std::size(kMetricColumns)) {
            throw std::runtime_error(fmt::format("sweep csv: unexpected or out-of-order column '{}'", header[i]));
        }
        result.spec.selected.*(kMetricColumns[next].flag) = true;
        columns.push_back(&kMetricColumns[next]);
        ++next;
    }

    std::vector<double> bs;
    std::vector<double> fprs;
    std::optional<double> tpr;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw std::runtime_error(fmt::format("sweep csv line {}: expected {} fields, got {}", line_no,
                                                 header.size(), fields.size()));
        }
        SweepRow row;
        row.b = parse_number(fields[0], line_no);
        row.fpr = parse_number(fields[1], line_no);
        row.tpr = parse_number(fields[2], line_no);
        for (std::size_t i = 0; i < columns.size(); ++i) {
            const std::string& cell = fields[i + 3];
            if (cell != "null") {
                row.metrics.*(columns[i]->field) = parse_number(cell, line_no);
            }
        }
        if (std::find(bs.begin(), bs.end(), row.b) == bs.end()) {
            bs.push_back(row.b);
        }
        if (std::find(fprs.begin(), fprs.end(), row.fpr) == fprs.end()) {
            fprs.push_back(row.fpr);
        }
        if (!tpr) {
            tpr = row.tpr;
        }
        result.rows.push_back(row);
    }
    for (const double b : bs) {
        result.spec.b_values.emplace_back(b, "b");
    }
    for (const double f : fprs) {
        result.spec.fpr_values.emplace_back(f, "fpr");
    }
    if (tpr) {
        result.spec.tpr = Probability(*tpr, "tpr");
    }
    return result;
}

std::vector<RequirementRow> requirement_curve(std::span<const Probability> precision_targets,
                                              std::span<const Probability> b_range) {
    std::vector<RequirementRow> rows;
    rows.reserve(precision_targets.size() * b_range.size());
    for (const Probability target : precision_targets) {
        for (const Probability b : b_range) {
            const Requirement req = required_fpr(b, target);
            rows.push_back(
                RequirementRow{.b = b, .target = target, .required_fpr = req.value, .flag = req.flag});
        }
    }
    return rows;
}

std::string requirement_csv(std::span<const RequirementRow> rows) {
    std::string out = "b,target,required_fpr,flag\n";
    for (const RequirementRow& r : rows) {
        out += fmt::format("{},{},{},{}\n", csv_number(r.b), csv_number(r.target), csv_number(r.required_fpr),
                           to_string(r.flag));
    }
    return out;
}

}  // namespace baserate::sweep
