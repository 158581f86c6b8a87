#include <fmt/format.h>

#include <string>

#include "baserate/core_metrics.hpp"

namespace baserate {

namespace {

constexpr int kLabelWidth = 22;
constexpr int kCellWidth = 22;

std::string trim_fixed(double value, int decimals) {
    std::string s = fmt::format("{:.{}f}", value, decimals);
    if (s.find('.') != std::string::npos) {
        while (!s.empty() && s.back() == '0') {
            s.pop_back();
        }
        if (!s.empty() && s.back() == '.') {
            s.pop_back();
        }
    }
    if (s == "-0") {
        s = "0";
    }
    return s;
}

std::string format_cell(double value) { return trim_fixed(value, 6); }
std::string format_cell(std::int64_t value) { return fmt::format("{}", value); }

std::string percent(double rate) { return trim_fixed(rate * 100.0, 6) + "%"; }

std::string header_row() {
    return fmt::format("{:<{}}{:<{}}{:<{}}{}\n", "", kLabelWidth, "Predicted damage", kCellWidth,
                       "Predicted no damage", kCellWidth, "SUM");
}

std::string row(std::string_view label, std::string_view a, std::string_view b, std::string_view sum) {
    return fmt::format("{:<{}}{:<{}}{:<{}}{}\n", label, kLabelWidth, a, kCellWidth, b, kCellWidth, sum);
}

}  // namespace

std::string render_confusion(const DetectorProfile& profile) {
    const double tpr = profile.tpr();
    const double fnr = profile.fnr();
    const double fpr = profile.fpr();
    const double tnr = profile.tnr();

    std::string out = header_row();
    out += row("Actual damage", "TPR=" + percent(tpr), "FNR=" + percent(fnr), percent(tpr + fnr));
    out += row("Actual no damage", "FPR=" + percent(fpr), "TNR=" + percent(tnr), percent(fpr + tnr));
    out += kRatesTableWarning;
    out += '\n';
    return out;
}

template <typename Cell>
std::string render_confusion(const BasicConfusionCounts<Cell>& counts) {
    std::string out = header_row();
    out += row("Actual damage", "TP=" + format_cell(counts.tp), "FN=" + format_cell(counts.fn),
               format_cell(counts.damaged()));
    out += row("Actual no damage", "FP=" + format_cell(counts.fp), "TN=" + format_cell(counts.tn),
               format_cell(counts.intact()));
    out += row("SUM", format_cell(counts.flagged()), format_cell(counts.cleared()),
               format_cell(counts.total()));
    return out;
}

template std::string render_confusion(const ExpectedCounts&);
template std::string render_confusion(const EmpiricalCounts&);

}  // namespace baserate
