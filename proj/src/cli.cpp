#include "baserate/cli.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "baserate/core_metrics.hpp"
#include "baserate/decision.hpp"
#include "baserate/json_io.hpp"
#include "baserate/montecarlo.hpp"
#include "baserate/sweep.hpp"

namespace baserate::cli {

namespace {

using json_io::Json;

/// Validation failure detected after parsing; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Format { table, json, csv };

const std::map<std::string, Format> kFormats{
    {"table", Format::table}, {"json", Format::json}, {"csv", Format::csv}};

const CLI::Validator kProbability(
    [](const std::string& text) -> std::string {
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(text, &used);
            if (used != text.size()) {
                return "'" + text + "' is not a decimal number";
            }
        } catch (const std::exception&) {
            return "'" + text + "' is not a decimal number";
        }
        if (std::isnan(v) || v < 0.0 || v > 1.0) {
            return "value " + text + " is not a probability in [0, 1] (use decimals, e.g. 0.05)";
        }
        return {};
    },
    "PROB");

std::string num(double v) { return fmt::format("{:.9g}", v); }
std::string num(const MaybeValue& v) { return v ? num(*v) : std::string("undefined"); }
std::string csv_num(const MaybeValue& v) { return v ? num(*v) : std::string("null"); }

void print_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

std::vector<Probability> to_probabilities(const std::vector<double>& values, const char* flag) {
    std::vector<Probability> out;
    out.reserve(values.size());
    for (const double v : values) {
        try {
            out.emplace_back(v, flag);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    return out;
}

void add_format(CLI::App* cmd, Format& format, std::initializer_list<Format> allowed) {
    std::map<std::string, Format> choices;
    for (const auto& [name, f] : kFormats) {
        if (std::find(allowed.begin(), allowed.end(), f) != allowed.end()) {
            choices.emplace(name, f);
        }
    }
    cmd->add_option("--format", format, "Output format")->transform(CLI::CheckedTransformer(choices));
}

// ---------------------------------------------------------------- metrics

struct MetricsArgs {
    double tpr = 0.0;
    double fpr = 0.0;
    double base_rate = 0.0;
    std::optional<std::uint64_t> n;
    bool rates = false;
    Format format = Format::table;
};

int cmd_metrics(const MetricsArgs& a, std::ostream& out) {
    const DetectorProfile profile(a.tpr, a.fpr);
    const Probability b(a.base_rate, "base-rate");
    const MetricsReport report = metrics(profile, b);
    std::optional<ExpectedCounts> counts;
    if (a.n) {
        counts = expected_counts(profile, Population{b, *a.n});
    }

    switch (a.format) {
        case Format::json: {
            Json j;
            j["tpr"] = a.tpr;
            j["fpr"] = a.fpr;
            j["base_rate"] = a.base_rate;
            j["metrics"] = json_io::to_json(report);
            if (counts) {
                j["n"] = *a.n;
                j["counts"] = json_io::to_json(*counts);
            }
            print_json(out, j);
            break;
        }
        case Format::csv: {
            out << "tpr,fpr,base_rate,accuracy,precision,recall,f1";
            if (counts) {
                out << ",n,tp,fn,fp,tn";
            }
            out << '\n'
                << num(a.tpr) << ',' << num(a.fpr) << ',' << num(a.base_rate) << ',' << csv_num(report.accuracy)
                << ',' << csv_num(report.precision) << ',' << csv_num(report.recall) << ','
                << csv_num(report.f1);
            if (counts) {
                out << ',' << *a.n << ',' << num(counts->tp) << ',' << num(counts->fn) << ',' << num(counts->fp)
                    << ',' << num(counts->tn);
            }
            out << '\n';
            break;
        }
        case Format::table: {
            out << fmt::format("accuracy   {}\nprecision  {}\nrecall     {}\nf1         {}\n", num(report.accuracy),
                               num(report.precision), num(report.recall), num(report.f1));
            if (a.rates) {
                out << '\n' << render_confusion(profile);
            }
            if (counts) {
                out << '\n' << render_confusion(*counts);
            }
            break;
        }
    }
    return kExitOk;
}

// -------------------------------------------------------------- posterior

struct PosteriorArgs {
    double tpr = 0.0;
    double fpr = 0.0;
    double base_rate = 0.0;
    Format format = Format::table;
};

int cmd_posterior(const PosteriorArgs& a, std::ostream& out) {
    const PosteriorReport r = posterior_given_positive(DetectorProfile(a.tpr, a.fpr), Probability(a.base_rate));
    switch (a.format) {
        case Format::json:
            print_json(out, json_io::to_json(r));
            break;
        case Format::csv:
            out << "prior,likelihood_positive,likelihood_false,marginal_positive,posterior\n"
                << num(r.prior) << ',' << num(r.likelihood_positive) << ',' << num(r.likelihood_false) << ','
                << num(r.marginal_positive) << ',' << csv_num(r.posterior) << '\n';
            break;
        case Format::table:
            out << fmt::format(
                "P(damaged)          {}\nP(T | damaged)      {}\nP(T | intact)       {}\nP(T)                {}\n"
                "P(damaged | T)      {}\n",
                num(r.prior), num(r.likelihood_positive), num(r.likelihood_false), num(r.marginal_positive),
                num(r.posterior));
            break;
    }
    return kExitOk;
}

// ------------------------------------------------------------ requirement

struct RequirementArgs {
    double rate = 0.0;  // base rate for required-fpr, fpr for required-base-rate
    double precision = 0.0;
    Format format = Format::table;
};

int print_requirement(const char* name, const Requirement& req, Format format, std::ostream& out) {
    switch (format) {
        case Format::json:
            print_json(out, json_io::to_json(req));
            break;
        case Format::csv:
            out << "value,flag\n" << num(req.value) << ',' << to_string(req.flag) << '\n';
            break;
        case Format::table:
            out << fmt::format("{}  {}\nflag  {}\n", name, num(req.value), to_string(req.flag));
            break;
    }
    return kExitOk;
}

// --------------------------------------------------------------- simulate

struct SimulateArgs {
    double tpr = 0.0;
    double fpr = 0.0;
    double base_rate = 0.0;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    std::size_t chunk_size = 65536;
    unsigned workers = 0;
    std::string golden;
    Format format = Format::table;
};

montecarlo::SimulationConfig make_config(const SimulateArgs& a) {
    return montecarlo::SimulationConfig{.profile = DetectorProfile(a.tpr, a.fpr),
                                        .population = Population{Probability(a.base_rate, "base-rate"), a.n},
                                        .seed = a.seed,
                                        .chunk_size = a.chunk_size,
                                        .workers = a.workers};
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw UsageError("cannot open '" + path + "' for writing");
    }
    file << text;
    if (!file) {
        throw UsageError("failed writing '" + path + "'");
    }
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    const montecarlo::SimulationConfig config = make_config(a);
    montecarlo::SimulationResult result;
    try {
        result = montecarlo::simulate(config);
    } catch (const std::overflow_error& e) {
        throw UsageError(e.what());
    }
    if (!a.golden.empty()) {
        write_text(a.golden, montecarlo::golden_csv(config, result), out);
    }
    switch (a.format) {
        case Format::json:
            print_json(out, json_io::to_json(config, result));
            break;
        case Format::csv:
            out << montecarlo::golden_csv(config, result);
            break;
        case Format::table: {
            const MetricsReport& m = result.empirical_metrics;
            out << fmt::format("seed {}  generator {}  n {}\n\n", a.seed, montecarlo::kGeneratorId, a.n);
            out << render_confusion(result.counts) << '\n';
            out << fmt::format(
                "accuracy   {}\nprecision  {}  (standard error {})\nrecall     {}\nf1         {}\n",
                num(m.accuracy), num(m.precision), num(result.standard_error_precision), num(m.recall), num(m.f1));
            break;
        }
    }
    return kExitOk;
}

struct ConvergenceArgs {
    SimulateArgs sim;
    std::vector<std::uint64_t> n_grid;
};

int cmd_convergence(const ConvergenceArgs& a, std::ostream& out) {
    const montecarlo::SimulationConfig config = make_config(a.sim);
    std::vector<montecarlo::ConvergenceRow> rows;
    try {
        rows = montecarlo::convergence_report(config, a.n_grid);
    } catch (const std::overflow_error& e) {
        throw UsageError(e.what());
    }
    if (a.sim.format == Format::json) {
        Json arr = Json::array();
        for (const auto& r : rows) {
            Json j;
            j["n"] = r.n;
            j["empirical_precision"] = json_io::maybe(r.empirical_precision);
            j["closed_form_precision"] = json_io::maybe(r.closed_form_precision);
            j["abs_error"] = json_io::maybe(r.abs_error);
            arr.push_back(std::move(j));
        }
        Json doc;
        doc["seed"] = a.sim.seed;
        doc["generator"] = montecarlo::kGeneratorId;
        doc["rows"] = std::move(arr);
        print_json(out, doc);
    } else {
        out << montecarlo::convergence_csv(rows);
    }
    return kExitOk;
}

// ------------------------------------------------------------------ sweep

struct SweepArgs {
    std::string preset;
    std::vector<double> b_list;
    std::vector<double> fpr_list;
    double tpr = 1.0;
    std::vector<std::string> metrics;
    std::string out = "-";
    Format format = Format::csv;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
    sweep::SweepSpec spec;
    if (a.preset == "full") {
        spec = sweep::full_preset();
    } else if (a.preset == "zoom") {
        spec = sweep::zoom_preset();
    } else {
        if (a.b_list.empty() || a.fpr_list.empty()) {
            throw UsageError("sweep: give --preset, or both --b-list and --fpr-list");
        }
        spec.b_values = to_probabilities(a.b_list, "b-list");
        spec.fpr_values = to_probabilities(a.fpr_list, "fpr-list");
    }
    spec.tpr = Probability(a.tpr, "tpr");
    if (!a.metrics.empty()) {
        spec.selected = sweep::MetricSelection{false, false, false, false};
        for (const std::string& m : a.metrics) {
            if (m == "accuracy") {
                spec.selected.accuracy = true;
            } else if (m == "precision") {
                spec.selected.precision = true;
            } else if (m == "recall") {
                spec.selected.recall = true;
            } else if (m == "f1") {
                spec.selected.f1 = true;
            } else {
                throw UsageError("--metrics: unknown metric '" + m + "'");
            }
        }
    }

    sweep::SweepResult result;
    try {
        result = a.preset == "zoom" ? sweep::zoom_sweep(spec) : sweep::run_sweep(spec);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    write_text(a.out, a.format == Format::json ? sweep::to_json(result) : sweep::to_csv(result), out);
    return kExitOk;
}

struct RequirementCurveArgs {
    std::vector<double> targets;
    std::vector<double> b_list;
    Format format = Format::csv;
};

int cmd_requirement_curve(const RequirementCurveArgs& a, std::ostream& out) {
    const auto targets = to_probabilities(a.targets, "targets");
    const auto bs = to_probabilities(a.b_list, "b-list");
    std::vector<sweep::RequirementRow> rows;
    try {
        rows = sweep::requirement_curve(targets, bs);
    } catch (const std::domain_error& e) {
        throw UsageError(e.what());
    }
    if (a.format == Format::json) {
        Json arr = Json::array();
        for (const auto& r : rows) {
            Json j;
            j["b"] = r.b;
            j["target"] = r.target;
            j["required_fpr"] = r.required_fpr;
            j["flag"] = to_string(r.flag);
            arr.push_back(std::move(j));
        }
        print_json(out, arr);
    } else {
        out << sweep::requirement_csv(rows);
    }
    return kExitOk;
}

// ----------------------------------------------------------------- decide

struct DecideArgs {
    std::optional<double> posterior;
    std::optional<double> tpr;
    std::optional<double> fpr;
    std::optional<double> base_rate;
    std::string evidence;
    double cost_fp = 0.0;
    double cost_fn = 0.0;
    Format format = Format::table;
};

std::vector<decision::Evidence> load_evidence(const std::string& path) {
    std::ifstream file(path);
    if (!file) {
        throw UsageError("--evidence: cannot open '" + path + "'");
    }
    try {
        return json_io::read_evidence(file);
    } catch (const json_io::InputError& e) {
        throw UsageError(fmt::format("--evidence {}: {}", path, e.what()));
    }
}

int cmd_decide(const DecideArgs& a, std::ostream& out) {
    decision::CostModel costs = [&] {
        try {
            return decision::CostModel(a.cost_fp, a.cost_fn);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();

    Json j;
    double posterior = 0.0;
    if (a.posterior) {
        posterior = *a.posterior;
    } else {
        if (!a.tpr || !a.fpr || !a.base_rate) {
            throw UsageError("decide: give --posterior, or all of --tpr, --fpr and --base-rate");
        }
        std::vector<decision::Evidence> seq{
            decision::Evidence{DetectorProfile(*a.tpr, *a.fpr), decision::Outcome::positive}};
        if (!a.evidence.empty()) {
            auto more = load_evidence(a.evidence);
            seq.insert(seq.end(), more.begin(), more.end());
        }
        try {
            posterior = decision::update_posterior(Probability(*a.base_rate), seq);
        } catch (const decision::EvidenceError& e) {
            throw UsageError(e.what());
        }
        j["prior"] = *a.base_rate;
        j["evidence_count"] = seq.size();
    }

    const decision::Decision d = decision::decide(Probability(posterior), costs);
    j["posterior"] = posterior;
    j["act_threshold"] = decision::act_threshold(costs);
    j["cost_false_positive"] = costs.cost_false_positive();
    j["cost_false_negative"] = costs.cost_false_negative();
    j["expected_cost_act"] = d.expected_cost_act;
    j["expected_cost_no_act"] = d.expected_cost_no_act;
    j["action"] = decision::to_string(d.action);

    if (a.format == Format::json) {
        print_json(out, j);
    } else {
        out << fmt::format(
            "posterior             {}\nact threshold p*      {}\nexpected cost act     {}\n"
            "expected cost no_act  {}\naction                {}\n",
            num(posterior), num(decision::act_threshold(costs)), num(d.expected_cost_act),
            num(d.expected_cost_no_act), decision::to_string(d.action));
    }
    return kExitOk;
}

struct SelectArgs {
    std::string curve;
    double base_rate = 0.0;
    double target = 0.0;
    Format format = Format::table;
};

int cmd_select(const SelectArgs& a, std::ostream& out) {
    std::ifstream file(a.curve);
    if (!file) {
        throw UsageError("--curve: cannot open '" + a.curve + "'");
    }
    const decision::RocCurve curve = [&] {
        try {
            return json_io::read_roc_curve(file);
        } catch (const json_io::InputError& e) {
            throw UsageError(fmt::format("--curve {}: {}", a.curve, e.what()));
        }
    }();
    decision::Selection sel;
    try {
        sel = decision::select_operating_point(curve, Probability(a.base_rate), Probability(a.target));
    } catch (const std::domain_error& e) {
        throw UsageError(e.what());
    }

    Json j;
    if (sel.point) {
        Json p;
        p["threshold"] = sel.point->threshold;
        p["tpr"] = sel.point->tpr.value();
        p["fpr"] = sel.point->fpr.value();
        j["selected"] = std::move(p);
        j["precision"] = json_io::maybe(sel.precision);
    } else {
        j["selected"] = nullptr;
        j["best_precision"] = json_io::maybe(sel.precision);
    }
    if (a.format == Format::json) {
        print_json(out, j);
    } else if (sel.point) {
        out << fmt::format("threshold {}  tpr {}  fpr {}  precision {}\n", num(sel.point->threshold),
                           num(sel.point->tpr.value()), num(sel.point->fpr.value()), num(sel.precision));
    } else {
        out << fmt::format("none  (best achievable precision {})\n", num(sel.precision));
    }
    return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reliability of binary damage detection under low base rates"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::function<int()> handler;

    MetricsArgs metrics_args;
    {
        auto* cmd = app.add_subcommand("metrics", "Accuracy, precision, recall and F1 for a detector and base rate");
        cmd->add_option("--tpr", metrics_args.tpr, "True positive rate")->required()->check(kProbability);
        cmd->add_option("--fpr", metrics_args.fpr, "False positive rate")->required()->check(kProbability);
        cmd->add_option("--base-rate", metrics_args.base_rate, "Base rate of damage")->required()->check(kProbability);
        cmd->add_option("--n", metrics_args.n, "Population size; adds the expected confusion matrix");
        cmd->add_flag("--rates", metrics_args.rates, "Also print the rates-only confusion table");
        add_format(cmd, metrics_args.format, {Format::table, Format::json, Format::csv});
        cmd->callback([&] { handler = [&] { return cmd_metrics(metrics_args, out); }; });
    }

    PosteriorArgs posterior_args;
    {
        auto* cmd = app.add_subcommand("posterior", "P(damaged | positive detection)");
        cmd->add_option("--tpr", posterior_args.tpr, "True positive rate")->required()->check(kProbability);
        cmd->add_option("--fpr", posterior_args.fpr, "False positive rate")->required()->check(kProbability);
        cmd->add_option("--base-rate", posterior_args.base_rate, "Base rate of damage")
            ->required()
            ->check(kProbability);
        add_format(cmd, posterior_args.format, {Format::table, Format::json, Format::csv});
        cmd->callback([&] { handler = [&] { return cmd_posterior(posterior_args, out); }; });
    }

    RequirementArgs rfpr_args;
    {
        auto* cmd = app.add_subcommand("required-fpr", "FPR a perfect-recall detector needs for a target precision");
        cmd->add_option("--base-rate", rfpr_args.rate, "Base rate of damage")->required()->check(kProbability);
        cmd->add_option("--precision", rfpr_args.precision, "Target precision")->required()->check(kProbability);
        add_format(cmd, rfpr_args.format, {Format::table, Format::json, Format::csv});
        cmd->callback([&] {
            handler = [&] {
                return print_requirement("required_fpr",
                                         required_fpr(Probability(rfpr_args.rate), Probability(rfpr_args.precision)),
                                         rfpr_args.format, out);
            };
        });
    }

    RequirementArgs rb_args;
    {
        auto* cmd = app.add_subcommand("required-base-rate",
                                       "Base rate at which a perfect-recall detector reaches a target precision");
        cmd->add_option("--fpr", rb_args.rate, "False positive rate")->required()->check(kProbability);
        cmd->add_option("--precision", rb_args.precision, "Target precision")->required()->check(kProbability);
        add_format(cmd, rb_args.format, {Format::table, Format::json, Format::csv});
        cmd->callback([&] {
            handler = [&] {
                return print_requirement("required_base_rate",
                                         required_base_rate(Probability(rb_args.rate), Probability(rb_args.precision)),
                                         rb_args.format, out);
            };
        });
    }

    auto add_sim_options = [](CLI::App* cmd, SimulateArgs& s, bool with_n) {
        cmd->add_option("--tpr", s.tpr, "True positive rate")->required()->check(kProbability);
        cmd->add_option("--fpr", s.fpr, "False positive rate")->required()->check(kProbability);
        cmd->add_option("--base-rate", s.base_rate, "Base rate of damage")->required()->check(kProbability);
        if (with_n) {
            cmd->add_option("--n", s.n, "Number of simulated buildings")->required();
        }
        cmd->add_option("--seed", s.seed, "Random seed")->required();
        cmd->add_option("--chunk-size", s.chunk_size, "Buildings per work unit (does not change results)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--workers", s.workers, "Worker threads, 0 = all cores (does not change results)");
    };

    SimulateArgs sim_args;
    {
        auto* cmd = app.add_subcommand("simulate", "Monte Carlo confusion matrix for a simulated building stock");
        add_sim_options(cmd, sim_args, true);
        cmd->add_option("--golden", sim_args.golden, "Also write the tallies as a golden CSV file");
        add_format(cmd, sim_args.format, {Format::table, Format::json, Format::csv});
        cmd->callback([&] { handler = [&] { return cmd_simulate(sim_args, out); }; });
    }

    ConvergenceArgs conv_args;
    conv_args.sim.format = Format::csv;
    {
        auto* cmd = app.add_subcommand("convergence", "Empirical vs closed-form precision over population sizes");
        add_sim_options(cmd, conv_args.sim, false);
        cmd->add_option("--n-grid", conv_args.n_grid, "Ascending population sizes")->required()->delimiter(',');
        add_format(cmd, conv_args.sim.format, {Format::json, Format::csv});
        cmd->callback([&] { handler = [&] { return cmd_convergence(conv_args, out); }; });
    }

    SweepArgs sweep_args;
    {
        auto* cmd = app.add_subcommand("sweep", "Metric grid over base rate and FPR");
        auto* preset = cmd->add_option("--preset", sweep_args.preset, "Named grid")
                           ->check(CLI::IsMember({"full", "zoom"}));
        cmd->add_option("--b-list", sweep_args.b_list, "Base rates, ascending")
            ->delimiter(',')
            ->excludes(preset)
            ->check(kProbability);
        cmd->add_option("--fpr-list", sweep_args.fpr_list, "False positive rates, ascending")
            ->delimiter(',')
            ->excludes(preset)
            ->check(kProbability);
        cmd->add_option("--tpr", sweep_args.tpr, "Fixed true positive rate")->check(kProbability);
        cmd->add_option("--metrics", sweep_args.metrics, "Subset of accuracy,precision,recall,f1")->delimiter(',');
        cmd->add_option("--out", sweep_args.out, "Output file, - for standard output");
        add_format(cmd, sweep_args.format, {Format::json, Format::csv});
        cmd->callback([&] { handler = [&] { return cmd_sweep(sweep_args, out); }; });
    }

    RequirementCurveArgs curve_args;
    {
        auto* cmd = app.add_subcommand("requirement-curve", "Required FPR over base rates for target precisions");
        cmd->add_option("--targets", curve_args.targets, "Target precisions")
            ->required()
            ->delimiter(',')
            ->check(kProbability);
        cmd->add_option("--b-list", curve_args.b_list, "Base rates")->required()->delimiter(',')->check(kProbability);
        add_format(cmd, curve_args.format, {Format::json, Format::csv});
        cmd->callback([&] { handler = [&] { return cmd_requirement_curve(curve_args, out); }; });
    }

    DecideArgs decide_args;
    {
        auto* cmd = app.add_subcommand("decide", "Expected-cost act/no-act decision");
        auto* post = cmd->add_option("--posterior", decide_args.posterior, "Posterior probability of damage")
                         ->check(kProbability);
        cmd->add_option("--tpr", decide_args.tpr, "TPR of the detector that raised the alarm")
            ->excludes(post)
            ->check(kProbability);
        cmd->add_option("--fpr", decide_args.fpr, "FPR of the detector that raised the alarm")
            ->excludes(post)
            ->check(kProbability);
        cmd->add_option("--base-rate", decide_args.base_rate, "Base rate of damage")
            ->excludes(post)
            ->check(kProbability);
        cmd->add_option("--evidence", decide_args.evidence, "JSON lines file of follow-up test results")
            ->excludes(post);
        cmd->add_option("--cost-fp", decide_args.cost_fp, "Cost of acting on intact structure")->required();
        cmd->add_option("--cost-fn", decide_args.cost_fn, "Cost of missing damage")->required();
        add_format(cmd, decide_args.format, {Format::table, Format::json});
        cmd->callback([&] { handler = [&] { return cmd_decide(decide_args, out); }; });
    }

    SelectArgs select_args;
    {
        auto* cmd = app.add_subcommand("select-point", "Pick the ROC operating point meeting a target precision");
        cmd->add_option("--curve", select_args.curve, "JSON file of {threshold, tpr, fpr} points")->required();
        cmd->add_option("--base-rate", select_args.base_rate, "Base rate of damage")->required()->check(kProbability);
        cmd->add_option("--target-precision", select_args.target, "Required precision")
            ->required()
            ->check(kProbability);
        add_format(cmd, select_args.format, {Format::table, Format::json});
        cmd->callback([&] { handler = [&] { return cmd_select(select_args, out); }; });
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    if (!handler) {
        err << "error: no subcommand given\n";
        return kExitUsage;
    }
    try {
        return handler();
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace baserate::cli
