#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "baserate/cli.hpp"
#include "baserate/core_metrics.hpp"
#include "baserate/decision.hpp"
#include "baserate/montecarlo.hpp"
#include "baserate/sweep.hpp"

using namespace baserate;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) {
    std::ifstream in(std::string(BASERATE_TEST_DATA_DIR "/fixtures/") + name);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("baserate_test_" + name);
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

}  // namespace

TEST_CASE("json output matches fixtures") {
    const std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
        {"metrics_worked_example.json",
         {"metrics", "--tpr", "0.98", "--fpr", "0.05", "--base-rate", "0.001", "--n", "100000", "--format", "json"}},
        {"metrics_perfect_detector.json",
         {"metrics", "--tpr", "1", "--fpr", "0", "--base-rate", "0.5", "--format", "json"}},
        {"posterior_worked_example.json",
         {"posterior", "--tpr", "0.98", "--fpr", "0.05", "--base-rate", "0.001", "--format", "json"}},
        {"posterior_uninformative.json",
         {"posterior", "--tpr", "0.4", "--fpr", "0.4", "--base-rate", "0.37", "--format", "json"}},
        {"required_fpr_five_percent.json",
         {"required-fpr", "--base-rate", "0.05", "--precision", "0.9", "--format", "json"}},
        {"required_fpr_unconstrained.json",
         {"required-fpr", "--base-rate", "0.6", "--precision", "0.5", "--format", "json"}},
        {"required_base_rate_zero_fpr.json",
         {"required-base-rate", "--fpr", "0", "--precision", "1", "--format", "json"}},
        {"simulate_forced.json",
         {"simulate", "--tpr", "1", "--fpr", "0", "--base-rate", "1", "--n", "1000", "--seed", "9", "--format",
          "json"}},
        {"decide_worked_example.json",
         {"decide", "--tpr", "0.98", "--fpr", "0.05", "--base-rate", "0.001", "--cost-fp", "1", "--cost-fn", "10", "--format", "json"}},
        {"sweep_small.json", {"sweep", "--b-list", "0,0.001", "--fpr-list", "0,0.05", "--format", "json"}},
    };
    for (const auto& [name, args] : cases) {
        CAPTURE(name);
        const Run r = run(args);
        CHECK(r.code == 0);
        CHECK(r.err.empty());
        CHECK(r.out == fixture(name));
    }
}

TEST_CASE("printed numbers equal library values") {
    const DetectorProfile d(0.98, 0.05);
    const Probability b(0.001);

    const auto m = json::parse(
        run({"metrics", "--tpr", "0.98", "--fpr", "0.05", "--base-rate", "0.001", "--n", "100000", "--format", "json"})
            .out);
    const auto lib = metrics(d, b);
    CHECK(m["metrics"]["accuracy"].get<double>() == *lib.accuracy);
    CHECK(m["metrics"]["precision"].get<double>() == *lib.precision);
    CHECK(m["metrics"]["recall"].get<double>() == *lib.recall);
    CHECK(m["metrics"]["f1"].get<double>() == *lib.f1);
    const auto counts = expected_counts(d, Population{b, 100000});
    CHECK(m["counts"]["tp"].get<double>() == counts.tp);
    CHECK(m["counts"]["fp"].get<double>() == counts.fp);
    CHECK(m["counts"]["tn"].get<double>() == counts.tn);

    const auto p = json::parse(run({"posterior", "--tpr", "0.98", "--fpr", "0.05", "--base-rate", "0.001", "--format", "json"}).out);
    CHECK(p["posterior"].get<double>() == *posterior_given_positive(d, b).posterior);
    CHECK(p["marginal_positive"].get<double>() == posterior_given_positive(d, b).marginal_positive);

    const auto s = json::parse(run({"simulate", "--tpr", "0.98", "--fpr", "0.05", "--base-rate", "0.001", "--n",
                                    "100000", "--seed", "42", "--format", "json"})
                                   .out);
    const auto sim = montecarlo::simulate(montecarlo::SimulationConfig{
        .profile = d, .population = Population{b, 100000}, .seed = 42});
    CHECK(s["counts"]["tp"].get<std::int64_t>() == sim.counts.tp);
    CHECK(s["counts"]["fp"].get<std::int64_t>() == sim.counts.fp);
    CHECK(s["metrics"]["precision"].get<double>() == *sim.empirical_metrics.precision);
    CHECK(s["standard_error_precision"].get<double>() == *sim.standard_error_precision);
}

TEST_CASE("metrics table output") {
    const Run r = run({"metrics", "--tpr", "0.98", "--fpr", "0.05", "--base-rate", "0.001", "--n", "100000"});
    CHECK(r.code == 0);
    CHECK(r.out.find("precision  0.019242097\n") != std::string::npos);
    CHECK(r.out.find(render_confusion(expected_counts(DetectorProfile(0.98, 0.05), Population{Probability(0.001), 100000}))) !=
          std::string::npos);

    const Run all_ones = run({"metrics", "--tpr", "1", "--fpr", "0", "--base-rate", "0.5"});
    CHECK(all_ones.out == "accuracy   1\nprecision  1\nrecall     1\nf1         1\n");

    const Run rates = run({"metrics", "--tpr", "0.98", "--fpr", "0.05", "--base-rate", "0.001", "--rates"});
    CHECK(rates.out.find(render_confusion(DetectorProfile(0.98, 0.05))) != std::string::npos);
}

TEST_CASE("validation errors exit 2 and name the flag") {
    const std::vector<std::pair<std::vector<std::string>, std::string>> cases = {
        {{"metrics", "--tpr", "1.5", "--fpr", "0.05", "--base-rate", "0.001"}, "--tpr"},
        {{"metrics", "--tpr", "0.9", "--fpr", "5", "--base-rate", "0.001"}, "--fpr"},
        {{"metrics", "--tpr", "0.9", "--fpr", "0.05", "--base-rate", "nan"}, "--base-rate"},
        {{"metrics", "--tpr", "0.9", "--fpr", "0.05", "--base-rate", "0.1", "--n", "-3"}, "--n"},
        {{"posterior", "--tpr", "0.9", "--fpr", "-0.1", "--base-rate", "0.1"}, "--fpr"},
        {{"required-fpr", "--base-rate", "0.1", "--precision", "0"}, "precision"},
        {{"required-fpr", "--base-rate", "1", "--precision", "0.5"}, "base rate"},
        {{"required-base-rate", "--fpr", "0.1", "--precision", "0"}, "precision"},
        {{"simulate", "--tpr", "0.9", "--fpr", "0.1", "--base-rate", "0.1", "--n", "10", "--seed", "1",
          "--chunk-size", "0"},
         "--chunk-size"},
        {{"simulate", "--tpr", "0.9", "--fpr", "0.1", "--base-rate", "0.1", "--n", "9223372036854775808", "--seed",
          "1"},
         "exceeds"},
        {{"sweep", "--b-list", "0.2,0.1", "--fpr-list", "0.1"}, "ascending"},
        {{"sweep", "--preset", "zoom", "--b-list", "0.1"}, "--b-list"},
        {{"decide", "--posterior", "0.5", "--cost-fp", "0", "--cost-fn", "0"}, "cost"},
        {{"decide", "--tpr", "0.9", "--cost-fp", "1", "--cost-fn", "1"}, "--base-rate"},
        {{"metrics", "--tpr", "5%", "--fpr", "0.05", "--base-rate", "0.001"}, "--tpr"},
    };
    for (const auto& [args, needle] : cases) {
        CAPTURE(args);
        const Run r = run(args);
        CHECK(r.code == cli::kExitUsage);
        CHECK(r.out.empty());
        CHECK(r.err.find(needle) != std::string::npos);
        CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    }
}

TEST_CASE("required solvers via the CLI") {
    auto value = [](std::vector<std::string> args) {
        args.push_back("--format");
        args.push_back("json");
        const Run r = run(args);
        REQUIRE(r.code == 0);
        return json::parse(r.out);
    };
    CHECK(value({"required-fpr", "--base-rate", "0.05", "--precision", "0.9"})["value"].get<double>() ==
          required_fpr(Probability(0.05), Probability(0.9)).value);
    CHECK(value({"required-fpr", "--base-rate", "0.3", "--precision", "0.3"})["value"].get<double>() == 1.0);
    CHECK(value({"required-fpr", "--base-rate", "0.3", "--precision", "1"})["value"].get<double>() == 0.0);
    CHECK(value({"required-fpr", "--base-rate", "0", "--precision", "0.5"})["flag"] == "degenerate_no_damage");
    CHECK(value({"required-base-rate", "--fpr", "0.1", "--precision", "0.9"})["value"].get<double>() ==
          required_base_rate(Probability(0.1), Probability(0.9)).value);
    CHECK(std::abs(value({"required-base-rate", "--fpr", "0.05", "--precision", "0.0196271"})["value"].get<double>() -
                   0.001) < 1e-6);
}

TEST_CASE("simulate is deterministic across chunk sizes") {
    const std::vector<std::string> base = {"simulate", "--tpr", "0.98", "--fpr", "0.05", "--base-rate", "0.001",
                                           "--n", "1000000", "--seed", "42", "--format", "csv"};
    const Run a = run(base);
    auto chunked = base;
    chunked.insert(chunked.end(), {"--chunk-size", "333", "--workers", "4"});
    const Run b = run(chunked);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("seed,generator,", 0) == 0);

    const auto golden = temp_file("golden.csv");
    auto with_golden = base;
    with_golden.insert(with_golden.end(), {"--golden", golden.string()});
    CHECK(run(with_golden).code == 0);
    std::ifstream in(golden);
    const auto rec = montecarlo::parse_golden_csv(in);
    CHECK(rec.n == 1000000);
    CHECK(rec.generator == montecarlo::kGeneratorId);
    std::filesystem::remove(golden);
}

TEST_CASE("convergence subcommand") {
    const std::vector<std::string> args = {"convergence", "--tpr", "0.98", "--fpr", "0.05", "--base-rate", "0.001",
                                           "--seed", "3", "--n-grid", "0,1000,100000"};
    const Run a = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == run(args).out);
    CHECK(a.out.find("\n0,null,0.019242097,null\n") != std::string::npos);
    const Run bad = run({"convergence", "--tpr", "0.98", "--fpr", "0.05", "--base-rate", "0.001", "--seed", "3",
                         "--n-grid", "1000,10"});
    CHECK(bad.code == cli::kExitUsage);
}

TEST_CASE("sweep subcommand") {
    SUBCASE("single cell to stdout") {
        const Run r = run({"sweep", "--b-list", "0.001", "--fpr-list", "0.05"});
        CHECK(r.code == 0);
        CHECK(r.out == "b,fpr,tpr,accuracy,precision,recall,f1\n0.001,0.05,1,0.95005,0.0196270854,1,0.0384985563\n");
    }
    SUBCASE("metric subset") {
        const Run r = run({"sweep", "--b-list", "0,0.5", "--fpr-list", "0", "--metrics", "f1,precision"});
        CHECK(r.out == "b,fpr,tpr,precision,f1\n0,0,1,null,null\n0.5,0,1,1,1\n");
    }
    SUBCASE("zoom preset to a file matches the library") {
        const auto path = temp_file("zoom.csv");
        const Run r = run({"sweep", "--preset", "zoom", "--out", path.string()});
        CHECK(r.code == 0);
        std::ifstream in(path);
        const std::string written{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
        CHECK(written == sweep::to_csv(sweep::zoom_sweep(sweep::zoom_preset())));
        std::filesystem::remove(path);
    }
    SUBCASE("unwritable path") {
        const Run r = run({"sweep", "--preset", "full", "--out", "/nonexistent-dir/grid.csv"});
        CHECK(r.code == cli::kExitUsage);
        CHECK(r.err.find("/nonexistent-dir/grid.csv") != std::string::npos);
    }
}

TEST_CASE("requirement-curve subcommand") {
    const Run r = run({"requirement-curve", "--targets", "0.5", "--b-list", "0.5,0.6"});
    CHECK(r.code == 0);
    CHECK(r.out == "b,target,required_fpr,flag\n0.5,0.5,1,none\n0.6,0.5,1.5,unconstrained\n");
}

TEST_CASE("decide subcommand") {
    SUBCASE("direct posterior") {
        const auto j = json::parse(run({"decide", "--posterior", "0.21", "--cost-fp", "5", "--cost-fn", "20", "--format", "json"}).out);
        CHECK(j["action"] == "act");
        CHECK(j["act_threshold"].get<double>() == decision::act_threshold(decision::CostModel(5, 20)));
        CHECK(j["expected_cost_act"].get<double>() == (1 - 0.21) * 5);
        CHECK(j["expected_cost_no_act"].get<double>() == 0.21 * 20);
    }
    SUBCASE("certain damage") {
        const auto j = json::parse(run({"decide", "--posterior", "1", "--cost-fp", "3", "--cost-fn", "1", "--format", "json"}).out);
        CHECK(j["action"] == "act");
        CHECK(j["expected_cost_act"].get<double>() == 0.0);
    }
    SUBCASE("tie acts") {
        const auto j = json::parse(run({"decide", "--posterior", "0.5", "--cost-fp", "1", "--cost-fn", "1", "--format", "json"}).out);
        CHECK(j["action"] == "act");
    }
    SUBCASE("follow-up evidence file") {
        const auto path = temp_file("evidence.jsonl");
        write_file(path, "{\"tpr\": 0.98, \"fpr\": 0.05, \"outcome\": \"positive\"}\n");
        const auto j = json::parse(run({"decide", "--tpr", "0.98", "--fpr", "0.05", "--base-rate", "0.001",
                                        "--evidence", path.string(), "--cost-fp", "1", "--cost-fn", "10", "--format", "json"}).out);
        const std::vector seq{decision::Evidence{DetectorProfile(0.98, 0.05), decision::Outcome::positive},
                              decision::Evidence{DetectorProfile(0.98, 0.05), decision::Outcome::positive}};
        CHECK(j["posterior"].get<double>() == decision::update_posterior(Probability(0.001), seq));
        CHECK(j["evidence_count"] == 2);
        CHECK(j["action"] == "act");
        std::filesystem::remove(path);
    }
    SUBCASE("malformed evidence file names the line and field") {
        const auto path = temp_file("bad_evidence.jsonl");
        write_file(path, "{\"tpr\": 0.98, \"fpr\": 0.05, \"outcome\": \"positive\"}\n{\"tpr\": 0.9, \"outcome\": \"negative\"}\n");
        const Run r = run({"decide", "--tpr", "0.98", "--fpr", "0.05", "--base-rate", "0.001", "--evidence",
                           path.string(), "--cost-fp", "1", "--cost-fn", "10"});
        CHECK(r.code == cli::kExitUsage);
        CHECK(r.err.find("line 2") != std::string::npos);
        CHECK(r.err.find("\"fpr\"") != std::string::npos);
        std::filesystem::remove(path);
    }
    SUBCASE("missing evidence file") {
        const Run r = run({"decide", "--tpr", "0.98", "--fpr", "0.05", "--base-rate", "0.001", "--evidence",
                           "/nonexistent/e.jsonl", "--cost-fp", "1", "--cost-fn", "10"});
        CHECK(r.code == cli::kExitUsage);
    }
}

TEST_CASE("select-point subcommand") {
    const auto path = temp_file("roc.json");
    write_file(path, R"([{"threshold": 1, "tpr": 1.0, "fpr": 0.05}, {"threshold": 2, "tpr": 0.8, "fpr": 0.005}])");
    const auto none = json::parse(run({"select-point", "--curve", path.string(), "--base-rate", "0.05", "--target-precision", "0.9", "--format", "json"}).out);
    CHECK(none["selected"].is_null());
    CHECK(none["best_precision"].get<double>() == doctest::Approx(0.04 / 0.04475));
    const auto some = json::parse(run({"select-point", "--curve", path.string(), "--base-rate", "0.05", "--target-precision", "0.5", "--format", "json"}).out);
    CHECK(some["selected"]["threshold"].get<double>() == 1.0);

    write_file(path, R"([{"threshold": 1, "tpr": 0.5, "fpr": 0.05}, {"threshold": 2, "tpr": 0.8, "fpr": 0.005}])");
    const Run bad = run({"select-point", "--curve", path.string(), "--base-rate", "0.05", "--target-precision", "0.5"});
    CHECK(bad.code == cli::kExitUsage);
    CHECK(bad.err.find("staircase") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("help and version") {
    const Run v = run({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out == std::string(cli::kVersion) + "\n");
    const Run h = run({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("metrics") != std::string::npos);
    const Run none = run({});
    CHECK(none.code == cli::kExitUsage);
    const Run unknown = run({"frobnicate"});
    CHECK(unknown.code == cli::kExitUsage);
}
