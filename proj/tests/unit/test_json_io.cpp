#include <doctest.h>

#include <sstream>

#include "baserate/json_io.hpp"

using namespace baserate;
using namespace baserate::json_io;

TEST_CASE("report field names") {
    const auto m = to_json(metrics(DetectorProfile(0.9, 0.0), Probability(0.0)));
    CHECK(m.dump() == R"({"accuracy":1.0,"precision":null,"recall":0.9,"f1":null})");

    const auto p = to_json(posterior_given_positive(DetectorProfile(0.98, 0.05), Probability(0.001)));
    std::vector<std::string> keys;
    for (const auto& [k, v] : p.items()) {
        keys.push_back(k);
    }
    CHECK(keys == std::vector<std::string>{"prior", "likelihood_positive", "likelihood_false", "marginal_positive",
                                           "posterior"});

    CHECK(to_json(Requirement{1.5, RequirementFlag::unconstrained}).dump() ==
          R"({"value":1.5,"flag":"unconstrained"})");
    CHECK(to_json(EmpiricalCounts{.tp = 1, .fn = 2, .fp = 3, .tn = 4}).dump() ==
          R"({"mode":"empirical","tp":1,"fn":2,"fp":3,"tn":4})");
}

TEST_CASE("read_evidence: JSON lines and arrays") {
    std::istringstream lines(R"({"tpr": 0.98, "fpr": 0.05, "outcome": "positive"}

{"tpr": 0.9, "fpr": 0.1, "outcome": "negative"}
)");
    const auto ev = read_evidence(lines);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].outcome == decision::Outcome::positive);
    CHECK(ev[1].outcome == decision::Outcome::negative);
    CHECK(ev[1].profile.fpr().value() == 0.1);

    std::istringstream arr(R"([{"tpr": 0.98, "fpr": 0.05, "outcome": "positive"}])");
    CHECK(read_evidence(arr).size() == 1);

    std::istringstream empty("");
    CHECK(read_evidence(empty).empty());
}

TEST_CASE("read_evidence reports line and field") {
    auto expect = [](const std::string& text, std::size_t line, const std::string& field) {
        std::istringstream in(text);
        try {
            read_evidence(in);
            FAIL("expected InputError for: " << text);
        } catch (const InputError& e) {
            CHECK(e.line() == line);
            CHECK(e.field() == field);
            CHECK(std::string(e.what()).find("line " + std::to_string(line)) != std::string::npos);
        }
    };
    expect("{\"tpr\":0.9,\"fpr\":0.1,\"outcome\":\"positive\"}\n{\"fpr\":0.1,\"outcome\":\"positive\"}\n", 2, "tpr");
    expect("{\"tpr\":1.2,\"fpr\":0.1,\"outcome\":\"positive\"}\n", 1, "tpr");
    expect("{\"tpr\":0.9,\"fpr\":\"x\",\"outcome\":\"positive\"}\n", 1, "fpr");
    expect("{\"tpr\":0.9,\"fpr\":0.1,\"outcome\":\"maybe\"}\n", 1, "outcome");
    expect("{\"tpr\":0.9,\"fpr\":0.1,\"outcome\":\"positive\"}\n{not json\n", 2, "");
    expect("[1, 2]", 1, "");
}

TEST_CASE("read_roc_curve") {
    std::istringstream in(R"([{"threshold": 0.2, "tpr": 1.0, "fpr": 0.05},
                              {"threshold": 0.8, "tpr": 0.8, "fpr": 0.005}])");
    const auto curve = read_roc_curve(in);
    REQUIRE(curve.points().size() == 2);
    CHECK(curve.points()[0].threshold == 0.2);

    std::istringstream bad(R"({"threshold": 0.2, "tpr": 0.5, "fpr": 0.05}
{"threshold": 0.8, "tpr": 0.8, "fpr": 0.005}
)");
    CHECK_THROWS_AS(read_roc_curve(bad), InputError);
    std::istringstream none("");
    CHECK_THROWS_AS(read_roc_curve(none), InputError);
}
