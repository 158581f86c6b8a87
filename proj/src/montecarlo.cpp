#include "baserate/montecarlo.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace baserate::montecarlo {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Tally {
    std::int64_t tp = 0;
    std::int64_t fn = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;

    Tally& operator+=(const Tally& o) {
        tp += o.tp;
        fn += o.fn;
        fp += o.fp;
        tn += o.tn;
        return *this;
    }
};

Tally run_range(const CounterStream& stream, std::uint64_t begin, std::uint64_t end, double base_rate,
                double tpr, double fpr) {
    Tally t;
    for (std::uint64_t i = begin; i < end; ++i) {
        const bool damaged = stream.uniform(2 * i) < base_rate;
        const bool flagged = stream.uniform(2 * i + 1) < (damaged ? tpr : fpr);
        if (damaged) {
            flagged ? ++t.tp : ++t.fn;
        } else {
            flagged ? ++t.fp : ++t.tn;
        }
    }
    return t;
}

}  // namespace

CounterStream::CounterStream(std::uint64_t seed) noexcept : key_(mix64(seed + kGamma)) {}

std::uint64_t CounterStream::bits(std::uint64_t counter) const noexcept {
    return mix64(key_ + (counter + 1) * kGamma);
}

double CounterStream::uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

SimulationResult simulate(const SimulationConfig& config) {
    if (config.chunk_size == 0) {
        throw std::invalid_argument("simulate: chunk_size must be >= 1");
    }
    const std::uint64_t n = config.population.size;
    if (n > kMaxPopulation) {
        throw std::overflow_error(
            fmt::format("simulate: population {} exceeds the count capacity {}", n, kMaxPopulation));
    }

    const CounterStream stream(config.seed);
    const double b = config.population.base_rate;
    const double tpr = config.profile.tpr();
    const double fpr = config.profile.fpr();

    const std::uint64_t chunk = config.chunk_size;
    const std::uint64_t chunks = n / chunk + (n % chunk != 0 ? 1 : 0);

    unsigned workers = config.workers == 0 ? std::thread::hardware_concurrency() : config.workers;
    workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(chunks, 1)));

    std::atomic<std::uint64_t> next{0};
    std::vector<Tally> partial(workers);
    auto work = [&](unsigned slot) {
        for (std::uint64_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
            const std::uint64_t begin = c * chunk;
            const std::uint64_t end = std::min(n, begin + chunk);
            partial[slot] += run_range(stream, begin, end, b, tpr, fpr);
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
    }

    Tally total;
    for (const auto& t : partial) {
        total += t;
    }

    SimulationResult result;
    result.counts = EmpiricalCounts{.tp = total.tp, .fn = total.fn, .fp = total.fp, .tn = total.tn};
    result.empirical_metrics = metrics_from_counts(result.counts);
    const auto flagged = result.counts.flagged();
    if (flagged > 0 && result.empirical_metrics.precision) {
        const double p = *result.empirical_metrics.precision;
        result.standard_error_precision = std::sqrt(p * (1.0 - p) / static_cast<double>(flagged));
    }
    return result;
}

std::vector<ConvergenceRow> convergence_report(const SimulationConfig& config,
                                               std::span<const std::uint64_t> n_grid) {
    if (n_grid.empty()) {
        throw std::invalid_argument("convergence_report: n_grid must be nonempty");
    }
    if (std::adjacent_find(n_grid.begin(), n_grid.end(), std::greater_equal<>{}) != n_grid.end()) {
        throw std::invalid_argument("convergence_report: n_grid must be strictly ascending");
    }

    const MaybeValue closed = metrics(config.profile, config.population.base_rate).precision;
    std::vector<ConvergenceRow> rows;
    rows.reserve(n_grid.size());
    for (const std::uint64_t n : n_grid) {
        SimulationConfig c = config;
        c.population.size = n;
        const SimulationResult r = simulate(c);
        ConvergenceRow row{.n = n,
                           .empirical_precision = r.empirical_metrics.precision,
                           .closed_form_precision = closed,
                           .abs_error = std::nullopt};
        if (row.empirical_precision && closed) {
            row.abs_error = std::abs(*row.empirical_precision - *closed);
        }
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::string csv_value(const MaybeValue& v) { return v ? fmt::format("{:.9g}", *v) : "null"; }

}  // namespace

std::string convergence_csv(std::span<const ConvergenceRow> rows) {
    std::string out = "n,empirical_precision,closed_form_precision,abs_error\n";
    for (const auto& r : rows) {
        out += fmt::format("{},{},{},{}\n", r.n, csv_value(r.empirical_precision),
                           csv_value(r.closed_form_precision), csv_value(r.abs_error));
    }
    return out;
}

std::string golden_csv(const SimulationConfig& config, const SimulationResult& result) {
    std::string out = "seed,generator,tpr,fpr,base_rate,n,tp,fn,fp,tn\n";
    out += fmt::format("{},{},{:.17g},{:.17g},{:.17g},{},{},{},{},{}\n", config.seed, kGeneratorId,
                       config.profile.tpr().value(), config.profile.fpr().value(),
                       config.population.base_rate.value(), config.population.size, result.counts.tp,
                       result.counts.fn, result.counts.fp, result.counts.tn);
    return out;
}

GoldenRecord parse_golden_csv(std::istream& in) {
    std::string header;
    std::string data;
    if (!std::getline(in, header) || !std::getline(in, data)) {
        throw std::runtime_error("golden file: expected a header row and a data row");
    }
    if (header != "seed,generator,tpr,fpr,base_rate,n,tp,fn,fp,tn") {
        throw std::runtime_error("golden file: unexpected header '" + header + "'");
    }
    std::vector<std::string> fields;
    std::stringstream ss(data);
    for (std::string f; std::getline(ss, f, ',');) {
        fields.push_back(f);
    }
    if (fields.size() != 10) {
        throw std::runtime_error(fmt::format("golden file: expected 10 fields, got {}", fields.size()));
    }
    GoldenRecord g;
    g.seed = std::stoull(fields[0]);
    g.generator = fields[1];
    g.tpr = std::stod(fields[2]);
    g.fpr = std::stod(fields[3]);
    g.base_rate = std::stod(fields[4]);
    g.n = std::stoull(fields[5]);
    g.counts = EmpiricalCounts{.tp = std::stoll(fields[6]),
                               .fn = std::stoll(fields[7]),
                               .fp = std::stoll(fields[8]),
                               .tn = std::stoll(fields[9])};
    return g;
}

}  // namespace baserate::montecarlo
