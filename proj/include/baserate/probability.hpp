#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace baserate {

/// A real number in [0, 1]. Construction rejects NaN and anything outside
/// the closed unit interval, so code holding a Probability never re-checks.
class Probability {
public:
    constexpr Probability() = default;

    explicit Probability(double value, std::string_view what = "probability")
        : value_(value) {
        if (std::isnan(value) || value < 0.0 || value > 1.0) {
            throw std::invalid_argument(std::string(what) + " must be a probability in [0, 1], got " +
                                        std::to_string(value));
        }
    }

    constexpr double value() const noexcept { return value_; }
    constexpr operator double() const noexcept { return value_; }

    /// 1 - p, still a probability.
    Probability complement() const noexcept {
        Probability p;
        p.value_ = 1.0 - value_;
        return p;
    }

private:
    double value_ = 0.0;
};

/// A metric that may be undefined (0/0). nullopt is the undefined marker and
/// serializes as JSON null / CSV "null".
using MaybeValue = std::optional<double>;

}  // namespace baserate
