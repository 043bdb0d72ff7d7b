#pragma once

// Min-max rescaling of raw covariate values onto [0,1]. The extrema come from
// the training data and are reused unchanged for test data.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "bntr/error.hpp"

namespace bntr {

struct Extrema {
    double min = 0.0;
    double max = 1.0;

    bool constant() const noexcept { return min == max; }
};

inline Extrema compute_extrema(std::span<const double> values) {
    detail::require(!values.empty(), "no values to rescale");
    Extrema e{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidArgument("non-finite covariate value");
        e.min = std::min(e.min, v);
        e.max = std::max(e.max, v);
    }
    return e;
}

/// Affine map onto [0,1] by the given extrema. Values outside the training
/// range are clamped; constant extrema send everything to 0.5.
inline std::vector<double> apply_extrema(std::span<const double> values, const Extrema& e) {
    detail::require(std::isfinite(e.min) && std::isfinite(e.max) && e.min <= e.max, "invalid extrema");
    std::vector<double> out(values.size());
    const double range = e.max - e.min;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (!std::isfinite(v)) throw InvalidArgument("non-finite covariate value");
        out[i] = range == 0.0 ? 0.5 : std::clamp((v - e.min) / range, 0.0, 1.0);
    }
    return out;
}

struct Rescaled {
    std::vector<double> values;
    Extrema extrema;
};

inline Rescaled min_max_rescale(std::span<const double> values) {
    const Extrema e = compute_extrema(values);
    return Rescaled{apply_extrema(values, e), e};
}

}  // namespace bntr
