#include "andor/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace andor {

std::vector<double> normalize_priors(std::span<const double> scores) {
    if (scores.empty()) {
        throw std::invalid_argument("normalize_priors: empty score list");
    }
    double total = 0.0;
    for (double s : scores) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw std::invalid_argument("normalize_priors: scores must be finite and non-negative");
        }
        total += s;
    }
    std::vector<double> out(scores.size());
    if (total == 0.0) {
        std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(scores.size()));
        return out;
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = scores[i] / total;
    }
    return out;
}

}  // namespace andor
