#include "pfm/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pfm/errors.hpp"

namespace pfm {

double transfer_s(double x) {
    // tanh rounds to exactly 1 from |x| ~ 19.1 on; keep the probability below 1.
    static const double kBelowOne = std::nextafter(1.0, 0.0);
    return std::min(std::tanh(std::fabs(x)), kBelowOne);
}

std::vector<double> binarize(std::span<const double> raw, Rng& rng) {
    std::vector<double> bits(raw.size(), 0.0);
    for (std::size_t d = 0; d < raw.size(); ++d) {
        if (!std::isfinite(raw[d])) {
            throw EvaluationError("binarize: non-finite coordinate at index " + std::to_string(d));
        }
        const double u = rng.uniform01();
        bits[d] = u < transfer_s(raw[d]) ? 1.0 : 0.0;
    }
    return bits;
}

}  // namespace pfm
