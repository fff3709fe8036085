#include "qnet/purification.hpp"

#include <stdexcept>

namespace qnet {

double purify_step(double q1, double q2) {
    if (q1 < 0.0 || q1 > 1.0 || q2 < 0.0 || q2 > 1.0) {
        throw std::domain_error("purify_step: fidelity outside [0,1]");
    }
    // Limit conventions for the exact endpoints. 0 and 1 together leave the
    // denominator at zero with no limit, so that pair is rejected.
    const bool any_zero = (q1 == 0.0 || q2 == 0.0);
    const bool any_one = (q1 == 1.0 || q2 == 1.0);
    if (any_zero && any_one) {
        throw std::domain_error("purify_step: undefined for the (0,1) pair");
    }
    if (any_zero) return 0.0;
    if (any_one) return 1.0;
    const double num = q1 * q2;
    const double den = num + (1.0 - q1) * (1.0 - q2);
    return num / den;
}

double chained_fidelity(double base, int pairs) {
    if (base <= 0.0 || base > 1.0) {
        throw std::domain_error("chained_fidelity: base fidelity outside (0,1]");
    }
    if (pairs < 1) {
        throw std::domain_error("chained_fidelity: at least one pair is required");
    }
    double f = base;
    for (int round = 1; round < pairs; ++round) {
        f = purify_step(f, base);
    }
    return f;
}

std::optional<int> min_pairs(double base, double target, int cap) {
    if (cap < 1) {
        throw std::domain_error("min_pairs: cap must be positive");
    }
    if (base <= 0.0 || base > 1.0) {
        throw std::domain_error("min_pairs: base fidelity outside (0,1]");
    }
    double f = base;
    if (f >= target) return 1;
    for (int k = 2; k <= cap; ++k) {
        const double next = purify_step(f, base);
        if (next <= f) break; // no further improvement possible (base <= 0.5 or saturated)
        f = next;
        if (f >= target) return k;
    }
    return std::nullopt;
}

PurificationTable::PurificationTable(double base_fidelity, int max_pairs) : base_(base_fidelity) {
    if (max_pairs < 1) {
        throw std::domain_error("PurificationTable: max_pairs must be positive");
    }
    achieved_.reserve(static_cast<size_t>(max_pairs));
    achieved_.push_back(base_fidelity == 1.0 ? 1.0 : chained_fidelity(base_fidelity, 1));
    for (int k = 2; k <= max_pairs; ++k) {
        achieved_.push_back(purify_step(achieved_.back(), base_));
    }
}

std::optional<int> PurificationTable::min_pairs(double target) const {
    for (size_t i = 0; i < achieved_.size(); ++i) {
        if (achieved_[i] >= target) return static_cast<int>(i) + 1;
        if (i > 0 && achieved_[i] <= achieved_[i - 1]) break;
    }
    return std::nullopt;
}

} // namespace qnet
