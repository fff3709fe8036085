#pragma once

#include <optional>
#include <vector>

namespace qnet {

/// Fidelity of the pair obtained by purifying two Bell pairs of fidelity
/// q1 and q2:  q1*q2 / (q1*q2 + (1-q1)*(1-q2)).
/// Exact endpoints follow the limit convention: any 0 input yields 0, any
/// 1 input yields 1, and the (0,1) combination has no limit and throws.
double purify_step(double q1, double q2);

/// Fidelity after consuming `pairs` copies of a base-fidelity pair on one
/// edge, folding purify_step left to right (pairs-1 purification rounds).
/// chained_fidelity(b, 1) == b.
double chained_fidelity(double base, int pairs);

/// Smallest pair count k <= cap with chained_fidelity(base, k) >= target,
/// or nullopt when no such k exists (e.g. base <= 0.5 below the target, or
/// target too close to 1 for the cap).
std::optional<int> min_pairs(double base, double target, int cap);

/// Precomputed fidelity ladder for one edge: achieved(k) is the fidelity
/// reached by consuming k pairs, k in [1, max_pairs].
class PurificationTable {
public:
    PurificationTable(double base_fidelity, int max_pairs);

    double base() const { return base_; }
    int max_pairs() const { return static_cast<int>(achieved_.size()); }
    double achieved(int pairs) const { return achieved_.at(static_cast<size_t>(pairs - 1)); }

    /// Table-backed equivalent of min_pairs(base, target, max_pairs()).
    std::optional<int> min_pairs(double target) const;

private:
    double base_;
    std::vector<double> achieved_;
};

} // namespace qnet
