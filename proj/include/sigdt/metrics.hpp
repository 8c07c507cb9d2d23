#pragma once

#include <span>

namespace sigdt {

struct ThresholdEer {
    double threshold = 0.0;
    double eer = 0.0;
    double far = 0.0;
    double frr = 0.0;
};

/// Equal error rate at a score threshold chosen from the candidate set
/// {-inf, +inf} ∪ scores ∪ midpoints of adjacent distinct sorted scores.
///
/// FRR(t) = fraction of genuine scores below t, FAR(t) = fraction of
/// forgery scores at or above t (accept iff score >= t). The threshold
/// minimizing |FAR - FRR| wins, ties going to the smaller threshold, and
/// the EER is (FAR + FRR) / 2 there. Throws DataError if either set is
/// empty.
ThresholdEer user_threshold_eer(std::span<const double> genuine, std::span<const double> forgery);

}  // namespace sigdt
