#pragma once
#include <vector>

namespace bjq {

struct Residual {
    double value = 0.0;
    bool event = false;
};

// Product-limit estimate over residuals, stored right-continuous. After the
// largest-residual correction the point masses sum to 1, so the curve is a
// proper distribution and tail conditional expectations are well defined.
struct KMCurve {
    std::vector<double> jump_times;     // distinct event residuals, ascending
    std::vector<double> survival_after; // S(t+) at each jump
    std::vector<double> point_mass;     // S(t-) - S(t+)

    // suffix sums over jumps j..end, precomputed at fit time
    std::vector<double> tail_mass;
    std::vector<double> tail_weighted; // sum of t * mass over the tail
};

// Standard product-limit fit. Censored residuals tied with an event residual
// stay in the risk set for that event. If the largest residual is censored it
// is reclassified as an event so the distribution carries total mass 1.
KMCurve km_fit(const std::vector<Residual>& residuals);

// E[t | t > threshold] under the fitted residual distribution. Throws
// "degenerate tail" when no jump lies strictly above the threshold.
double km_tail_expectation(const KMCurve& curve, double threshold);

// Right-continuous step evaluation of S(t).
double km_survival_at(const KMCurve& curve, double t);

} // namespace bjq
