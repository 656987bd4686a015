#include "bjq/kaplan_meier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bjq {

KMCurve km_fit(const std::vector<Residual>& residuals) {
    if (residuals.empty()) throw std::runtime_error("km_fit: no residuals");
    for (const Residual& r : residuals) {
        if (!std::isfinite(r.value))
            throw std::runtime_error("km_fit: non-finite residual");
    }

    std::vector<Residual> sorted(residuals);
    std::sort(sorted.begin(), sorted.end(), [](const Residual& a, const Residual& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.event > b.event; // events ahead of censorings at ties
    });

    // Largest-residual correction: censored observations at the maximum value
    // become events, otherwise the estimated distribution loses mass.
    const double max_value = sorted.back().value;
    for (auto it = sorted.rbegin(); it != sorted.rend() && it->value == max_value; ++it) {
        it->event = true;
    }

    KMCurve curve;
    double survival = 1.0;
    std::size_t at_risk = sorted.size();
    std::size_t i = 0;
    while (i < sorted.size()) {
        const double t = sorted[i].value;
        std::size_t deaths = 0, leaving = 0;
        while (i < sorted.size() && sorted[i].value == t) {
            if (sorted[i].event) ++deaths;
            ++leaving;
            ++i;
        }
        if (deaths > 0) {
            const double next = survival * (1.0 - static_cast<double>(deaths) /
                                                      static_cast<double>(at_risk));
            curve.jump_times.push_back(t);
            curve.survival_after.push_back(next);
            curve.point_mass.push_back(survival - next);
            survival = next;
        }
        at_risk -= leaving;
    }

    const std::size_t m = curve.jump_times.size();
    curve.tail_mass.assign(m, 0.0);
    curve.tail_weighted.assign(m, 0.0);
    double tm = 0.0, tw = 0.0;
    for (std::size_t j = m; j-- > 0;) {
        tm += curve.point_mass[j];
        tw += curve.jump_times[j] * curve.point_mass[j];
        curve.tail_mass[j] = tm;
        curve.tail_weighted[j] = tw;
    }
    return curve;
}

double km_tail_expectation(const KMCurve& curve, double threshold) {
    // first jump strictly above the threshold
    const auto it = std::upper_bound(curve.jump_times.begin(), curve.jump_times.end(),
                                     threshold);
    if (it == curve.jump_times.end())
        throw std::runtime_error("km_tail_expectation: degenerate tail");
    const auto j = static_cast<std::size_t>(it - curve.jump_times.begin());
    const double mass = curve.tail_mass[j];
    if (mass <= 0.0)
        throw std::runtime_error("km_tail_expectation: degenerate tail");
    return curve.tail_weighted[j] / mass;
}

double km_survival_at(const KMCurve& curve, double t) {
    // last jump <= t, right-continuous
    const auto it = std::upper_bound(curve.jump_times.begin(), curve.jump_times.end(), t);
    if (it == curve.jump_times.begin()) return 1.0;
    return curve.survival_after[static_cast<std::size_t>(it - curve.jump_times.begin()) - 1];
}

} // namespace bjq
