#include "bjq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bjq {

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("quantile: empty input");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p outside [0,1]");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n == 1) return values[0];
    const double h = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return values[n - 1];
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double mean(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("mean: empty input");
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& x) {
    Standardizer s;
    const auto n = static_cast<double>(x.rows());
    s.offset = x.colwise().mean();
    s.scale.resize(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double ss = (x.col(j).array() - s.offset[j]).square().sum();
        const double sd = std::sqrt(ss / n);
        s.scale[j] = sd > 1e-12 ? sd : 1.0;
    }
    return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const {
    if (x.cols() != offset.size())
        throw std::invalid_argument("Standardizer: dimension mismatch");
    return (x.rowwise() - offset.transpose()).array().rowwise() /
           scale.transpose().array();
}

Eigen::VectorXd Standardizer::apply_row(const Eigen::VectorXd& x) const {
    if (x.size() != offset.size())
        throw std::invalid_argument("Standardizer: dimension mismatch");
    return (x - offset).cwiseQuotient(scale);
}

} // namespace bjq
