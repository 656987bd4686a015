#pragma once
#include <Eigen/Dense>
#include <vector>

namespace bjq {

// p-th empirical quantile with linear interpolation between order statistics
// (inclusive endpoints), i.e. the common type-7 rule.
double quantile(std::vector<double> values, double p);

double mean(const std::vector<double>& values);

// Per-column location/scale transform fitted on a training matrix. Constant
// columns keep scale 1 so they map to all-zero columns instead of NaN.
struct Standardizer {
    Eigen::VectorXd offset;
    Eigen::VectorXd scale;

    static Standardizer fit(const Eigen::MatrixXd& x);
    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
    Eigen::VectorXd apply_row(const Eigen::VectorXd& x) const;
    Eigen::Index dim() const { return offset.size(); }
};

} // namespace bjq
