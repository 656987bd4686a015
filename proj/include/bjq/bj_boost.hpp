#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <variant>
#include <vector>

#include "bjq/base_learners.hpp"
#include "bjq/kaplan_meier.hpp"
#include "bjq/stats.hpp"

namespace bjq {

enum class BaseLearnerKind { componentwise_ls, tree };
enum class InitMode { mean, least_squares };

struct BoostConfig {
    int iterations = 500;
    double learning_rate = 0.1;
    BaseLearnerKind learner = BaseLearnerKind::tree;
    int max_depth = 2;  // tree only
    int min_leaf = 5;   // tree only
    bool twin = false;  // componentwise only: restrict round 2 to round-1 picks
    InitMode init_mode = InitMode::mean;
};

using BoostTerm = std::variant<ComponentTerm, RegressionTree>;

// Boosted fit: offset plus learning-rate-scaled base learners, all operating
// in the stored standardized covariate space.
struct BoostModel {
    double offset = 0.0;
    double learning_rate = 0.1;
    Eigen::VectorXd init_coefficients; // empty unless init_mode = least_squares
    std::vector<BoostTerm> terms;
    Standardizer standardization;

    double predict(const Eigen::VectorXd& x) const;
};

struct LinearModel {
    double intercept = 0.0;
    Eigen::VectorXd coefficients;
    bool oscillated = false;
    int iterations_used = 0;

    double predict(const Eigen::VectorXd& x) const;
};

// Buckley-James imputation against a fitted residual distribution. Event rows
// pass through unchanged; censored rows become fitted + tail expectation of
// the residual curve above their own residual. A degenerate tail falls back
// to the observed time.
Eigen::VectorXd bj_impute(const Eigen::VectorXd& observed,
                          const std::vector<std::uint8_t>& events,
                          const Eigen::VectorXd& fitted,
                          const KMCurve& curve);

// Boosted Buckley-James fit. Each iteration refits the residual KM curve,
// imputes censored outcomes against the current function estimate, fits one
// base learner to the imputed residuals and takes a learning-rate step.
BoostModel bj_boost_fit(const Eigen::MatrixXd& features,
                        const Eigen::VectorXd& observed,
                        const std::vector<std::uint8_t>& events,
                        const BoostConfig& config);

// Classical iterative Buckley-James linear estimator: alternate residual KM,
// imputation and least squares to a fixed point. A two-cycle returns the
// average of the cycle pair with `oscillated` set.
LinearModel bj_linear_fit(const Eigen::MatrixXd& features,
                          const Eigen::VectorXd& observed,
                          const std::vector<std::uint8_t>& events,
                          int max_iter = 100, double tol = 1e-6);

// K-fold cross-validation over a config grid, stratified by event status.
// Validation error is mean squared error on validation events only. Ties are
// broken by smaller iteration count, then smaller learning rate.
BoostConfig cv_tune(const Eigen::MatrixXd& features,
                    const Eigen::VectorXd& observed,
                    const std::vector<std::uint8_t>& events,
                    const std::vector<BoostConfig>& grid,
                    int folds, std::uint64_t seed = 0);

} // namespace bjq
