#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace bjq {

// Proportional-hazards fit with a Breslow baseline. Coefficients are on the
// raw covariate scale; the baseline cumulative hazard absorbs the
// standardization used during fitting.
struct CoxModel {
    Eigen::VectorXd coefficients;
    std::vector<double> baseline_times;   // distinct event times, ascending
    std::vector<double> baseline_cumhaz;  // Breslow cumulative hazard at those times
    double train_horizon = 0.0;           // largest observed time in training
};

struct CoxDiagnostics {
    std::vector<double> log_likelihood_trace; // accepted values, one per iteration
    int iterations = 0;
    double final_gradient_norm = 0.0;
};

// Damped Newton-Raphson on the Breslow partial likelihood. Features are
// standardized internally; separation is reported when a standardized
// coefficient passes 50.
CoxModel cox_fit(const Eigen::MatrixXd& features,
                 const Eigen::VectorXd& observed,
                 const std::vector<std::uint8_t>& events,
                 CoxDiagnostics* diagnostics = nullptr);

// Restricted mean survival time: integral of S(t|x) over [0, horizon],
// evaluated exactly over the baseline step intervals.
double cox_rmst(const CoxModel& model, const Eigen::VectorXd& x, double horizon);

} // namespace bjq
