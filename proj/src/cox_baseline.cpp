#include "bjq/cox_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bjq/stats.hpp"

namespace bjq {

namespace {

struct TimeGroup {
    double time = 0.0;
    std::vector<int> rows;   // everyone with this observed time
    std::vector<int> deaths; // the event rows among them
};

// Groups rows by distinct observed time, ascending. Risk sets are suffixes.
std::vector<TimeGroup> group_by_time(const Eigen::VectorXd& observed,
                                     const std::vector<std::uint8_t>& events) {
    std::vector<int> order(static_cast<std::size_t>(observed.size()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return observed[a] < observed[b]; });

    std::vector<TimeGroup> groups;
    for (int idx : order) {
        if (groups.empty() || observed[idx] != groups.back().time) {
            groups.push_back({observed[idx], {}, {}});
        }
        groups.back().rows.push_back(idx);
        if (events[static_cast<std::size_t>(idx)]) groups.back().deaths.push_back(idx);
    }
    return groups;
}

struct Score {
    double loglik = 0.0;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd information; // observed information (negated Hessian)
};

Score partial_likelihood(const Eigen::MatrixXd& z, const std::vector<TimeGroup>& groups,
                         const Eigen::VectorXd& beta, bool with_derivatives) {
    const Eigen::Index p = z.cols();
    Score score;
    score.gradient = Eigen::VectorXd::Zero(p);
    score.information = Eigen::MatrixXd::Zero(p, p);

    const Eigen::VectorXd lp = z * beta;
    const Eigen::VectorXd w = lp.array().exp();

    // accumulate risk-set sums from the largest time downward
    double s0 = 0.0;
    Eigen::VectorXd s1 = Eigen::VectorXd::Zero(p);
    Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(p, p);
    double loglik = 0.0;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(p);
    Eigen::MatrixXd info = Eigen::MatrixXd::Zero(p, p);

    for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
        for (int row : it->rows) {
            s0 += w[row];
            if (with_derivatives) {
                s1 += w[row] * z.row(row).transpose();
                s2 += w[row] * (z.row(row).transpose() * z.row(row));
            }
        }
        const auto d = static_cast<double>(it->deaths.size());
        if (d == 0.0) continue;
        for (int row : it->deaths) {
            loglik += lp[row];
            if (with_derivatives) grad += z.row(row).transpose();
        }
        loglik -= d * std::log(s0);
        if (with_derivatives) {
            const Eigen::VectorXd mean = s1 / s0;
            grad -= d * mean;
            info += d * (s2 / s0 - mean * mean.transpose());
        }
    }
    score.loglik = loglik;
    score.gradient = grad;
    score.information = info;
    return score;
}

} // namespace

CoxModel cox_fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& observed,
                 const std::vector<std::uint8_t>& events, CoxDiagnostics* diagnostics) {
    const Eigen::Index n = features.rows();
    const Eigen::Index p = features.cols();
    if (n != observed.size() || static_cast<std::size_t>(n) != events.size())
        throw std::invalid_argument("cox_fit: shape mismatch");
    std::size_t n_events = 0;
    for (auto e : events) n_events += e ? 1 : 0;
    if (n_events < 2) throw std::runtime_error("cox_fit: needs at least 2 events");

    const Standardizer standardizer = Standardizer::fit(features);
    const Eigen::MatrixXd z = standardizer.apply(features);
    const std::vector<TimeGroup> groups = group_by_time(observed, events);

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Score current = partial_likelihood(z, groups, beta, true);
    if (diagnostics) diagnostics->log_likelihood_trace.push_back(current.loglik);

    constexpr int kMaxIter = 100;
    constexpr double kGradTol = 1e-8;
    constexpr double kSeparationBound = 50.0;
    int iter = 0;
    while (true) {
        const double grad_norm = current.gradient.cwiseAbs().maxCoeff();
        if (diagnostics) {
            diagnostics->iterations = iter;
            diagnostics->final_gradient_norm = grad_norm;
        }
        if (grad_norm < kGradTol) break;
        if (iter >= kMaxIter)
            throw std::runtime_error("cox_fit: no convergence, gradient norm " +
                                     std::to_string(grad_norm));

        Eigen::LDLT<Eigen::MatrixXd> ldlt(current.information);
        if (ldlt.info() != Eigen::Success)
            throw std::runtime_error("cox_fit: singular information matrix");
        const Eigen::VectorXd direction = ldlt.solve(current.gradient);

        // halve the step until the partial likelihood does not decrease
        double step = 1.0;
        bool accepted = false;
        Eigen::VectorXd candidate;
        Score next;
        for (int halvings = 0; halvings <= 20; ++halvings) {
            candidate = beta + step * direction;
            next = partial_likelihood(z, groups, candidate, true);
            if (std::isfinite(next.loglik) && next.loglik >= current.loglik) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (grad_norm < 1e-5) break; // stalled at the optimum's noise floor
            throw std::runtime_error("cox_fit: no convergence, gradient norm " +
                                     std::to_string(grad_norm));
        }
        beta = candidate;
        current = next;
        ++iter;
        if (beta.cwiseAbs().maxCoeff() > kSeparationBound)
            throw std::runtime_error("cox_fit: separation");
        if (diagnostics) diagnostics->log_likelihood_trace.push_back(current.loglik);
    }

    CoxModel model;
    // shift to raw scale: lp_raw = lp_std + sum(beta_j * mean_j / scale_j)
    model.coefficients = beta.cwiseQuotient(standardizer.scale);
    const double shift = model.coefficients.dot(standardizer.offset);

    // Breslow cumulative baseline hazard on the raw linear-predictor scale
    const Eigen::VectorXd w = (z * beta).array().exp();
    double s0 = 0.0;
    std::vector<double> hazard_increments;
    std::vector<double> hazard_times;
    for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
        for (int row : it->rows) s0 += w[row];
        if (it->deaths.empty()) continue;
        hazard_times.push_back(it->time);
        hazard_increments.push_back(static_cast<double>(it->deaths.size()) /
                                    (s0 * std::exp(shift)));
    }
    std::reverse(hazard_times.begin(), hazard_times.end());
    std::reverse(hazard_increments.begin(), hazard_increments.end());
    double cum = 0.0;
    model.baseline_times = hazard_times;
    model.baseline_cumhaz.reserve(hazard_increments.size());
    for (double h : hazard_increments) {
        cum += h;
        model.baseline_cumhaz.push_back(cum);
    }
    model.train_horizon = observed.maxCoeff();
    return model;
}

double cox_rmst(const CoxModel& model, const Eigen::VectorXd& x, double horizon) {
    if (x.size() != model.coefficients.size())
        throw std::invalid_argument("cox_rmst: dimension mismatch");
    if (horizon > model.train_horizon + 1e-12)
        throw std::invalid_argument("cox_rmst: horizon beyond training data");
    if (horizon <= 0.0) return 0.0;

    const double risk = std::exp(x.dot(model.coefficients));
    double area = 0.0;
    double position = 0.0;
    double cumhaz = 0.0;
    for (std::size_t j = 0; j < model.baseline_times.size(); ++j) {
        const double t = model.baseline_times[j];
        if (t > 0.0) {
            const double upto = std::min(t, horizon);
            if (upto > position) {
                area += (upto - position) * std::exp(-cumhaz * risk);
                position = upto;
            }
            if (position >= horizon) return area;
        }
        cumhaz = model.baseline_cumhaz[j];
    }
    if (horizon > position) area += (horizon - position) * std::exp(-cumhaz * risk);
    return area;
}

} // namespace bjq
