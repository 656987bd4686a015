#include "bjq/bj_boost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "bjq/rng.hpp"

namespace bjq {

namespace {

constexpr double kDivergenceBound = 1e8;

std::size_t count_events(const std::vector<std::uint8_t>& events) {
    std::size_t c = 0;
    for (auto e : events) c += e ? 1 : 0;
    return c;
}

std::vector<Residual> make_residuals(const Eigen::VectorXd& observed,
                                     const std::vector<std::uint8_t>& events,
                                     const Eigen::VectorXd& fitted) {
    std::vector<Residual> r(static_cast<std::size_t>(observed.size()));
    for (Eigen::Index i = 0; i < observed.size(); ++i) {
        r[static_cast<std::size_t>(i)] = {observed[i] - fitted[i], events[static_cast<std::size_t>(i)] != 0};
    }
    return r;
}

Eigen::VectorXd apply_learner(const BoostTerm& term, const Eigen::MatrixXd& z) {
    Eigen::VectorXd out(z.rows());
    if (std::holds_alternative<ComponentTerm>(term)) {
        const auto& c = std::get<ComponentTerm>(term);
        out = c.coefficient * z.col(c.covariate_index);
    } else {
        const auto& t = std::get<RegressionTree>(term);
        for (Eigen::Index i = 0; i < z.rows(); ++i)
            out[i] = tree_predict(t, z.row(i).transpose());
    }
    return out;
}

} // namespace

double BoostModel::predict(const Eigen::VectorXd& x) const {
    if (x.size() != standardization.dim())
        throw std::invalid_argument("BoostModel::predict: dimension mismatch");
    const Eigen::VectorXd z = standardization.apply_row(x);
    double p = offset;
    if (init_coefficients.size() > 0) p += init_coefficients.dot(z);
    for (const BoostTerm& term : terms) {
        if (std::holds_alternative<ComponentTerm>(term)) {
            p += learning_rate * component_predict(std::get<ComponentTerm>(term), z);
        } else {
            p += learning_rate * tree_predict(std::get<RegressionTree>(term), z);
        }
    }
    return p;
}

double LinearModel::predict(const Eigen::VectorXd& x) const {
    if (x.size() != coefficients.size())
        throw std::invalid_argument("LinearModel::predict: dimension mismatch");
    return intercept + coefficients.dot(x);
}

Eigen::VectorXd bj_impute(const Eigen::VectorXd& observed,
                          const std::vector<std::uint8_t>& events,
                          const Eigen::VectorXd& fitted,
                          const KMCurve& curve) {
    if (observed.size() != fitted.size() ||
        static_cast<std::size_t>(observed.size()) != events.size())
        throw std::invalid_argument("bj_impute: shape mismatch");

    Eigen::VectorXd imputed = observed;
    for (Eigen::Index i = 0; i < observed.size(); ++i) {
        if (events[static_cast<std::size_t>(i)]) continue;
        const double residual = observed[i] - fitted[i];
        try {
            imputed[i] = fitted[i] + km_tail_expectation(curve, residual);
        } catch (const std::runtime_error&) {
            imputed[i] = observed[i]; // degenerate tail: keep the censored value
        }
    }
    return imputed;
}

namespace {

struct BoostState {
    BoostModel model;
    std::vector<int> selected; // distinct componentwise picks, for twin round 2
};

BoostState run_boost(const Eigen::MatrixXd& z, const Eigen::VectorXd& observed,
                     const std::vector<std::uint8_t>& events, const BoostConfig& config,
                     const Standardizer& standardizer,
                     const std::vector<int>* candidates) {
    BoostState state;
    BoostModel& model = state.model;
    model.learning_rate = config.learning_rate;
    model.standardization = standardizer;
    model.offset = observed.mean();

    Eigen::VectorXd fitted = Eigen::VectorXd::Constant(z.rows(), model.offset);
    if (config.init_mode == InitMode::least_squares) {
        // columns of z are centered, so the least-squares intercept stays Ybar
        model.init_coefficients =
            z.colPivHouseholderQr().solve(observed.array() - model.offset);
        fitted += z * model.init_coefficients;
    }

    std::set<int> picks;
    for (int m = 1; m <= config.iterations; ++m) {
        const KMCurve curve = km_fit(make_residuals(observed, events, fitted));
        const Eigen::VectorXd imputed = bj_impute(observed, events, fitted, curve);
        const Eigen::VectorXd u = imputed - fitted;

        BoostTerm term;
        if (config.learner == BaseLearnerKind::componentwise_ls) {
            const ComponentTerm c = componentwise_ls_fit(z, u, candidates);
            picks.insert(c.covariate_index);
            term = c;
        } else {
            term = tree_fit(z, u, config.max_depth, config.min_leaf);
        }
        fitted += config.learning_rate * apply_learner(term, z);
        model.terms.push_back(std::move(term));

        if (!fitted.allFinite() || fitted.cwiseAbs().maxCoeff() > kDivergenceBound)
            throw std::runtime_error("bj_boost_fit: diverged at iteration " +
                                     std::to_string(m));
    }
    state.selected.assign(picks.begin(), picks.end());
    return state;
}

} // namespace

BoostModel bj_boost_fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& observed,
                        const std::vector<std::uint8_t>& events,
                        const BoostConfig& config) {
    const Eigen::Index n = features.rows();
    if (n != observed.size() || static_cast<std::size_t>(n) != events.size())
        throw std::invalid_argument("bj_boost_fit: shape mismatch");
    if (n < 10) throw std::runtime_error("bj_boost_fit: needs at least 10 rows");
    if (count_events(events) == 0) throw std::runtime_error("bj_boost_fit: all censored");
    if (config.iterations < 1 || config.learning_rate <= 0.0 ||
        config.learning_rate > 1.0)
        throw std::invalid_argument("bj_boost_fit: bad config");

    const Standardizer standardizer = Standardizer::fit(features);
    const Eigen::MatrixXd z = standardizer.apply(features);

    BoostState round1 = run_boost(z, observed, events, config, standardizer, nullptr);
    if (config.twin && config.learner == BaseLearnerKind::componentwise_ls) {
        return run_boost(z, observed, events, config, standardizer, &round1.selected)
            .model;
    }
    return round1.model;
}

LinearModel bj_linear_fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& observed,
                          const std::vector<std::uint8_t>& events, int max_iter,
                          double tol) {
    const Eigen::Index n = features.rows();
    const Eigen::Index p = features.cols();
    if (n != observed.size() || static_cast<std::size_t>(n) != events.size())
        throw std::invalid_argument("bj_linear_fit: shape mismatch");
    if (count_events(events) == 0) throw std::runtime_error("bj_linear_fit: all censored");

    Eigen::MatrixXd design(n, p + 1);
    design.col(0).setOnes();
    design.rightCols(p) = features;
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < p + 1)
        throw std::runtime_error("bj_linear_fit: rank-deficient design");

    Eigen::VectorXd beta = qr.solve(observed);
    Eigen::VectorXd prev = beta;
    LinearModel model;
    for (int it = 1; it <= max_iter; ++it) {
        const Eigen::VectorXd fitted = design * beta;
        const KMCurve curve = km_fit(make_residuals(observed, events, fitted));
        const Eigen::VectorXd imputed = bj_impute(observed, events, fitted, curve);
        const Eigen::VectorXd next = qr.solve(imputed);

        const double change = (next - beta).cwiseAbs().maxCoeff();
        if (change < tol) {
            beta = next;
            model.iterations_used = it;
            break;
        }
        if (it >= 2 && (next - prev).cwiseAbs().maxCoeff() < tol) {
            beta = 0.5 * (next + beta); // two-cycle: settle on the midpoint
            model.oscillated = true;
            model.iterations_used = it;
            break;
        }
        prev = beta;
        beta = next;
        model.iterations_used = it;
    }

    model.intercept = beta[0];
    model.coefficients = beta.tail(p);
    return model;
}

BoostConfig cv_tune(const Eigen::MatrixXd& features, const Eigen::VectorXd& observed,
                    const std::vector<std::uint8_t>& events,
                    const std::vector<BoostConfig>& grid, int folds,
                    std::uint64_t seed) {
    if (grid.empty()) throw std::invalid_argument("cv_tune: empty grid");
    if (folds < 2) throw std::invalid_argument("cv_tune: folds must be >= 2");
    const Eigen::Index n = features.rows();

    // Stratified fold assignment; redrawn when a training split loses all
    // events, which only happens with a handful of events total.
    std::vector<int> fold_of(static_cast<std::size_t>(n));
    bool usable = false;
    for (int attempt = 0; attempt < 5 && !usable; ++attempt) {
        std::vector<int> ev, cens;
        for (Eigen::Index i = 0; i < n; ++i)
            (events[static_cast<std::size_t>(i)] ? ev : cens).push_back(static_cast<int>(i));
        auto engine = substream(seed + static_cast<std::uint64_t>(attempt), 0xCF01);
        std::shuffle(ev.begin(), ev.end(), engine);
        std::shuffle(cens.begin(), cens.end(), engine);
        int next = 0;
        for (int i : ev) fold_of[static_cast<std::size_t>(i)] = next++ % folds;
        for (int i : cens) fold_of[static_cast<std::size_t>(i)] = next++ % folds;

        usable = true;
        for (int f = 0; f < folds && usable; ++f) {
            std::size_t train_events = 0;
            for (Eigen::Index i = 0; i < n; ++i)
                if (fold_of[static_cast<std::size_t>(i)] != f &&
                    events[static_cast<std::size_t>(i)])
                    ++train_events;
            if (train_events == 0) usable = false;
        }
    }
    if (!usable) throw std::runtime_error("cv_tune: could not stratify folds with events");

    double best_error = std::numeric_limits<double>::infinity();
    const BoostConfig* best = nullptr;
    for (const BoostConfig& config : grid) {
        double total = 0.0;
        int scored_folds = 0;
        for (int f = 0; f < folds; ++f) {
            std::vector<int> train, valid;
            for (Eigen::Index i = 0; i < n; ++i)
                (fold_of[static_cast<std::size_t>(i)] == f ? valid : train)
                    .push_back(static_cast<int>(i));

            Eigen::MatrixXd xt(train.size(), features.cols());
            Eigen::VectorXd yt(train.size());
            std::vector<std::uint8_t> et(train.size());
            for (std::size_t i = 0; i < train.size(); ++i) {
                xt.row(static_cast<Eigen::Index>(i)) = features.row(train[i]);
                yt[static_cast<Eigen::Index>(i)] = observed[train[i]];
                et[i] = events[static_cast<std::size_t>(train[i])];
            }
            const BoostModel model = bj_boost_fit(xt, yt, et, config);

            double sse = 0.0;
            std::size_t m = 0;
            for (int i : valid) {
                if (!events[static_cast<std::size_t>(i)]) continue; // events only
                const double err = model.predict(features.row(i).transpose()) - observed[i];
                sse += err * err;
                ++m;
            }
            if (m > 0) {
                total += sse / static_cast<double>(m);
                ++scored_folds;
            }
        }
        const double error = scored_folds > 0
                                 ? total / static_cast<double>(scored_folds)
                                 : std::numeric_limits<double>::infinity();
        const bool better =
            error < best_error ||
            (error == best_error && best &&
             (config.iterations < best->iterations ||
              (config.iterations == best->iterations &&
               config.learning_rate < best->learning_rate)));
        if (better) {
            best_error = error;
            best = &config;
        }
    }
    return *best;
}

} // namespace bjq
