#include "bjq/base_learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bjq {

ComponentTerm componentwise_ls_fit(const Eigen::MatrixXd& features,
                                   const Eigen::VectorXd& residuals,
                                   const std::vector<int>* candidates) {
    if (features.rows() != residuals.size() || features.rows() < 1)
        throw std::invalid_argument("componentwise_ls_fit: shape mismatch");

    std::vector<int> all;
    if (!candidates) {
        all.resize(static_cast<std::size_t>(features.cols()));
        std::iota(all.begin(), all.end(), 0);
        candidates = &all;
    }

    // Minimizing RSS_j = |U|^2 - (H_j.U)^2 / |H_j|^2 is maximizing the
    // explained term, so only that quantity is compared.
    ComponentTerm best;
    double best_explained = -1.0;
    for (int j : *candidates) {
        if (j < 0 || j >= features.cols())
            throw std::invalid_argument("componentwise_ls_fit: candidate out of range");
        const double hh = features.col(j).squaredNorm();
        if (hh <= 0.0) continue;
        const double hu = features.col(j).dot(residuals);
        const double explained = hu * hu / hh;
        if (explained > best_explained) {
            best_explained = explained;
            best.covariate_index = j;
            best.coefficient = hu / hh;
        }
    }
    if (best.covariate_index < 0)
        throw std::runtime_error("componentwise_ls_fit: no usable covariate");
    return best;
}

double component_predict(const ComponentTerm& term, const Eigen::VectorXd& x) {
    if (term.covariate_index < 0 || term.covariate_index >= x.size())
        throw std::out_of_range("component_predict: covariate index out of range");
    return term.coefficient * x[term.covariate_index];
}

namespace {

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = -1.0;
};

double node_sse(const Eigen::VectorXd& y, const std::vector<int>& rows, double mean) {
    double sse = 0.0;
    for (int r : rows) {
        const double d = y[r] - mean;
        sse += d * d;
    }
    return sse;
}

double node_mean(const Eigen::VectorXd& y, const std::vector<int>& rows) {
    double s = 0.0;
    for (int r : rows) s += y[r];
    return s / static_cast<double>(rows.size());
}

SplitChoice best_split(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                       const std::vector<int>& rows, int min_leaf) {
    SplitChoice best;
    const double parent_mean = node_mean(y, rows);
    const double parent_sse = node_sse(y, rows, parent_mean);
    const auto n = rows.size();

    std::vector<std::pair<double, double>> vals(n); // (feature value, y)
    for (int j = 0; j < x.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i)
            vals[i] = {x(rows[i], j), y[rows[i]]};
        std::sort(vals.begin(), vals.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        double left_sum = 0.0, left_sq = 0.0;
        double total_sum = 0.0, total_sq = 0.0;
        for (const auto& v : vals) {
            total_sum += v.second;
            total_sq += v.second * v.second;
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            left_sum += vals[i].second;
            left_sq += vals[i].second * vals[i].second;
            if (vals[i].first == vals[i + 1].first) continue; // not a boundary
            const auto nl = static_cast<double>(i + 1);
            const auto nr = static_cast<double>(n - i - 1);
            if (i + 1 < static_cast<std::size_t>(min_leaf) ||
                n - i - 1 < static_cast<std::size_t>(min_leaf))
                continue;
            const double right_sum = total_sum - left_sum;
            const double right_sq = total_sq - left_sq;
            const double sse_l = left_sq - left_sum * left_sum / nl;
            const double sse_r = right_sq - right_sum * right_sum / nr;
            const double gain = parent_sse - sse_l - sse_r;
            if (gain > best.gain) { // strict: keeps smallest (j, threshold) on ties
                best.found = true;
                best.gain = gain;
                best.feature = j;
                best.threshold = 0.5 * (vals[i].first + vals[i + 1].first);
            }
        }
    }
    return best;
}

int build_node(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
               const std::vector<int>& rows, int depth, int max_depth, int min_leaf,
               RegressionTree& tree) {
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[index].value = node_mean(y, rows);
    tree.depth = std::max(tree.depth, depth);

    if (depth >= max_depth || rows.size() < 2 * static_cast<std::size_t>(min_leaf))
        return index;

    // pure node: nothing left to explain
    const auto [mn, mx] = std::minmax_element(rows.begin(), rows.end(),
                                              [&](int a, int b) { return y[a] < y[b]; });
    if (y[*mn] == y[*mx]) return index;

    const SplitChoice split = best_split(x, y, rows, min_leaf);
    if (!split.found) return index;

    std::vector<int> left_rows, right_rows;
    for (int r : rows) {
        (x(r, split.feature) <= split.threshold ? left_rows : right_rows).push_back(r);
    }
    tree.nodes[index].feature = split.feature;
    tree.nodes[index].threshold = split.threshold;
    const int l = build_node(x, y, left_rows, depth + 1, max_depth, min_leaf, tree);
    tree.nodes[index].left = l;
    const int r = build_node(x, y, right_rows, depth + 1, max_depth, min_leaf, tree);
    tree.nodes[index].right = r;
    return index;
}

} // namespace

RegressionTree tree_fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& residuals,
                        int max_depth, int min_leaf) {
    if (features.rows() != residuals.size() || features.rows() < 1)
        throw std::invalid_argument("tree_fit: shape mismatch");
    if (max_depth < 0 || min_leaf < 1)
        throw std::invalid_argument("tree_fit: bad max_depth/min_leaf");

    RegressionTree tree;
    std::vector<int> rows(static_cast<std::size_t>(features.rows()));
    std::iota(rows.begin(), rows.end(), 0);
    build_node(features, residuals, rows, 0, max_depth, min_leaf, tree);
    return tree;
}

double tree_predict(const RegressionTree& tree, const Eigen::VectorXd& x) {
    if (tree.nodes.empty()) throw std::runtime_error("tree_predict: empty tree");
    int node = 0;
    while (tree.nodes[node].feature >= 0) {
        const TreeNode& nd = tree.nodes[node];
        if (nd.feature >= x.size())
            throw std::out_of_range("tree_predict: covariate index out of range");
        node = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
    }
    return tree.nodes[node].value;
}

} // namespace bjq
