#pragma once
#include <Eigen/Dense>
#include <vector>

namespace bjq {

// One componentwise least-squares step: a single covariate and its slope.
struct ComponentTerm {
    int covariate_index = -1;
    double coefficient = 0.0;
};

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    double value = 0.0; // leaf prediction: mean of the training residuals
    int left = -1;
    int right = -1;
};

struct RegressionTree {
    std::vector<TreeNode> nodes; // node 0 is the root
    int depth = 0;
};

// Picks the single covariate whose simple regression through the origin
// minimizes the residual sum of squares; ties go to the smallest index.
// Columns with zero sum of squares are skipped. `candidates`, when given,
// restricts the scan to that index set (used by the twin restriction round).
ComponentTerm componentwise_ls_fit(const Eigen::MatrixXd& features,
                                   const Eigen::VectorXd& residuals,
                                   const std::vector<int>* candidates = nullptr);

// Greedy variance-reduction CART. Split thresholds are midpoints between
// consecutive sorted unique values; gain ties break on (smaller covariate,
// smaller threshold). Pure nodes stop; an impure node still splits on the
// best candidate even at zero gain, which is what lets a depth-2 tree
// represent a pure interaction pattern.
RegressionTree tree_fit(const Eigen::MatrixXd& features,
                        const Eigen::VectorXd& residuals,
                        int max_depth, int min_leaf);

// Root-to-leaf routing; x[feature] <= threshold goes left.
double tree_predict(const RegressionTree& tree, const Eigen::VectorXd& x);

double component_predict(const ComponentTerm& term, const Eigen::VectorXd& x);

} // namespace bjq
