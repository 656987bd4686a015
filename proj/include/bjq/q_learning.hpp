#pragma once
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "bjq/bj_boost.hpp"
#include "bjq/cox_baseline.hpp"
#include "bjq/data_model.hpp"

namespace bjq {

enum class Method { bj, bj_ls, bj_tree, cox };

std::string method_name(Method m);
Method method_from_name(const std::string& name); // accepts bj, bj-ls, bj-tree, cox

using ArmModel = std::variant<BoostModel, LinearModel, CoxModel>;

// Counterfactual Q-value of one fitted arm model at a history vector. Boost
// and linear models predict directly; Cox models integrate survival up to
// their training horizon.
double arm_q_value(const ArmModel& model, const Eigen::VectorXd& history);

// Per-treatment-arm fitted outcome models for one stage.
struct QStageModel {
    int stage_index = 1;
    Method method = Method::bj_tree;
    std::vector<int> actions;            // dataset action set, fixed order
    std::vector<ArmModel> per_arm;       // parallel to actions
    std::vector<std::string> covariates; // history names at this stage

    const ArmModel& model_for(int action) const;
};

struct Policy {
    std::vector<QStageModel> stage_models; // ordered stage K down to 1
    std::vector<int> action_set;
    int num_stages = 0;

    const QStageModel& stage(int k) const; // 1-based lookup
};

// Estimator knobs shared across the per-arm fits.
struct FitConfig {
    BoostConfig boost;         // bj_ls / bj_tree; learner is set per method
    int linear_max_iter = 100;
    double linear_tol = 1e-6;
};

enum class InductionMode { additive, backward };

// Fits one stage: per action, the chosen estimator regresses `targets` on the
// stage history over the subjects observed under that action. `targets` is
// aligned with subjects that reached the stage, in dataset order; censoring
// enters through each subject's stage event flag.
QStageModel fit_stage_q(const TrialDataset& dataset, int stage,
                        const std::vector<double>& targets, Method method,
                        const FitConfig& config);

// Stage-K-first recursion. In backward mode each earlier stage regresses the
// pseudo-outcome (stage outcome plus best next-stage Q); in additive mode the
// stages are fitted independently on their own outcomes.
Policy backward_induction(const TrialDataset& dataset, Method method,
                          const FitConfig& config,
                          InductionMode mode = InductionMode::backward);

using ActionSequence = std::vector<int>;

// Cumulative Q for every action sequence over the subject's reached stages.
std::map<ActionSequence, double> q_values(const Policy& policy, const Subject& subject);

// Argmax with ties to the lexicographically smallest sequence.
ActionSequence optimal_decision(const std::map<ActionSequence, double>& qmap);

double decision_accuracy(const std::vector<ActionSequence>& estimated,
                         const std::vector<ActionSequence>& oracle);

} // namespace bjq
