#include "bjq/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bjq {

namespace {

std::string describe(const Subject& s, int stage) {
    std::ostringstream os;
    os << "subject " << s.id << " stage " << stage;
    return os.str();
}

} // namespace

ValidationReport validate_dataset(const TrialDataset& dataset) {
    ValidationReport report;
    if (dataset.subjects.empty()) {
        report.violations.push_back("dataset has no subjects");
        return report;
    }
    if (dataset.action_set.empty()) {
        report.violations.push_back("dataset has an empty action set");
        return report;
    }
    if (dataset.num_stages < 1) {
        report.violations.push_back("num_stages must be >= 1");
        return report;
    }

    const int num_actions = static_cast<int>(dataset.action_set.size());
    report.stages.resize(dataset.num_stages);
    for (int k = 0; k < dataset.num_stages; ++k) {
        report.stages[k].stage = k + 1;
        report.stages[k].action_counts.assign(num_actions, 0);
    }

    for (const Subject& subj : dataset.subjects) {
        bool seen_unreached = false;
        for (std::size_t i = 0; i < subj.stages.size(); ++i) {
            const StageRecord& rec = subj.stages[i];
            if (rec.stage_index != static_cast<int>(i) + 1) {
                report.violations.push_back(describe(subj, rec.stage_index) +
                                            ": stage indices not consecutive from 1");
                continue;
            }
            if (rec.stage_index > dataset.num_stages) {
                report.violations.push_back(describe(subj, rec.stage_index) +
                                            ": exceeds num_stages");
                continue;
            }
            if (seen_unreached && rec.reached) {
                report.violations.push_back(describe(subj, rec.stage_index) +
                                            ": reached flag not monotone");
            }
            if (!rec.reached) seen_unreached = true;

            if (rec.history.values.size() != rec.history.names.size() ||
                rec.history.values.empty()) {
                report.violations.push_back(describe(subj, rec.stage_index) +
                                            ": history values/names malformed");
            }
            for (double v : rec.history.values) {
                if (!std::isfinite(v)) {
                    report.violations.push_back(describe(subj, rec.stage_index) +
                                                ": non-finite covariate");
                    break;
                }
            }

            const auto it = std::find(dataset.action_set.begin(),
                                      dataset.action_set.end(), rec.treatment);
            if (it == dataset.action_set.end()) {
                report.violations.push_back(describe(subj, rec.stage_index) +
                                            ": treatment " + std::to_string(rec.treatment) +
                                            " not in action set");
                continue;
            }

            if (!rec.reached) continue;

            if (rec.observed_time < 0.0 || !std::isfinite(rec.observed_time)) {
                report.violations.push_back(describe(subj, rec.stage_index) +
                                            ": observed time negative or non-finite");
            }
            StageValidation& sv = report.stages[rec.stage_index - 1];
            sv.reached_count += 1;
            sv.action_counts[it - dataset.action_set.begin()] += 1;
            if (!rec.event) sv.censoring_rate += 1.0; // count; normalized below
        }
    }

    for (StageValidation& sv : report.stages) {
        if (sv.reached_count == 0) {
            report.violations.push_back("stage " + std::to_string(sv.stage) +
                                        ": no subject reached");
            continue;
        }
        sv.censoring_rate /= static_cast<double>(sv.reached_count);
        for (int a = 0; a < num_actions; ++a) {
            if (sv.action_counts[a] > 0) {
                sv.observed_actions.push_back(dataset.action_set[a]);
            } else {
                report.violations.push_back("action " +
                                            std::to_string(dataset.action_set[a]) +
                                            " unobserved at stage " +
                                            std::to_string(sv.stage));
            }
        }
        if (sv.censoring_rate >= 1.0) {
            report.warnings.push_back("stage " + std::to_string(sv.stage) +
                                      ": all reached records censored");
        }
    }
    return report;
}

} // namespace bjq
