#pragma once
#include <string>
#include <vector>

namespace bjq {

struct CovariateVector {
    std::vector<double> values;
    std::vector<std::string> names;

    std::size_t size() const { return values.size(); }
};

// One decision stage of one patient. `history` is the flattened covariate
// history up to (and excluding) the current treatment: baseline covariates,
// then per-stage covariate blocks with past treatments as indicator columns.
// When `reached` is false the outcome fields are ignored by all estimators.
struct StageRecord {
    int stage_index = 1; // 1-based
    CovariateVector history;
    int treatment = 0;
    double observed_time = 0.0; // Y
    bool event = false;         // delta: true = event observed, false = censored
    bool reached = true;        // eta
};

struct Subject {
    std::string id;
    std::vector<StageRecord> stages; // consecutive stage_index starting at 1
};

struct TrialDataset {
    std::vector<Subject> subjects;
    std::vector<int> action_set;
    int num_stages = 1;
};

struct StageValidation {
    int stage = 0;
    std::vector<int> observed_actions;
    std::vector<long> action_counts; // parallel to dataset action_set
    long reached_count = 0;
    double censoring_rate = 0.0; // among reached records
};

struct ValidationReport {
    std::vector<StageValidation> stages;
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    bool ok() const { return violations.empty(); }
};

// Pure structural + positivity audit. Violations are reported, never thrown;
// callers decide what is fatal.
ValidationReport validate_dataset(const TrialDataset& dataset);

} // namespace bjq
