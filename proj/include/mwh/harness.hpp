#pragma once

#include "mwh/config.hpp"
#include "mwh/data.hpp"
#include "mwh/model.hpp"

#include <string>
#include <vector>

namespace mwh {

struct MetricsRecord {
    std::size_t epoch = 0;       // 1-based
    double train_loss = 0.0;     // mean over the epoch's batches
    double test_loss = 0.0;      // clean test split, no augmentation
    double test_accuracy = 0.0;
    double mixed_fraction = 0.0; // mixed batches this epoch / batches this epoch
    double lr = 0.0;
};

struct RunResult {
    std::vector<MetricsRecord> history;
    MlpState model;
    model::SavedScaler scaler;     // empty for synthetic datasets
    std::size_t main_batches = 0;  // m handed to the schedule
    std::size_t mixed_batches = 0; // realized total over the whole run
    std::string metrics_path;      // empty when write_outputs was false
    std::string manifest_path;
    std::string model_path;

    const MetricsRecord& final_record() const { return history.back(); }
};

struct EvalResult {
    double loss = 0.0;
    double accuracy = 0.0;
};

namespace harness {

// Full training run per the config. With write_outputs the run writes
// <out_dir>/<run_name>_metrics.csv, _manifest.json and _model.txt.
RunResult run_training(const TrainConfig& config, bool write_outputs = true);

// Clean evaluation: forward pass, soft-CE against one-hot labels,
// accuracy. No augmentation, no RNG.
EvalResult evaluate(const MlpState& state, const TabularDataset& test);

std::string metrics_to_csv(const std::vector<MetricsRecord>& history);
std::vector<MetricsRecord> metrics_from_csv_file(const std::string& path);

struct SweepRow {
    std::string value;
    std::uint64_t seed = 0;
    double final_accuracy = 0.0;
    bool failed = false;
    std::string error;
};

// One run per (value, seed). axis is alpha|p|q|strategy. Runs are
// independent and may execute in parallel; row order is fixed by index.
std::vector<SweepRow> sweep(const TrainConfig& base, const std::string& axis,
                            const std::vector<std::string>& values,
                            const std::vector<std::uint64_t>& seeds);

std::string sweep_to_csv(const std::string& axis, const std::vector<SweepRow>& rows);

} // namespace harness

} // namespace mwh
