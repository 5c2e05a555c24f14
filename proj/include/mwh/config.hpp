#pragma once

#include "mwh/optim.hpp"
#include "mwh/schedule.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace mwh {

// Flat "key = value" file with [section] headers and # comments. Keys are
// addressed as "section.key".
class KeyValueFile {
public:
    static KeyValueFile parse_file(const std::string& path);
    static KeyValueFile parse_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::size_t get_size(const std::string& key, std::size_t fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::size_t> get_size_list(const std::string& key,
                                           const std::vector<std::size_t>& fallback) const;

    void set(const std::string& key, const std::string& value);
    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

enum class DatasetKind { Csv, SyntheticImages, SyntheticBlobs };
enum class OptimizerKind { Adam, Sgd };
enum class MixOp { Mixup, Cutmix };

// Fully resolved run configuration.
struct TrainConfig {
    // data
    DatasetKind dataset_kind = DatasetKind::Csv;
    std::string dataset_path;
    std::string label_column = "0";
    double train_fraction = 0.75;
    bool stratified = true;
    std::uint64_t split_seed = 0;
    bool split_seed_set = false; // false -> follows the run seed
    // synthetic generators
    std::size_t synth_n = 200, synth_channels = 1, synth_height = 8, synth_width = 8;
    std::size_t synth_dim = 8;
    double synth_separation = 2.0;
    std::uint64_t synth_seed = 7;

    // model
    std::vector<std::size_t> hidden = {128, 128};

    // optimizer
    OptimizerKind optimizer = OptimizerKind::Adam;
    double lr = 0.001;
    double momentum = 0.9;
    LrScheduleKind lr_schedule = LrScheduleKind::Constant;
    std::vector<std::size_t> milestones;
    double decay_factor = 0.1;

    // training
    std::size_t epochs = 100;
    std::size_t batch_size = 128;
    std::uint64_t seed = 0;
    double alpha = 0.2;
    std::string out_dir = "runs/out";
    std::string run_name = "run";

    // strategy
    StrategySpec strategy;
    MixOp mix_op = MixOp::Mixup;
    bool label_mixing = true;

    static TrainConfig from_file(const std::string& path);
    static TrainConfig from_kv(const KeyValueFile& kv);
    void validate() const;

    // Resolved key/value view, for the run manifest.
    std::map<std::string, std::string> resolved() const;
};

} // namespace mwh
