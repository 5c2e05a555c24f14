#include "mwh/config.hpp"
#include "mwh/data.hpp"
#include "mwh/errors.hpp"
#include "mwh/harness.hpp"
#include "mwh/plot.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

// exit codes: 0 ok, 1 config error, 2 runtime/numeric failure
constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty()) out.push_back(cell);
    }
    return out;
}

int cmd_train(const std::string& config_path, const std::string& seed_str,
              const std::string& out_dir) {
    mwh::TrainConfig cfg = mwh::TrainConfig::from_file(config_path);
    if (!seed_str.empty()) cfg.seed = std::stoull(seed_str);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    const mwh::RunResult res = mwh::harness::run_training(cfg);
    const auto& rec = res.final_record();
    std::printf("run %s: %zu epochs, %zu batches (%zu mixed)\n", cfg.run_name.c_str(),
                rec.epoch, res.main_batches, res.mixed_batches);
    std::printf("final clean test loss %.6f, accuracy %.4f\n", rec.test_loss, rec.test_accuracy);
    std::printf("metrics: %s\nmanifest: %s\nmodel: %s\n", res.metrics_path.c_str(),
                res.manifest_path.c_str(), res.model_path.c_str());
    return kOk;
}

int cmd_eval(const std::string& model_path, const std::string& data_path,
             const std::string& label_column) {
    mwh::model::SavedScaler scaler;
    const mwh::MlpState state = mwh::model::load(model_path, &scaler);
    mwh::TabularDataset ds = mwh::data::load_csv(data_path, label_column);
    if (!scaler.col_min.empty()) {
        mwh::MinMaxScaler s;
        s.col_min = scaler.col_min;
        s.col_range = scaler.col_range;
        mwh::data::apply_minmax(s, ds.features);
    }
    const mwh::EvalResult res = mwh::harness::evaluate(state, ds);
    std::printf("loss %.6f\naccuracy %.4f\n", res.loss, res.accuracy);
    return kOk;
}

int cmd_sweep(const std::string& config_path, const std::string& axis,
              const std::string& values_csv, const std::string& seeds_csv,
              const std::string& out_path) {
    const mwh::TrainConfig base = mwh::TrainConfig::from_file(config_path);
    std::vector<std::uint64_t> seeds;
    for (const auto& s : split_list(seeds_csv)) seeds.push_back(std::stoull(s));
    const auto rows = mwh::harness::sweep(base, axis, split_list(values_csv), seeds);
    const std::string csv = mwh::harness::sweep_to_csv(axis, rows);
    if (out_path.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        std::ofstream out(out_path);
        if (!out) throw mwh::data_error(mwh::data_error::kind::missing_file,
                                        "cannot write " + out_path);
        out << csv;
        std::printf("wrote %s (%zu runs)\n", out_path.c_str(), rows.size());
    }
    bool any_failed = false;
    for (const auto& r : rows) any_failed = any_failed || r.failed;
    return any_failed ? kRuntimeError : kOk;
}

int cmd_plot(const std::vector<std::string>& inputs, const std::string& out_path) {
    mwh::plot::plot_metrics(inputs, out_path);
    std::printf("wrote %s\n", out_path.c_str());
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixup/mWh scheduled-augmentation training lab"};
    app.require_subcommand(1);

    std::string config_path, seed_str, out_dir;
    auto* train = app.add_subcommand("train", "train one model from a config file");
    train->add_option("--config", config_path, "config file")->required();
    train->add_option("--seed", seed_str, "override train.seed");
    train->add_option("--out", out_dir, "override train.out_dir");

    std::string model_path, data_path, label_column = "0";
    auto* eval = app.add_subcommand("eval", "evaluate a saved model on a csv dataset");
    eval->add_option("--model", model_path, "model file from a training run")->required();
    eval->add_option("--data", data_path, "csv dataset")->required();
    eval->add_option("--label-column", label_column, "label column name or index");

    std::string sweep_config, axis, values_csv, seeds_csv, sweep_out;
    auto* sweep = app.add_subcommand("sweep", "run a grid over alpha, p, q or strategy");
    sweep->add_option("--config", sweep_config, "base config file")->required();
    sweep->add_option("--axis", axis, "alpha|p|q|strategy")->required();
    sweep->add_option("--values", values_csv, "comma-separated values")->required();
    sweep->add_option("--seeds", seeds_csv, "comma-separated seeds (default: config seed)");
    sweep->add_option("--out", sweep_out, "result csv path (default: stdout)");

    std::vector<std::string> plot_inputs;
    std::string plot_out;
    auto* plot = app.add_subcommand("plot", "render metrics csv files as an svg");
    plot->add_option("--in", plot_inputs, "metrics csv files")->required()->expected(-1);
    plot->add_option("--out", plot_out, "output svg path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (train->parsed()) return cmd_train(config_path, seed_str, out_dir);
        if (eval->parsed()) return cmd_eval(model_path, data_path, label_column);
        if (sweep->parsed()) return cmd_sweep(sweep_config, axis, values_csv, seeds_csv, sweep_out);
        if (plot->parsed()) return cmd_plot(plot_inputs, plot_out);
    } catch (const mwh::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kConfigError;
}
