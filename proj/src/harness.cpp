#include "mwh/harness.hpp"

#include "mwh/augment.hpp"
#include "mwh/errors.hpp"
#include "mwh/schedule.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mwh {
namespace harness {

namespace {

struct PreparedData {
    TabularDataset train;
    TabularDataset test;
    model::SavedScaler scaler;
    // image-mode originals, kept so CutMix can cut real rectangles
    bool image_mode = false;
    ImageTensor train_images;
    ImageTensor test_images;
};

ImageTensor gather_images(const ImageTensor& all, const std::vector<std::size_t>& idx) {
    ImageTensor out(idx.size(), all.channels, all.height, all.width);
    const std::size_t per = all.pixels_per_image();
    for (std::size_t r = 0; r < idx.size(); ++r)
        std::copy(all.data.begin() + idx[r] * per, all.data.begin() + (idx[r] + 1) * per,
                  out.data.begin() + r * per);
    return out;
}

PreparedData prepare_data(const TrainConfig& config) {
    PreparedData prep;
    SplitSpec split_spec;
    split_spec.train_fraction = config.train_fraction;
    split_spec.stratified = config.stratified;
    split_spec.seed = config.split_seed_set ? config.split_seed : config.seed;

    switch (config.dataset_kind) {
    case DatasetKind::Csv: {
        TabularDataset full = data::load_csv(config.dataset_path, config.label_column);
        data::split(full, split_spec, prep.train, prep.test);
        // scaling parameters come from the train split only
        MinMaxScaler scaler = data::fit_minmax(prep.train.features);
        data::apply_minmax(scaler, prep.train.features);
        data::apply_minmax(scaler, prep.test.features);
        prep.scaler.col_min = scaler.col_min;
        prep.scaler.col_range = scaler.col_range;
        break;
    }
    case DatasetKind::SyntheticBlobs: {
        TabularDataset full = data::synthetic_blobs(config.synth_n, config.synth_dim,
                                                    config.synth_separation, config.synth_seed);
        data::split(full, split_spec, prep.train, prep.test);
        MinMaxScaler scaler = data::fit_minmax(prep.train.features);
        data::apply_minmax(scaler, prep.train.features);
        data::apply_minmax(scaler, prep.test.features);
        prep.scaler.col_min = scaler.col_min;
        prep.scaler.col_range = scaler.col_range;
        break;
    }
    case DatasetKind::SyntheticImages: {
        std::vector<std::size_t> labels;
        ImageTensor images =
            config.dataset_path.empty()
                ? data::synthetic_images(config.synth_n, config.synth_channels,
                                         config.synth_height, config.synth_width,
                                         config.synth_seed, labels)
                : data::load_images(config.dataset_path, labels);
        const std::size_t class_count = *std::max_element(labels.begin(), labels.end()) + 1;
        std::vector<std::size_t> train_idx, test_idx;
        data::split_indices(labels, class_count, split_spec, train_idx, test_idx);

        prep.image_mode = true;
        prep.train_images = gather_images(images, train_idx);
        prep.test_images = gather_images(images, test_idx);

        auto flatten_side = [&](const ImageTensor& imgs, const std::vector<std::size_t>& idx,
                                TabularDataset& out) {
            out.features = imgs.flatten();
            out.labels.clear();
            for (std::size_t i : idx) out.labels.push_back(labels[i]);
            out.class_count = class_count;
        };
        flatten_side(prep.train_images, train_idx, prep.train);
        flatten_side(prep.test_images, test_idx, prep.test);
        break;
    }
    }
    if (prep.train.size() == 0 || prep.test.size() == 0)
        throw data_error(data_error::kind::empty_dataset, "split produced an empty side");
    return prep;
}

// Rebuilds the image sub-batch matching the iterator's current rows.
ImageTensor batch_images(const ImageTensor& pool, const std::vector<std::size_t>& order,
                         std::size_t begin, std::size_t count) {
    std::vector<std::size_t> idx(order.begin() + begin, order.begin() + begin + count);
    return gather_images(pool, idx);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

std::string metrics_to_csv(const std::vector<MetricsRecord>& history) {
    std::string out = "epoch,train_loss,test_loss,test_accuracy,mixed_fraction,lr\n";
    for (const auto& r : history) {
        out += std::to_string(r.epoch);
        out += ',' + format_double(r.train_loss);
        out += ',' + format_double(r.test_loss);
        out += ',' + format_double(r.test_accuracy);
        out += ',' + format_double(r.mixed_fraction);
        out += ',' + format_double(r.lr);
        out += '\n';
    }
    return out;
}

std::vector<MetricsRecord> metrics_from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error(data_error::kind::missing_file, "cannot open metrics: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("epoch,", 0) != 0)
        throw data_error(data_error::kind::bad_format, "not a metrics csv: " + path);
    std::vector<MetricsRecord> hist;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        MetricsRecord r;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() != 6)
            throw data_error(data_error::kind::bad_format, "bad metrics row in " + path);
        r.epoch = static_cast<std::size_t>(vals[0]);
        r.train_loss = vals[1];
        r.test_loss = vals[2];
        r.test_accuracy = vals[3];
        r.mixed_fraction = vals[4];
        r.lr = vals[5];
        hist.push_back(r);
    }
    if (hist.empty()) throw data_error(data_error::kind::empty_dataset, "no rows in " + path);
    return hist;
}

EvalResult evaluate(const MlpState& state, const TabularDataset& test) {
    ForwardCache cache = model::forward(state, test.features);
    EvalResult res;
    res.loss = model::loss_ce_soft(cache.probs, data::one_hot(test.labels, test.class_count));
    res.accuracy = model::accuracy(cache.probs, test.labels);
    return res;
}

RunResult run_training(const TrainConfig& config, bool write_outputs) {
    config.validate();
    PreparedData prep = prepare_data(config);

    MlpSpec spec;
    spec.layer_sizes.push_back(prep.train.dim());
    for (std::size_t h : config.hidden) spec.layer_sizes.push_back(h);
    spec.layer_sizes.push_back(prep.train.class_count);

    RngStream stream(config.seed);
    MlpState state = model::init(spec, stream);

    AdamState adam;
    adam.lr = config.lr;
    SgdState sgd;
    sgd.lr = config.lr;
    sgd.momentum = config.momentum;

    LrSchedule sched;
    sched.kind = config.lr_schedule;
    sched.base_lr = config.lr;
    sched.milestones = config.milestones;
    sched.factor = config.decay_factor;
    sched.total_epochs = config.epochs;

    data::BatchIterator iter(prep.train, config.batch_size);
    const std::size_t batches_per_epoch = iter.batches_per_epoch();
    const std::size_t m = config.epochs * batches_per_epoch; // the schedule's unit is the batch

    const bool refinement = config.strategy.kind == StrategyKind::MixupWithRefinement;
    const std::size_t total_epochs =
        config.epochs + (refinement ? config.strategy.refine_epochs : 0);

    RunResult result;
    result.main_batches = m;

    std::size_t global_batch = 0;
    for (std::size_t epoch = 0; epoch < total_epochs; ++epoch) {
        // refinement epochs stay at the final main-phase learning rate
        const double lr =
            optim::lr_at(sched, std::min(epoch, config.epochs - 1));
        iter.start_epoch(stream);

        double loss_sum = 0.0;
        std::size_t mixed_here = 0, batch_in_epoch = 0;
        Batch raw;
        while (iter.next_batch(raw)) {
            ++global_batch;
            const AugDecision decision =
                schedule::strategy_decide(global_batch, config.strategy, m, stream);

            Batch train_batch;
            if (decision.mix) {
                ++mixed_here;
                ++result.mixed_batches;
                if (config.mix_op == MixOp::Cutmix) {
                    ImageTensor imgs = batch_images(prep.train_images, iter.current_order(),
                                                    batch_in_epoch * config.batch_size,
                                                    raw.size());
                    train_batch = augment::cutmix_batch(imgs, raw.targets, config.alpha, stream,
                                                        config.label_mixing);
                } else {
                    train_batch = augment::mixup_batch(raw, config.alpha, stream);
                }
            } else if (prep.image_mode) {
                ImageTensor imgs = batch_images(prep.train_images, iter.current_order(),
                                                batch_in_epoch * config.batch_size, raw.size());
                train_batch.inputs = augment::basic_augment(imgs, stream).flatten();
                train_batch.targets = raw.targets;
            } else {
                train_batch = augment::identity_augment(raw);
            }

            ForwardCache cache = model::forward(state, train_batch.inputs);
            const double loss = model::loss_ce_soft(cache.probs, train_batch.targets);
            if (!std::isfinite(loss))
                throw numeric_error("NaN/Inf loss at epoch " + std::to_string(epoch + 1) +
                                    ", batch " + std::to_string(global_batch) +
                                    ", lr=" + format_double(lr));
            loss_sum += loss;

            Gradients grads = model::backward(state, cache, train_batch.targets);
            if (config.optimizer == OptimizerKind::Adam)
                optim::adam_step(adam, state, grads, lr);
            else
                optim::sgd_step(sgd, state, grads, lr);
            ++batch_in_epoch;
        }

        const EvalResult ev = evaluate(state, prep.test);
        MetricsRecord rec;
        rec.epoch = epoch + 1;
        rec.train_loss = loss_sum / static_cast<double>(batch_in_epoch);
        rec.test_loss = ev.loss;
        rec.test_accuracy = ev.accuracy;
        rec.mixed_fraction =
            static_cast<double>(mixed_here) / static_cast<double>(batch_in_epoch);
        rec.lr = lr;
        result.history.push_back(rec);
    }

    result.model = std::move(state);
    result.scaler = prep.scaler;

    if (write_outputs) {
        namespace fs = std::filesystem;
        fs::create_directories(config.out_dir);
        const std::string base = config.out_dir + "/" + config.run_name;
        result.metrics_path = base + "_metrics.csv";
        result.manifest_path = base + "_manifest.json";
        result.model_path = base + "_model.txt";

        std::ofstream mcsv(result.metrics_path);
        mcsv << metrics_to_csv(result.history);

        nlohmann::json manifest;
        for (const auto& [k, v] : config.resolved()) manifest["config"][k] = v;
        manifest["main_batches"] = result.main_batches;
        manifest["batches_per_epoch"] = batches_per_epoch;
        manifest["mixed_batches"] = result.mixed_batches;
        manifest["final_test_accuracy"] = result.final_record().test_accuracy;
        manifest["final_test_loss"] = result.final_record().test_loss;
        std::ofstream mj(result.manifest_path);
        mj << manifest.dump(2) << '\n';

        model::save(result.model, result.model_path,
                    result.scaler.col_min.empty() ? nullptr : &result.scaler);
    }
    return result;
}

std::vector<SweepRow> sweep(const TrainConfig& base, const std::string& axis,
                            const std::vector<std::string>& values,
                            const std::vector<std::uint64_t>& seeds) {
    if (values.empty()) throw config_error("sweep: no values given");
    if (!(axis == "alpha" || axis == "p" || axis == "q" || axis == "strategy"))
        throw config_error("sweep: axis must be alpha|p|q|strategy, got " + axis);
    const std::vector<std::uint64_t> seed_list = seeds.empty()
                                                     ? std::vector<std::uint64_t>{base.seed}
                                                     : seeds;

    struct Job {
        std::string value;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const auto& v : values)
        for (std::uint64_t s : seed_list) jobs.push_back({v, s});

    std::vector<SweepRow> rows(jobs.size());
    // independent runs; each builds its own config and RNG stream
#pragma omp parallel for schedule(dynamic)
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        SweepRow row;
        row.value = jobs[j].value;
        row.seed = jobs[j].seed;
        try {
            TrainConfig cfg = base;
            cfg.seed = jobs[j].seed;
            if (axis == "alpha") {
                cfg.alpha = std::stod(jobs[j].value);
                cfg.strategy.params.alpha = cfg.alpha;
            } else if (axis == "p") {
                cfg.strategy.params.p = std::stod(jobs[j].value);
            } else if (axis == "q") {
                cfg.strategy.params.q = std::stod(jobs[j].value);
            } else {
                cfg.strategy.kind = StrategySpec::kind_from_name(jobs[j].value);
            }
            cfg.validate();
            RunResult res = run_training(cfg, /*write_outputs=*/false);
            row.final_accuracy = res.final_record().test_accuracy;
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        rows[j] = std::move(row);
    }
    return rows;
}

std::string sweep_to_csv(const std::string& axis, const std::vector<SweepRow>& rows) {
    std::string out = axis + ",seed,final_test_accuracy,status\n";
    for (const auto& r : rows) {
        out += r.value + ',' + std::to_string(r.seed) + ',';
        out += r.failed ? "" : format_double(r.final_accuracy);
        out += ',';
        out += r.failed ? "FAILED: " + r.error : "ok";
        out += '\n';
    }
    return out;
}

} // namespace harness
} // namespace mwh
