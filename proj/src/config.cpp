#include "mwh/config.hpp"

#include "mwh/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace mwh {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

KeyValueFile KeyValueFile::parse_string(const std::string& text) {
    KeyValueFile kv;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config line " + std::to_string(lineno) +
                                   ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error("config line " + std::to_string(lineno) + ": empty key");
        kv.entries_[section.empty() ? key : section + "." + key] = value;
    }
    return kv;
}

bool KeyValueFile::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

std::string KeyValueFile::require_string(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw config_error("missing required config key: " + key);
    return it->second;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    double v;
    auto res = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
    if (res.ec != std::errc{} || res.ptr != it->second.data() + it->second.size())
        throw config_error("config key " + key + ": not a number: " + it->second);
    return v;
}

std::size_t KeyValueFile::get_size(const std::string& key, std::size_t fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::size_t v;
    auto res = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
    if (res.ec != std::errc{} || res.ptr != it->second.data() + it->second.size())
        throw config_error("config key " + key + ": not a count: " + it->second);
    return v;
}

std::uint64_t KeyValueFile::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::uint64_t v;
    auto res = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
    if (res.ec != std::errc{} || res.ptr != it->second.data() + it->second.size())
        throw config_error("config key " + key + ": not an integer: " + it->second);
    return v;
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw config_error("config key " + key + ": not a boolean: " + it->second);
}

std::vector<std::size_t> KeyValueFile::get_size_list(
    const std::string& key, const std::vector<std::size_t>& fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::vector<std::size_t> out;
    std::stringstream ss(it->second);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell = trim(cell);
        if (cell.empty()) continue;
        std::size_t v;
        auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
            throw config_error("config key " + key + ": bad list entry: " + cell);
        out.push_back(v);
    }
    return out;
}

void KeyValueFile::set(const std::string& key, const std::string& value) {
    entries_[key] = value;
}

TrainConfig TrainConfig::from_file(const std::string& path) {
    return from_kv(KeyValueFile::parse_file(path));
}

TrainConfig TrainConfig::from_kv(const KeyValueFile& kv) {
    TrainConfig c;

    const std::string dk = kv.get_string("data.kind", "csv");
    if (dk == "csv")
        c.dataset_kind = DatasetKind::Csv;
    else if (dk == "synthetic_images")
        c.dataset_kind = DatasetKind::SyntheticImages;
    else if (dk == "synthetic_blobs")
        c.dataset_kind = DatasetKind::SyntheticBlobs;
    else
        throw config_error("data.kind must be csv|synthetic_images|synthetic_blobs, got " + dk);
    c.dataset_path = kv.get_string("data.path", "");
    c.label_column = kv.get_string("data.label_column", "0");
    c.train_fraction = kv.get_double("data.train_fraction", c.train_fraction);
    c.stratified = kv.get_bool("data.stratified", c.stratified);
    c.split_seed_set = kv.has("data.split_seed");
    c.split_seed = kv.get_u64("data.split_seed", 0);
    c.synth_n = kv.get_size("data.n", c.synth_n);
    c.synth_channels = kv.get_size("data.channels", c.synth_channels);
    c.synth_height = kv.get_size("data.height", c.synth_height);
    c.synth_width = kv.get_size("data.width", c.synth_width);
    c.synth_dim = kv.get_size("data.dim", c.synth_dim);
    c.synth_separation = kv.get_double("data.separation", c.synth_separation);
    c.synth_seed = kv.get_u64("data.generator_seed", c.synth_seed);

    c.hidden = kv.get_size_list("model.hidden", c.hidden);

    const std::string opt = kv.get_string("optim.optimizer", "adam");
    if (opt == "adam")
        c.optimizer = OptimizerKind::Adam;
    else if (opt == "sgd")
        c.optimizer = OptimizerKind::Sgd;
    else
        throw config_error("optim.optimizer must be adam|sgd, got " + opt);
    c.lr = kv.get_double("optim.lr", c.lr);
    c.momentum = kv.get_double("optim.momentum", c.momentum);
    c.lr_schedule = optim::schedule_kind_from_name(kv.get_string("optim.schedule", "constant"));
    c.milestones = kv.get_size_list("optim.milestones", c.milestones);
    c.decay_factor = kv.get_double("optim.decay_factor", c.decay_factor);

    c.epochs = kv.get_size("train.epochs", c.epochs);
    c.batch_size = kv.get_size("train.batch_size", c.batch_size);
    c.seed = kv.get_u64("train.seed", c.seed);
    c.alpha = kv.get_double("train.alpha", c.alpha);
    c.out_dir = kv.get_string("train.out_dir", c.out_dir);
    c.run_name = kv.get_string("train.run_name", c.run_name);

    c.strategy.kind = StrategySpec::kind_from_name(kv.get_string("strategy.name", "mwh"));
    c.strategy.params.p = kv.get_double("strategy.p", 0.6);
    c.strategy.params.q = kv.get_double("strategy.q", 0.9);
    c.strategy.params.alpha = c.alpha;
    c.strategy.refine_epochs = kv.get_size("strategy.refine_epochs", 25);
    c.strategy.stage2 = StrategySpec::policy_from_name(kv.get_string("strategy.stage2", "mwh"));
    c.strategy.stage3 = StrategySpec::policy_from_name(kv.get_string("strategy.stage3", "mwh"));
    const std::string mix = kv.get_string("strategy.mix_op", "mixup");
    if (mix == "mixup")
        c.mix_op = MixOp::Mixup;
    else if (mix == "cutmix")
        c.mix_op = MixOp::Cutmix;
    else
        throw config_error("strategy.mix_op must be mixup|cutmix, got " + mix);
    c.label_mixing = kv.get_bool("strategy.label_mixing", true);

    c.validate();
    return c;
}

void TrainConfig::validate() const {
    if (dataset_kind == DatasetKind::Csv && dataset_path.empty())
        throw config_error("data.path is required for csv datasets");
    if (alpha <= 0.0) throw config_error("train.alpha must be > 0");
    if (epochs < 1) throw config_error("train.epochs must be >= 1");
    if (batch_size < 1) throw config_error("train.batch_size must be >= 1");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw config_error("data.train_fraction must be in (0, 1)");
    if (lr <= 0.0) throw config_error("optim.lr must be > 0");
    if (strategy.kind == StrategyKind::Mwh || strategy.kind == StrategyKind::StageCombo) {
        ScheduleParams p = strategy.params;
        p.m = 1; // m is resolved at runtime; validate the fractions here
        p.validate();
    }
    if (mix_op == MixOp::Cutmix && dataset_kind != DatasetKind::SyntheticImages)
        throw config_error("cutmix needs an image dataset (data.kind = synthetic_images)");
}

std::map<std::string, std::string> TrainConfig::resolved() const {
    auto fmt = [](double v) {
        std::ostringstream os;
        os << v;
        return os.str();
    };
    std::map<std::string, std::string> m;
    m["data.kind"] = dataset_kind == DatasetKind::Csv ? "csv"
                   : dataset_kind == DatasetKind::SyntheticImages ? "synthetic_images"
                                                                  : "synthetic_blobs";
    m["data.path"] = dataset_path;
    m["data.label_column"] = label_column;
    m["data.train_fraction"] = fmt(train_fraction);
    m["data.stratified"] = stratified ? "true" : "false";
    m["data.split_seed"] = std::to_string(split_seed_set ? split_seed : seed);
    if (dataset_kind != DatasetKind::Csv) {
        m["data.n"] = std::to_string(synth_n);
        m["data.generator_seed"] = std::to_string(synth_seed);
        if (dataset_kind == DatasetKind::SyntheticImages) {
            m["data.channels"] = std::to_string(synth_channels);
            m["data.height"] = std::to_string(synth_height);
            m["data.width"] = std::to_string(synth_width);
        } else {
            m["data.dim"] = std::to_string(synth_dim);
            m["data.separation"] = fmt(synth_separation);
        }
    }
    {
        std::string h;
        for (std::size_t i = 0; i < hidden.size(); ++i)
            h += (i ? "," : "") + std::to_string(hidden[i]);
        m["model.hidden"] = h;
    }
    m["optim.optimizer"] = optimizer == OptimizerKind::Adam ? "adam" : "sgd";
    m["optim.lr"] = fmt(lr);
    m["optim.momentum"] = fmt(momentum);
    m["optim.schedule"] = lr_schedule == LrScheduleKind::Constant ? "constant"
                        : lr_schedule == LrScheduleKind::StepDecay ? "step"
                                                                   : "cosine";
    {
        std::string ms;
        for (std::size_t i = 0; i < milestones.size(); ++i)
            ms += (i ? "," : "") + std::to_string(milestones[i]);
        m["optim.milestones"] = ms;
    }
    m["optim.decay_factor"] = fmt(decay_factor);
    m["train.epochs"] = std::to_string(epochs);
    m["train.batch_size"] = std::to_string(batch_size);
    m["train.seed"] = std::to_string(seed);
    m["train.alpha"] = fmt(alpha);
    m["train.out_dir"] = out_dir;
    m["train.run_name"] = run_name;
    m["strategy.name"] = StrategySpec::kind_name(strategy.kind);
    m["strategy.p"] = fmt(strategy.params.p);
    m["strategy.q"] = fmt(strategy.params.q);
    m["strategy.refine_epochs"] = std::to_string(strategy.refine_epochs);
    auto pol = [](Policy p) {
        return p == Policy::Clean ? "clean" : p == Policy::Mixup ? "mixup" : "mwh";
    };
    m["strategy.stage2"] = pol(strategy.stage2);
    m["strategy.stage3"] = pol(strategy.stage3);
    m["strategy.mix_op"] = mix_op == MixOp::Mixup ? "mixup" : "cutmix";
    m["strategy.label_mixing"] = label_mixing ? "true" : "false";
    return m;
}

} // namespace mwh
