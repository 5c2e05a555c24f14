#include "mwh/data.hpp"

#include "mwh/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>

namespace mwh {
namespace data {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim surrounding whitespace
        auto b = cell.find_first_not_of(" \t\r");
        auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last;
}

bool parse_index(const std::string& s, std::size_t& out) {
    if (s.empty()) return false;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

} // namespace

TabularDataset load_csv(const std::string& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw data_error(data_error::kind::missing_file, "cannot open dataset: " + path);

    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        rows.push_back(split_commas(line));
    }
    if (rows.empty()) throw data_error(data_error::kind::empty_dataset, "empty dataset: " + path);

    // A header row is one whose cells do not all parse as numbers.
    bool has_header = false;
    for (const auto& cell : rows.front()) {
        double v;
        if (!parse_double(cell, v)) {
            has_header = true;
            break;
        }
    }

    std::vector<std::string> header;
    std::size_t first_data_row = 0;
    if (has_header) {
        header = rows.front();
        first_data_row = 1;
        if (rows.size() == 1)
            throw data_error(data_error::kind::empty_dataset, "no data rows in " + path);
    }
    const std::size_t width = rows[first_data_row].size();
    if (width < 2)
        throw data_error(data_error::kind::bad_format, "need at least one feature and a label");

    std::size_t label_idx;
    if (!parse_index(label_column, label_idx)) {
        if (!has_header)
            throw data_error(data_error::kind::bad_format,
                             "label column by name needs a header row: " + label_column);
        auto it = std::find(header.begin(), header.end(), label_column);
        if (it == header.end())
            throw data_error(data_error::kind::bad_format,
                             "label column not found: " + label_column);
        label_idx = static_cast<std::size_t>(it - header.begin());
    }
    if (label_idx >= width)
        throw data_error(data_error::kind::bad_format, "label column index out of range");

    TabularDataset ds;
    const std::size_t n = rows.size() - first_data_row;
    const std::size_t d = width - 1;
    ds.features = Matrix(n, d);
    ds.labels.reserve(n);
    if (has_header)
        for (std::size_t j = 0; j < width; ++j)
            if (j != label_idx) ds.feature_names.push_back(header[j]);

    std::unordered_map<std::string, std::size_t> label_ids;
    for (std::size_t r = 0; r < n; ++r) {
        const auto& cells = rows[r + first_data_row];
        const std::size_t file_row = r + first_data_row + 1; // 1-based, as in the file
        if (cells.size() != width)
            throw data_error(data_error::kind::bad_format,
                             "row " + std::to_string(file_row) + ": expected " +
                                 std::to_string(width) + " columns, got " +
                                 std::to_string(cells.size()));
        std::size_t col = 0;
        for (std::size_t j = 0; j < width; ++j) {
            if (j == label_idx) continue;
            double v;
            if (!parse_double(cells[j], v))
                throw data_error(data_error::kind::bad_value,
                                 "row " + std::to_string(file_row) + ": non-numeric feature '" +
                                     cells[j] + "'");
            ds.features.at(r, col++) = v;
        }
        const std::string& lab = cells[label_idx];
        auto [it, inserted] = label_ids.try_emplace(lab, label_ids.size());
        if (inserted) ds.class_names.push_back(lab);
        ds.labels.push_back(it->second);
    }
    ds.class_count = label_ids.size();
    return ds;
}

MinMaxScaler fit_minmax(const Matrix& features) {
    if (features.rows() == 0) throw data_error(data_error::kind::empty_dataset, "nothing to fit");
    MinMaxScaler s;
    s.col_min.resize(features.cols());
    s.col_range.resize(features.cols());
    for (std::size_t j = 0; j < features.cols(); ++j) {
        double lo = features.at(0, j), hi = features.at(0, j);
        for (std::size_t i = 1; i < features.rows(); ++i) {
            lo = std::min(lo, features.at(i, j));
            hi = std::max(hi, features.at(i, j));
        }
        s.col_min[j] = lo;
        s.col_range[j] = hi - lo;
    }
    return s;
}

void apply_minmax(const MinMaxScaler& scaler, Matrix& features) {
    if (scaler.col_min.size() != features.cols())
        throw numeric_error("scaler dimension mismatch");
    for (std::size_t i = 0; i < features.rows(); ++i)
        for (std::size_t j = 0; j < features.cols(); ++j) {
            const double r = scaler.col_range[j];
            features.at(i, j) = r == 0.0 ? 0.0 : (features.at(i, j) - scaler.col_min[j]) / r;
        }
}

MinMaxScaler minmax_scale(TabularDataset& dataset) {
    MinMaxScaler s = fit_minmax(dataset.features);
    apply_minmax(s, dataset.features);
    return s;
}

namespace {

TabularDataset gather(const TabularDataset& ds, const std::vector<std::size_t>& idx) {
    TabularDataset out;
    out.features = Matrix(idx.size(), ds.dim());
    out.labels.reserve(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        std::copy(ds.features.row(idx[r]), ds.features.row(idx[r]) + ds.dim(),
                  out.features.row(r));
        out.labels.push_back(ds.labels[idx[r]]);
    }
    out.class_count = ds.class_count;
    out.feature_names = ds.feature_names;
    out.class_names = ds.class_names;
    return out;
}

} // namespace

void split_indices(const std::vector<std::size_t>& labels, std::size_t class_count,
                   const SplitSpec& spec, std::vector<std::size_t>& train_idx,
                   std::vector<std::size_t>& test_idx) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw config_error("split: train_fraction must be in (0, 1)");
    if (labels.empty()) throw data_error(data_error::kind::empty_dataset, "nothing to split");

    RngStream stream(spec.seed);
    train_idx.clear();
    test_idx.clear();

    if (spec.stratified) {
        std::vector<std::vector<std::size_t>> by_class(class_count);
        for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
        for (std::size_t c = 0; c < by_class.size(); ++c) {
            auto& members = by_class[c];
            if (members.size() < 2) {
                std::cerr << "warning: class " << c << " has " << members.size()
                          << " sample(s); assigning unstratified\n";
                for (std::size_t i : members)
                    (stream.uniform01() < spec.train_fraction ? train_idx : test_idx).push_back(i);
                continue;
            }
            const auto perm = stream.permutation(members.size());
            std::size_t n_train = static_cast<std::size_t>(
                std::round(spec.train_fraction * static_cast<double>(members.size())));
            n_train = std::clamp<std::size_t>(n_train, 1, members.size() - 1);
            for (std::size_t k = 0; k < members.size(); ++k)
                (k < n_train ? train_idx : test_idx).push_back(members[perm[k]]);
        }
    } else {
        const auto perm = stream.permutation(labels.size());
        std::size_t n_train = static_cast<std::size_t>(
            std::round(spec.train_fraction * static_cast<double>(labels.size())));
        n_train = std::clamp<std::size_t>(n_train, 1, labels.size() - 1);
        for (std::size_t k = 0; k < labels.size(); ++k)
            (k < n_train ? train_idx : test_idx).push_back(perm[k]);
    }

    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
}

void split(const TabularDataset& dataset, const SplitSpec& spec, TabularDataset& train,
           TabularDataset& test) {
    std::vector<std::size_t> train_idx, test_idx;
    split_indices(dataset.labels, dataset.class_count, spec, train_idx, test_idx);
    train = gather(dataset, train_idx);
    test = gather(dataset, test_idx);
}

BatchIterator::BatchIterator(const TabularDataset& dataset, std::size_t batch_size)
    : dataset_(&dataset), batch_size_(batch_size) {
    if (batch_size_ < 1) throw config_error("batch size must be >= 1");
}

void BatchIterator::start_epoch(RngStream& stream) {
    order_ = stream.permutation(dataset_->size());
    cursor_ = 0;
}

bool BatchIterator::next_batch(Batch& out) {
    if (cursor_ >= order_.size()) return false;
    const std::size_t take = std::min(batch_size_, order_.size() - cursor_);
    out.inputs = Matrix(take, dataset_->dim());
    batch_labels_.assign(take, 0);
    for (std::size_t r = 0; r < take; ++r) {
        const std::size_t src = order_[cursor_ + r];
        std::copy(dataset_->features.row(src), dataset_->features.row(src) + dataset_->dim(),
                  out.inputs.row(r));
        batch_labels_[r] = dataset_->labels[src];
    }
    out.targets = one_hot(batch_labels_, dataset_->class_count);
    out.mix_info.reset();
    cursor_ += take;
    return true;
}

std::size_t BatchIterator::batches_per_epoch() const {
    return (dataset_->size() + batch_size_ - 1) / batch_size_;
}

Matrix one_hot(const std::vector<std::size_t>& labels, std::size_t class_count) {
    Matrix t(labels.size(), class_count);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= class_count) throw numeric_error("one_hot: label id out of range");
        t.at(i, labels[i]) = 1.0;
    }
    return t;
}

namespace {

constexpr char kImageMagic[4] = {'M', 'W', 'H', 'I'};

void write_u32(std::ofstream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::ifstream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

} // namespace

void save_images(const ImageTensor& images, const std::vector<std::size_t>& labels,
                 const std::string& path) {
    if (labels.size() != images.batch)
        throw numeric_error("save_images: label count mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error(data_error::kind::missing_file, "cannot write " + path);
    out.write(kImageMagic, 4);
    write_u32(out, static_cast<std::uint32_t>(images.batch));
    write_u32(out, static_cast<std::uint32_t>(images.channels));
    write_u32(out, static_cast<std::uint32_t>(images.height));
    write_u32(out, static_cast<std::uint32_t>(images.width));
    for (double v : images.data) {
        const float f = static_cast<float>(v);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        write_u32(out, bits);
    }
    for (std::size_t lab : labels) write_u32(out, static_cast<std::uint32_t>(lab));
}

ImageTensor load_images(const std::string& path, std::vector<std::size_t>& labels_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error(data_error::kind::missing_file, "cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kImageMagic, 4) != 0)
        throw data_error(data_error::kind::bad_format, "not an image file: " + path);
    const std::uint32_t b = read_u32(in), c = read_u32(in), h = read_u32(in), w = read_u32(in);
    if (!in || b == 0 || c == 0 || h == 0 || w == 0)
        throw data_error(data_error::kind::bad_format, "malformed image header in " + path);
    ImageTensor t(b, c, h, w);
    for (double& v : t.data) {
        const std::uint32_t bits = read_u32(in);
        float f;
        std::memcpy(&f, &bits, 4);
        v = static_cast<double>(f);
    }
    labels_out.assign(b, 0);
    for (auto& lab : labels_out) lab = read_u32(in);
    if (!in) throw data_error(data_error::kind::bad_format, "truncated image file: " + path);
    return t;
}

ImageTensor synthetic_images(std::size_t n, std::size_t channels, std::size_t height,
                             std::size_t width, std::uint64_t generator_seed,
                             std::vector<std::size_t>& labels_out) {
    RngStream gen(generator_seed);
    ImageTensor t(n, channels, height, width);
    labels_out.assign(n, 0);
    const std::size_t hh = height / 2, hw = width / 2;
    for (std::size_t b = 0; b < n; ++b) {
        const std::size_t cls = b % 2;
        labels_out[b] = cls;
        for (std::size_t c = 0; c < channels; ++c)
            for (std::size_t y = 0; y < height; ++y)
                for (std::size_t x = 0; x < width; ++x) {
                    // class 0 lights the top-left quadrant, class 1 the bottom-right
                    const bool bright = cls == 0 ? (y < hh && x < hw) : (y >= hh && x >= hw);
                    const double lo = bright ? 0.6 : 0.0;
                    t.at(b, c, y, x) = lo + 0.4 * gen.uniform01();
                }
    }
    return t;
}

TabularDataset synthetic_blobs(std::size_t n, std::size_t dim, double separation,
                               std::uint64_t generator_seed) {
    RngStream gen(generator_seed);
    TabularDataset ds;
    ds.features = Matrix(n, dim);
    ds.labels.reserve(n);
    ds.class_count = 2;
    ds.class_names = {"0", "1"};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t cls = i % 2;
        const double center = cls == 0 ? -separation / 2.0 : separation / 2.0;
        for (std::size_t j = 0; j < dim; ++j) ds.features.at(i, j) = center + gen.normal01();
        ds.labels.push_back(cls);
    }
    return ds;
}

} // namespace data
} // namespace mwh
