#pragma once

#include "mwh/augment.hpp"
#include "mwh/matrix.hpp"
#include "mwh/rng.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace mwh {

struct TabularDataset {
    Matrix features;                       // n x d
    std::vector<std::size_t> labels;       // dense ids in 0..K-1
    std::size_t class_count = 0;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;  // id -> original label text

    std::size_t size() const { return features.rows(); }
    std::size_t dim() const { return features.cols(); }
};

struct SplitSpec {
    double train_fraction = 0.75;
    bool stratified = true;
    std::uint64_t seed = 0;
};

// Per-column min/range fitted on the train split only.
struct MinMaxScaler {
    std::vector<double> col_min;
    std::vector<double> col_range; // 0 marks a constant column (maps to 0)
};

namespace data {

// Parses a comma-separated file. label_column is a 0-based index or, when
// the file has a header row, a column name. Categorical labels map to
// dense ids in first-appearance order. Any unparseable row is an error
// naming that row.
TabularDataset load_csv(const std::string& path, const std::string& label_column);

MinMaxScaler fit_minmax(const Matrix& features);
void apply_minmax(const MinMaxScaler& scaler, Matrix& features);
// Fit on the dataset and rescale it in place ((x - min) / (max - min)).
MinMaxScaler minmax_scale(TabularDataset& dataset);

// Stratified shuffle split. Classes with fewer than 2 samples fall back
// to an unstratified coin flip (with a warning on stderr).
void split(const TabularDataset& dataset, const SplitSpec& spec, TabularDataset& train,
           TabularDataset& test);

// Index-level core of split(); both output lists come back sorted.
void split_indices(const std::vector<std::size_t>& labels, std::size_t class_count,
                   const SplitSpec& spec, std::vector<std::size_t>& train_idx,
                   std::vector<std::size_t>& test_idx);

// One pass over the dataset in mini-batches with one-hot targets.
// Reshuffles with a fresh permutation draw from the run's stream at each
// epoch start; the last partial batch is kept.
class BatchIterator {
public:
    BatchIterator(const TabularDataset& dataset, std::size_t batch_size);

    // Draws the epoch's shuffle permutation from the stream.
    void start_epoch(RngStream& stream);
    // False once the epoch is exhausted.
    bool next_batch(Batch& out);

    std::size_t batches_per_epoch() const;
    const std::vector<std::size_t>& current_order() const { return order_; }
    // Hard labels (dataset order ids) of the most recent batch.
    const std::vector<std::size_t>& batch_labels() const { return batch_labels_; }

private:
    const TabularDataset* dataset_;
    std::size_t batch_size_;
    std::vector<std::size_t> order_;
    std::size_t cursor_ = 0;
    std::vector<std::size_t> batch_labels_;
};

Matrix one_hot(const std::vector<std::size_t>& labels, std::size_t class_count);

// Binary image container: magic "MWHI", four little-endian u32 dims
// (batch, channels, height, width), float32 payload.
void save_images(const ImageTensor& images, const std::vector<std::size_t>& labels,
                 const std::string& path);
ImageTensor load_images(const std::string& path, std::vector<std::size_t>& labels_out);

// Synthetic 2-class task: a bright quadrant on a dim noisy background,
// top-left for class 0 and bottom-right for class 1. Values in [0, 1].
ImageTensor synthetic_images(std::size_t n, std::size_t channels, std::size_t height,
                             std::size_t width, std::uint64_t generator_seed,
                             std::vector<std::size_t>& labels_out);

// Synthetic 2-class tabular task: two Gaussian blobs with partial overlap.
TabularDataset synthetic_blobs(std::size_t n, std::size_t dim, double separation,
                               std::uint64_t generator_seed);

} // namespace data

} // namespace mwh
