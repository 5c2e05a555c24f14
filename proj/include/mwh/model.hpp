#pragma once

#include "mwh/matrix.hpp"
#include "mwh/rng.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace mwh {

// Fully connected classifier: ReLU hidden layers, softmax output,
// soft-label cross-entropy.
struct MlpSpec {
    std::vector<std::size_t> layer_sizes; // input, hidden..., output

    void validate() const; // >= 2 layers, all sizes >= 1
    std::size_t num_weight_layers() const { return layer_sizes.size() - 1; }
};

struct MlpState {
    MlpSpec spec;
    std::vector<Matrix> weights; // fan_in x fan_out per layer
    std::vector<Matrix> biases;  // 1 x fan_out per layer
};

struct Gradients {
    std::vector<Matrix> weights;
    std::vector<Matrix> biases;
};

// Everything backward() needs from the matching forward() pass.
struct ForwardCache {
    Matrix inputs;
    std::vector<Matrix> pre_activations; // z per layer
    std::vector<Matrix> activations;     // relu(z) per hidden layer
    Matrix probs;
};

namespace model {

// Fan-in scaled uniform init, U(-1/sqrt(fan_in), 1/sqrt(fan_in)) for
// weights and biases, matching standard framework linear layers. Draws
// from the stream layer by layer: weights row-major, then the bias row.
MlpState init(const MlpSpec& spec, RngStream& stream);

ForwardCache forward(const MlpState& state, const Matrix& inputs);

// Mean over the batch of -sum_k target_k * log(max(prob_k, 1e-12)).
double loss_ce_soft(const Matrix& probs, const Matrix& targets);

// Exact gradients of loss_ce_soft(forward(...)); the output delta is
// (probs - targets) / batch_size.
Gradients backward(const MlpState& state, const ForwardCache& cache, const Matrix& targets);

// Argmax match rate against integer class labels; ties go to the lowest
// class index.
double accuracy(const Matrix& probs, const std::vector<std::size_t>& hard_labels);

// Text dump with a shape header; %.17g values so save/load round-trips
// doubles exactly. The optional scaler block lets `eval` re-apply the
// training preprocessing. Format documented in the README.
struct SavedScaler {
    std::vector<double> col_min;
    std::vector<double> col_range; // 0 for constant columns
};

void save(const MlpState& state, const std::string& path,
          const SavedScaler* scaler = nullptr);
MlpState load(const std::string& path, SavedScaler* scaler_out = nullptr);

} // namespace model

} // namespace mwh
