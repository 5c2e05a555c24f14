#pragma once

#include "mwh/matrix.hpp"
#include "mwh/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace mwh {

// Metadata of the mixing applied to a batch: the coefficient actually used
// for the inputs/labels, the pairing permutation, and whether labels were
// interpolated (CutMix can skip that).
struct MixInfo {
    double lambda = 1.0;
    std::vector<std::size_t> pairing;
    bool label_mixing = true;
};

// Mini-batch of inputs with soft-label targets. Target rows are
// non-negative and sum to 1.
struct Batch {
    Matrix inputs;  // batch_size x feature_dim
    Matrix targets; // batch_size x num_classes
    std::optional<MixInfo> mix_info;

    std::size_t size() const { return inputs.rows(); }
};

// Dense batch x channels x height x width tensor for the image path.
// Pixel values live in [0, 1] after ingestion.
struct ImageTensor {
    std::size_t batch = 0, channels = 0, height = 0, width = 0;
    std::vector<double> data;

    ImageTensor() = default;
    ImageTensor(std::size_t b, std::size_t c, std::size_t h, std::size_t w)
        : batch(b), channels(c), height(h), width(w), data(b * c * h * w, 0.0) {}

    double& at(std::size_t b, std::size_t c, std::size_t y, std::size_t x) {
        return data[((b * channels + c) * height + y) * width + x];
    }
    double at(std::size_t b, std::size_t c, std::size_t y, std::size_t x) const {
        return data[((b * channels + c) * height + y) * width + x];
    }
    std::size_t pixels_per_image() const { return channels * height * width; }

    // batch x (c*h*w) matrix for feeding the MLP.
    Matrix flatten() const;
};

// Pixel rectangle [x1, x2) x [y1, y2), already clipped to the image.
struct CutBox {
    std::size_t x1 = 0, y1 = 0, x2 = 0, y2 = 0;
    std::size_t area() const { return (x2 - x1) * (y2 - y1); }
};

namespace augment {

// mixup: one lambda ~ Beta(alpha, alpha) and one pairing permutation for
// the whole batch; inputs and targets are both interpolated. Draw order:
// lambda, then permutation.
Batch mixup_batch(const Batch& batch, double alpha, RngStream& stream);

// Deterministic core used by mixup_batch; exposed for tests that force
// lambda/pairing.
Batch mixup_apply(const Batch& batch, double lambda, const std::vector<std::size_t>& pairing);

// CutMix: lambda ~ Beta(alpha, alpha), pairing permutation, then one box
// of size (W*sqrt(1-lambda)) x (H*sqrt(1-lambda)) centered uniformly and
// clipped. The paired image's box region is pasted in, and the mixing
// coefficient is readjusted to the surviving area fraction
// lambda' = 1 - box_area/(H*W). With label_mixing off the target is the
// hard label of whichever image contributes the larger area.
Batch cutmix_batch(const ImageTensor& images, const Matrix& targets, double alpha,
                   RngStream& stream, bool label_mixing = true);

// Deterministic core used by cutmix_batch; exposed for tests that force
// the box.
Batch cutmix_apply(const ImageTensor& images, const Matrix& targets,
                   const std::vector<std::size_t>& pairing, const CutBox& box,
                   bool label_mixing);

// Box sampling rule: cut_w = floor(W*sqrt(1-lambda)), uniform center,
// clipped to bounds. Consumes two uniform integer draws (cx, cy).
CutBox sample_cut_box(std::size_t height, std::size_t width, double lambda, RngStream& stream);

// Horizontal flip with probability 0.5, then zero-pad by 4 per side and
// random crop back to the original size. Per image the draw order is
// flip coin, x offset, y offset.
ImageTensor basic_augment(const ImageTensor& images, RngStream& stream);

// Deterministic primitives behind basic_augment.
void hflip_image(ImageTensor& images, std::size_t index);
void pad_crop_image(ImageTensor& images, std::size_t index, std::size_t pad, std::size_t off_x,
                    std::size_t off_y);

// Tabular "basic augmentation" is the raw data.
Batch identity_augment(const Batch& batch);

} // namespace augment

} // namespace mwh
