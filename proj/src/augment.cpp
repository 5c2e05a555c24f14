#include "mwh/augment.hpp"

#include "mwh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mwh {

Matrix ImageTensor::flatten() const {
    Matrix m(batch, pixels_per_image());
    std::copy(data.begin(), data.end(), m.data());
    return m;
}

namespace augment {

namespace {

void check_pairing(const std::vector<std::size_t>& pairing, std::size_t n) {
    if (pairing.size() != n) throw numeric_error("augment: pairing length != batch size");
    for (std::size_t j : pairing)
        if (j >= n) throw numeric_error("augment: pairing index out of range");
}

} // namespace

Batch mixup_apply(const Batch& batch, double lambda,
                  const std::vector<std::size_t>& pairing) {
    const std::size_t n = batch.size();
    check_pairing(pairing, n);
    Batch out;
    out.inputs = Matrix(n, batch.inputs.cols());
    out.targets = Matrix(n, batch.targets.cols());
    const double mu = 1.0 - lambda;
#pragma omp parallel for schedule(static) if (n * batch.inputs.cols() >= 16384)
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = pairing[i];
        const double* xi = batch.inputs.row(i);
        const double* xj = batch.inputs.row(j);
        double* x = out.inputs.row(i);
        for (std::size_t k = 0; k < batch.inputs.cols(); ++k)
            x[k] = lambda * xi[k] + mu * xj[k];
        const double* yi = batch.targets.row(i);
        const double* yj = batch.targets.row(j);
        double* y = out.targets.row(i);
        for (std::size_t k = 0; k < batch.targets.cols(); ++k)
            y[k] = lambda * yi[k] + mu * yj[k];
    }
    out.mix_info = MixInfo{lambda, pairing, true};
    return out;
}

Batch mixup_batch(const Batch& batch, double alpha, RngStream& stream) {
    if (alpha <= 0.0) throw config_error("mixup: alpha must be > 0");
    if (batch.size() < 1) throw numeric_error("mixup: empty batch");
    const double lambda = stream.sample_beta(alpha);
    const auto pairing = stream.permutation(batch.size());
    return mixup_apply(batch, lambda, pairing);
}

CutBox sample_cut_box(std::size_t height, std::size_t width, double lambda, RngStream& stream) {
    const double cut_rat = std::sqrt(1.0 - lambda);
    const std::size_t cut_w = static_cast<std::size_t>(static_cast<double>(width) * cut_rat);
    const std::size_t cut_h = static_cast<std::size_t>(static_cast<double>(height) * cut_rat);
    const std::size_t cx = static_cast<std::size_t>(stream.uniform_below(width));
    const std::size_t cy = static_cast<std::size_t>(stream.uniform_below(height));
    CutBox box;
    box.x1 = cx > cut_w / 2 ? cx - cut_w / 2 : 0;
    box.y1 = cy > cut_h / 2 ? cy - cut_h / 2 : 0;
    box.x2 = std::min(cx + cut_w / 2, width);
    box.y2 = std::min(cy + cut_h / 2, height);
    return box;
}

Batch cutmix_apply(const ImageTensor& images, const Matrix& targets,
                   const std::vector<std::size_t>& pairing, const CutBox& box,
                   bool label_mixing) {
    const std::size_t n = images.batch;
    check_pairing(pairing, n);
    if (targets.rows() != n) throw numeric_error("cutmix: targets/batch size mismatch");

    ImageTensor mixed = images;
    for (std::size_t b = 0; b < n; ++b) {
        const std::size_t src = pairing[b];
        for (std::size_t c = 0; c < images.channels; ++c)
            for (std::size_t y = box.y1; y < box.y2; ++y)
                for (std::size_t x = box.x1; x < box.x2; ++x)
                    mixed.at(b, c, y, x) = images.at(src, c, y, x);
    }

    // Exact area accounting in integers; lambda' is the kept fraction.
    const std::size_t total = images.height * images.width;
    const double lambda_adj =
        1.0 - static_cast<double>(box.area()) / static_cast<double>(total);

    Batch out;
    out.inputs = mixed.flatten();
    out.targets = Matrix(n, targets.cols());
    for (std::size_t b = 0; b < n; ++b) {
        const std::size_t src = pairing[b];
        if (label_mixing) {
            for (std::size_t k = 0; k < targets.cols(); ++k)
                out.targets.at(b, k) =
                    lambda_adj * targets.at(b, k) + (1.0 - lambda_adj) * targets.at(src, k);
        } else {
            // Larger-coefficient rule: keep the label of whichever image
            // covers more area.
            const std::size_t from = lambda_adj >= 0.5 ? b : src;
            for (std::size_t k = 0; k < targets.cols(); ++k)
                out.targets.at(b, k) = targets.at(from, k);
        }
    }
    out.mix_info = MixInfo{lambda_adj, pairing, label_mixing};
    return out;
}

Batch cutmix_batch(const ImageTensor& images, const Matrix& targets, double alpha,
                   RngStream& stream, bool label_mixing) {
    if (alpha <= 0.0) throw config_error("cutmix: alpha must be > 0");
    if (images.batch < 1 || images.height < 1 || images.width < 1)
        throw numeric_error("cutmix: empty image tensor");
    const double lambda = stream.sample_beta(alpha);
    const auto pairing = stream.permutation(images.batch);
    const CutBox box = sample_cut_box(images.height, images.width, lambda, stream);
    return cutmix_apply(images, targets, pairing, box, label_mixing);
}

void hflip_image(ImageTensor& images, std::size_t index) {
    for (std::size_t c = 0; c < images.channels; ++c)
        for (std::size_t y = 0; y < images.height; ++y)
            for (std::size_t x = 0; x < images.width / 2; ++x)
                std::swap(images.at(index, c, y, x),
                          images.at(index, c, y, images.width - 1 - x));
}

void pad_crop_image(ImageTensor& images, std::size_t index, std::size_t pad, std::size_t off_x,
                    std::size_t off_y) {
    const std::size_t h = images.height, w = images.width;
    std::vector<double> padded(images.channels * (h + 2 * pad) * (w + 2 * pad), 0.0);
    const std::size_t pw = w + 2 * pad;
    const std::size_t ph = h + 2 * pad;
    for (std::size_t c = 0; c < images.channels; ++c)
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x)
                padded[(c * ph + y + pad) * pw + x + pad] = images.at(index, c, y, x);
    for (std::size_t c = 0; c < images.channels; ++c)
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x)
                images.at(index, c, y, x) = padded[(c * ph + y + off_y) * pw + x + off_x];
}

ImageTensor basic_augment(const ImageTensor& images, RngStream& stream) {
    constexpr std::size_t kPad = 4;
    ImageTensor out = images;
    for (std::size_t b = 0; b < images.batch; ++b) {
        const bool flip = stream.uniform01() < 0.5;
        const auto off_x = static_cast<std::size_t>(stream.uniform_below(2 * kPad + 1));
        const auto off_y = static_cast<std::size_t>(stream.uniform_below(2 * kPad + 1));
        if (flip) hflip_image(out, b);
        pad_crop_image(out, b, kPad, off_x, off_y);
    }
    return out;
}

Batch identity_augment(const Batch& batch) { return batch; }

} // namespace augment

} // namespace mwh
