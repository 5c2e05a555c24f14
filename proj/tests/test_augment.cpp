#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mwh/augment.hpp"
#include "mwh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

using namespace mwh;
using namespace mwh::augment;

namespace {

Batch random_batch(std::size_t n, std::size_t d, std::size_t k, std::uint64_t seed) {
    RngStream stream(seed);
    Batch b;
    b.inputs = Matrix(n, d);
    for (std::size_t i = 0; i < b.inputs.size(); ++i) b.inputs.data()[i] = stream.uniform01();
    b.targets = Matrix(n, k);
    for (std::size_t i = 0; i < n; ++i)
        b.targets.at(i, stream.uniform_below(k)) = 1.0;
    return b;
}

std::vector<std::size_t> iota_perm(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    return p;
}

} // namespace

TEST_CASE("mixup at lambda 1 reproduces the batch bit-exactly") {
    const Batch b = random_batch(8, 5, 3, 1);
    const Batch out = mixup_apply(b, 1.0, iota_perm(8));
    CHECK(std::memcmp(out.inputs.data(), b.inputs.data(), b.inputs.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(out.targets.data(), b.targets.data(),
                      b.targets.size() * sizeof(double)) == 0);
}

TEST_CASE("mixup hand arithmetic at lambda 0.5") {
    Batch b;
    b.inputs = Matrix::from_rows({{0, 1}, {1, 0}});
    b.targets = Matrix::from_rows({{1, 0}, {0, 1}});
    const Batch out = mixup_apply(b, 0.5, {1, 0});
    CHECK(out.inputs.at(0, 0) == 0.5);
    CHECK(out.inputs.at(0, 1) == 0.5);
    CHECK(out.targets.at(0, 0) == 0.5);
    CHECK(out.targets.at(0, 1) == 0.5);
    REQUIRE(out.mix_info.has_value());
    CHECK(out.mix_info->lambda == 0.5);
}

TEST_CASE("mixup convexity and label normalization over random batches") {
    RngStream stream(2);
    for (int trial = 0; trial < 100; ++trial) {
        const Batch b = random_batch(16, 6, 4, 100 + trial);
        const Batch out = mixup_batch(b, 0.4, stream);
        REQUIRE(out.mix_info.has_value());
        const auto& pairing = out.mix_info->pairing;
        for (std::size_t i = 0; i < b.size(); ++i) {
            const std::size_t j = pairing[i];
            for (std::size_t c = 0; c < b.inputs.cols(); ++c) {
                const double lo = std::min(b.inputs.at(i, c), b.inputs.at(j, c));
                const double hi = std::max(b.inputs.at(i, c), b.inputs.at(j, c));
                CHECK(out.inputs.at(i, c) >= lo - 1e-12);
                CHECK(out.inputs.at(i, c) <= hi + 1e-12);
            }
            double sum = 0.0;
            for (std::size_t c = 0; c < b.targets.cols(); ++c) {
                CHECK(out.targets.at(i, c) >= 0.0);
                sum += out.targets.at(i, c);
            }
            CHECK(std::abs(sum - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("mixup rejects bad alpha and bad pairing") {
    RngStream stream(0);
    const Batch b = random_batch(4, 3, 2, 3);
    CHECK_THROWS_AS(mixup_batch(b, 0.0, stream), config_error);
    CHECK_THROWS_AS(mixup_apply(b, 0.5, {0, 1}), numeric_error);
    CHECK_THROWS_AS(mixup_apply(b, 0.5, {0, 1, 2, 9}), numeric_error);
}

TEST_CASE("cutmix zero-area box leaves images and labels unchanged") {
    ImageTensor imgs(3, 1, 4, 4);
    RngStream stream(4);
    for (auto& v : imgs.data) v = stream.uniform01();
    Matrix targets = Matrix::from_rows({{1, 0}, {0, 1}, {1, 0}});
    const CutBox empty{2, 2, 2, 2};
    const Batch out = cutmix_apply(imgs, targets, {1, 2, 0}, empty, true);
    CHECK(out.mix_info->lambda == 1.0);
    const Matrix flat = imgs.flatten();
    CHECK(std::memcmp(out.inputs.data(), flat.data(), flat.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(out.targets.data(), targets.data(),
                      targets.size() * sizeof(double)) == 0);
}

TEST_CASE("cutmix 4x4 with a 4-pixel box gives lambda 0.75 and mixed label") {
    ImageTensor imgs(2, 1, 4, 4);
    for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t y = 0; y < 4; ++y)
            for (std::size_t x = 0; x < 4; ++x)
                imgs.at(b, 0, y, x) = static_cast<double>(b); // image 0 all 0, image 1 all 1
    Matrix targets = Matrix::from_rows({{1, 0}, {0, 1}});
    const CutBox box{0, 0, 2, 2}; // 4 of 16 pixels
    const Batch out = cutmix_apply(imgs, targets, {1, 0}, box, true);
    CHECK(out.mix_info->lambda == 0.75);
    CHECK(out.targets.at(0, 0) == 0.75);
    CHECK(out.targets.at(0, 1) == 0.25);
    // pasted region of image 0 now carries image 1's value
    CHECK(out.inputs.at(0, 0) == 1.0);
    CHECK(out.inputs.at(0, 3) == 0.0);
}

TEST_CASE("cutmix area identity against pixel counting") {
    RngStream stream(5);
    for (std::size_t side : {4u, 7u, 16u, 32u}) {
        ImageTensor imgs(4, 1, side, side);
        // unique value per (image, pixel) so pasted pixels are identifiable
        for (std::size_t i = 0; i < imgs.data.size(); ++i)
            imgs.data[i] = static_cast<double>(i) / static_cast<double>(imgs.data.size());
        Matrix targets(4, 2);
        for (std::size_t i = 0; i < 4; ++i) targets.at(i, i % 2) = 1.0;
        for (int trial = 0; trial < 50; ++trial) {
            const Batch out = cutmix_batch(imgs, targets, 1.0, stream, true);
            const auto& pairing = out.mix_info->pairing;
            // brute-force count of pixels taken from the paired image
            std::size_t pasted = 0;
            for (std::size_t y = 0; y < side; ++y)
                for (std::size_t x = 0; x < side; ++x)
                    if (out.inputs.at(0, y * side + x) == imgs.at(pairing[0], 0, y, x) &&
                        pairing[0] != 0)
                        ++pasted;
            if (pairing[0] == 0) continue; // self-paired row tells us nothing
            const double expect =
                1.0 - static_cast<double>(pasted) / static_cast<double>(side * side);
            CHECK(out.mix_info->lambda == expect);
        }
    }
}

TEST_CASE("cutmix without label mixing keeps the dominant label") {
    ImageTensor imgs(2, 1, 4, 4);
    Matrix targets = Matrix::from_rows({{1, 0}, {0, 1}});
    // 12 of 16 pixels pasted -> lambda' = 0.25 -> paired label wins
    const CutBox big{0, 0, 4, 3};
    const Batch out = cutmix_apply(imgs, targets, {1, 0}, big, false);
    CHECK(out.mix_info->lambda == 0.25);
    CHECK(out.targets.at(0, 0) == 0.0);
    CHECK(out.targets.at(0, 1) == 1.0);
    // 4 of 16 pasted -> lambda' = 0.75 -> own label wins
    const CutBox small{0, 0, 2, 2};
    const Batch out2 = cutmix_apply(imgs, targets, {1, 0}, small, false);
    CHECK(out2.targets.at(0, 0) == 1.0);
}

TEST_CASE("cut box dimensions track sqrt(1 - lambda)") {
    RngStream stream(6);
    for (int trial = 0; trial < 200; ++trial) {
        const double lambda = stream.uniform01();
        const CutBox box = sample_cut_box(32, 32, lambda, stream);
        const auto limit = static_cast<std::size_t>(32.0 * std::sqrt(1.0 - lambda));
        CHECK(box.x2 - box.x1 <= limit);
        CHECK(box.y2 - box.y1 <= limit);
        CHECK(box.x2 <= 32);
        CHECK(box.y2 <= 32);
    }
}

TEST_CASE("hflip definition and value-preservation on constant images") {
    ImageTensor imgs(1, 1, 2, 2);
    imgs.at(0, 0, 0, 0) = 1;
    imgs.at(0, 0, 0, 1) = 2;
    imgs.at(0, 0, 1, 0) = 3;
    imgs.at(0, 0, 1, 1) = 4;
    hflip_image(imgs, 0);
    CHECK(imgs.at(0, 0, 0, 0) == 2);
    CHECK(imgs.at(0, 0, 0, 1) == 1);
    CHECK(imgs.at(0, 0, 1, 0) == 4);
    CHECK(imgs.at(0, 0, 1, 1) == 3);

    ImageTensor flat(1, 1, 3, 3);
    for (auto& v : flat.data) v = 0.7;
    ImageTensor copy = flat;
    hflip_image(copy, 0);
    CHECK(copy.data == flat.data);
}

TEST_CASE("pad-crop with centered offset is the identity") {
    ImageTensor imgs(1, 1, 8, 8);
    RngStream stream(7);
    for (auto& v : imgs.data) v = stream.uniform01();
    ImageTensor copy = imgs;
    pad_crop_image(copy, 0, 4, 4, 4);
    CHECK(copy.data == imgs.data);
}

TEST_CASE("crop offsets are uniform over the 9x9 grid") {
    // feed basic_augment a delta image and recover the offset from where
    // the spike lands
    const int trials = 10000;
    std::vector<int> counts(9, 0);
    RngStream stream(8);
    for (int t = 0; t < trials; ++t) {
        ImageTensor img(1, 1, 16, 16);
        img.at(0, 0, 8, 8) = 1.0; // spike; its y is unaffected by hflip
        const ImageTensor out = basic_augment(img, stream);
        int fy = -1;
        for (std::size_t y = 0; y < 16; ++y)
            for (std::size_t x = 0; x < 16; ++x)
                if (out.at(0, 0, y, x) == 1.0) fy = static_cast<int>(y);
        // padded spike row is 8 + 4; crop start off_y in [0, 8] keeps it visible
        REQUIRE(fy >= 4);
        const int off_y = 12 - fy;
        REQUIRE(off_y >= 0);
        REQUIRE(off_y < 9);
        counts[off_y]++;
    }
    const double expected = trials / 9.0;
    double stat = 0.0;
    for (int i = 0; i < 9; ++i) {
        const double d = counts[i] - expected;
        stat += d * d / expected;
    }
    CHECK(stat < 8 + 5.0 * std::sqrt(16.0)); // df=8, 5 sigma
}

TEST_CASE("identity augment returns the batch unchanged and is idempotent") {
    const Batch b = random_batch(5, 4, 3, 9);
    const Batch once = identity_augment(b);
    const Batch twice = identity_augment(once);
    CHECK(std::memcmp(once.inputs.data(), b.inputs.data(),
                      b.inputs.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(twice.inputs.data(), b.inputs.data(),
                      b.inputs.size() * sizeof(double)) == 0);
    for (std::size_t i = 0; i < b.size(); ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < b.targets.cols(); ++c) s += twice.targets.at(i, c);
        CHECK(s == 1.0);
    }
}
