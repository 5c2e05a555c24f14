#include "mwh/model.hpp"

#include "mwh/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mwh {

void MlpSpec::validate() const {
    if (layer_sizes.size() < 2) throw config_error("model: need at least input and output sizes");
    for (std::size_t s : layer_sizes)
        if (s < 1) throw config_error("model: layer sizes must be >= 1");
}

namespace model {

MlpState init(const MlpSpec& spec, RngStream& stream) {
    spec.validate();
    MlpState state;
    state.spec = spec;
    for (std::size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l) {
        const std::size_t fan_in = spec.layer_sizes[l];
        const std::size_t fan_out = spec.layer_sizes[l + 1];
        // fan-in scaled uniform, the convention of mainstream DL framework
        // linear layers; weights row-major first, then the bias row
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        Matrix w(fan_in, fan_out);
        for (std::size_t i = 0; i < w.size(); ++i)
            w.data()[i] = bound * (2.0 * stream.uniform01() - 1.0);
        Matrix b(1, fan_out);
        for (std::size_t i = 0; i < b.size(); ++i)
            b.data()[i] = bound * (2.0 * stream.uniform01() - 1.0);
        state.weights.push_back(std::move(w));
        state.biases.push_back(std::move(b));
    }
    return state;
}

ForwardCache forward(const MlpState& state, const Matrix& inputs) {
    if (inputs.cols() != state.spec.layer_sizes.front())
        throw numeric_error("forward: input width " + std::to_string(inputs.cols()) +
                            " != first layer size " +
                            std::to_string(state.spec.layer_sizes.front()));
    ForwardCache cache;
    cache.inputs = inputs;
    Matrix h = inputs;
    const std::size_t layers = state.weights.size();
    for (std::size_t l = 0; l < layers; ++l) {
        Matrix z = linalg::broadcast_add_row(linalg::matmul(h, state.weights[l]),
                                             state.biases[l]);
        cache.pre_activations.push_back(z);
        if (l + 1 < layers) {
            h = linalg::relu(z);
            cache.activations.push_back(h);
        } else {
            cache.probs = linalg::softmax_rows(z);
        }
    }
    return cache;
}

double loss_ce_soft(const Matrix& probs, const Matrix& targets) {
    if (!probs.same_shape(targets)) throw numeric_error("loss: probs/targets shape mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < probs.rows(); ++i)
        for (std::size_t k = 0; k < probs.cols(); ++k) {
            const double t = targets.at(i, k);
            if (t != 0.0) total -= t * std::log(std::max(probs.at(i, k), 1e-12));
        }
    return total / static_cast<double>(probs.rows());
}

Gradients backward(const MlpState& state, const ForwardCache& cache, const Matrix& targets) {
    const std::size_t layers = state.weights.size();
    if (cache.pre_activations.size() != layers)
        throw numeric_error("backward: cache does not match model");
    if (!cache.probs.same_shape(targets))
        throw numeric_error("backward: targets shape mismatch");

    Gradients grads;
    grads.weights.resize(layers);
    grads.biases.resize(layers);

    const double inv_n = 1.0 / static_cast<double>(targets.rows());
    Matrix delta = linalg::scale(linalg::sub(cache.probs, targets), inv_n);
    for (std::size_t l = layers; l-- > 0;) {
        const Matrix& layer_in = l == 0 ? cache.inputs : cache.activations[l - 1];
        grads.weights[l] = linalg::matmul(linalg::transpose(layer_in), delta);
        grads.biases[l] = linalg::row_sum(delta);
        if (l > 0)
            delta = linalg::hadamard(linalg::matmul(delta, linalg::transpose(state.weights[l])),
                                     linalg::relu_grad_mask(cache.pre_activations[l - 1]));
    }
    return grads;
}

double accuracy(const Matrix& probs, const std::vector<std::size_t>& hard_labels) {
    if (probs.rows() != hard_labels.size())
        throw numeric_error("accuracy: probs/labels size mismatch");
    if (probs.rows() == 0) return 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < probs.rows(); ++i) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < probs.cols(); ++k)
            if (probs.at(i, k) > probs.at(i, best)) best = k; // strict >: ties keep lowest index
        if (best == hard_labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(probs.rows());
}

namespace {

void write_matrix(std::FILE* f, const char* name, const Matrix& m) {
    std::fprintf(f, "tensor %s %zu %zu\n", name, m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j)
            std::fprintf(f, j ? " %.17g" : "%.17g", m.at(i, j));
        std::fputc('\n', f);
    }
}

} // namespace

void save(const MlpState& state, const std::string& path, const SavedScaler* scaler) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw data_error(data_error::kind::missing_file, "cannot write model file: " + path);
    std::fprintf(f, "mwh-mlp 1\nlayers");
    for (std::size_t s : state.spec.layer_sizes) std::fprintf(f, " %zu", s);
    std::fputc('\n', f);
    for (std::size_t l = 0; l < state.weights.size(); ++l) {
        const std::string wn = "W" + std::to_string(l);
        const std::string bn = "b" + std::to_string(l);
        write_matrix(f, wn.c_str(), state.weights[l]);
        write_matrix(f, bn.c_str(), state.biases[l]);
    }
    if (scaler) {
        std::fprintf(f, "scaler %zu\n", scaler->col_min.size());
        for (std::size_t j = 0; j < scaler->col_min.size(); ++j)
            std::fprintf(f, j ? " %.17g" : "%.17g", scaler->col_min[j]);
        std::fputc('\n', f);
        for (std::size_t j = 0; j < scaler->col_range.size(); ++j)
            std::fprintf(f, j ? " %.17g" : "%.17g", scaler->col_range[j]);
        std::fputc('\n', f);
    }
    std::fclose(f);
}

MlpState load(const std::string& path, SavedScaler* scaler_out) {
    std::ifstream in(path);
    if (!in) throw data_error(data_error::kind::missing_file, "cannot open model file: " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "mwh-mlp" || version != 1)
        throw data_error(data_error::kind::bad_format, "not a model file: " + path);

    std::string tok;
    in >> tok;
    if (tok != "layers") throw data_error(data_error::kind::bad_format, "missing layers header");
    MlpState state;
    {
        std::string rest;
        std::getline(in, rest);
        std::istringstream ls(rest);
        std::size_t s;
        while (ls >> s) state.spec.layer_sizes.push_back(s);
    }
    state.spec.validate();

    for (std::size_t l = 0; l + 1 < state.spec.layer_sizes.size(); ++l) {
        for (int part = 0; part < 2; ++part) {
            std::string kw, name;
            std::size_t r, c;
            if (!(in >> kw >> name >> r >> c) || kw != "tensor")
                throw data_error(data_error::kind::bad_format, "truncated model file: " + path);
            Matrix m(r, c);
            for (std::size_t i = 0; i < m.size(); ++i)
                if (!(in >> m.data()[i]))
                    throw data_error(data_error::kind::bad_format, "truncated tensor " + name);
            if (part == 0)
                state.weights.push_back(std::move(m));
            else
                state.biases.push_back(std::move(m));
        }
    }

    if (scaler_out) {
        scaler_out->col_min.clear();
        scaler_out->col_range.clear();
        std::string kw;
        if (in >> kw && kw == "scaler") {
            std::size_t d = 0;
            in >> d;
            scaler_out->col_min.resize(d);
            scaler_out->col_range.resize(d);
            for (auto& v : scaler_out->col_min) in >> v;
            for (auto& v : scaler_out->col_range) in >> v;
            if (!in) throw data_error(data_error::kind::bad_format, "truncated scaler block");
        }
    }
    return state;
}

} // namespace model

} // namespace mwh
