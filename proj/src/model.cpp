// SPDX-License-Identifier: Apache-2.0
#include "lgt/model.hpp"

#include <cmath>
#include <stdexcept>

#include "lgt/kernels.hpp"

namespace lgt {

std::int64_t MlpModel::parameter_count() const {
    std::int64_t count = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        count += static_cast<std::int64_t>(weights[l].rows) * weights[l].cols;
        count += static_cast<std::int64_t>(biases[l].size());
    }
    return count;
}

MlpModel build_model(const ArchSpec& arch, int input_dim, int output_dim, SeededRng& rng) {
    if (input_dim < 1 || output_dim < 1)
        throw std::invalid_argument("build_model: dims must be >= 1");
    for (int w : arch.layer_widths)
        if (w < 1) throw std::invalid_argument("build_model: layer widths must be >= 1");

    MlpModel m;
    m.arch = arch;
    m.input_dim = input_dim;
    m.output_dim = output_dim;

    std::vector<int> dims;
    dims.push_back(input_dim);
    for (int w : arch.layer_widths) dims.push_back(w);
    dims.push_back(output_dim);

    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const int fan_in = dims[l];
        const int fan_out = dims[l + 1];
        const double bound = std::sqrt(6.0 / fan_in);
        Matrix w(fan_in, fan_out);
        for (auto& x : w.data) x = rng.uniform(-bound, bound);
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(static_cast<std::size_t>(fan_out), 0.0);
    }
    return m;
}

Matrix forward(const MlpModel& model, const Matrix& x, bool training, SeededRng* rng,
               ForwardCache* cache) {
    if (x.cols != model.input_dim)
        throw std::invalid_argument("forward: input width does not match model input_dim");
    if (training && rng == nullptr && model.arch.dropout > 0.0)
        throw std::invalid_argument("forward: training with dropout requires an rng");

    const int n_layers = model.n_layers();
    Matrix h = x;
    if (cache) {
        *cache = ForwardCache{};
        cache->inputs.reserve(static_cast<std::size_t>(n_layers));
    }

    for (int l = 0; l < n_layers; ++l) {
        if (cache) cache->inputs.push_back(h);
        Matrix z = kernels::matmul(h, model.weights[static_cast<std::size_t>(l)]);
        kernels::add_bias_rows(z, model.biases[static_cast<std::size_t>(l)]);

        const bool hidden = l + 1 < n_layers;
        if (!hidden) {
            h = std::move(z);  // linear output layer
            break;
        }

        if (cache) cache->pre_act.push_back(z);
        if (model.arch.activation == Activation::relu)
            kernels::relu_inplace(z);
        else
            kernels::tanh_inplace(z);

        if (training && model.arch.dropout > 0.0) {
            const double keep = 1.0 - model.arch.dropout;
            Matrix mask(z.rows, z.cols);
            for (auto& v : mask.data) v = rng->uniform() < keep ? 1.0 / keep : 0.0;
            for (std::size_t i = 0; i < z.data.size(); ++i) z.data[i] *= mask.data[i];
            if (cache) cache->dropout_mask.push_back(std::move(mask));
        } else if (cache) {
            cache->dropout_mask.emplace_back();  // placeholder, keeps indices aligned
        }
        if (cache) cache->post_act.push_back(z);
        h = std::move(z);
    }
    return h;
}

Grads backward(const MlpModel& model, const ForwardCache& cache, const Matrix& grad_out) {
    const int n_layers = model.n_layers();
    if (static_cast<int>(cache.inputs.size()) != n_layers)
        throw std::invalid_argument("backward: cache does not match model");

    Grads g;
    g.weights.resize(static_cast<std::size_t>(n_layers));
    g.biases.resize(static_cast<std::size_t>(n_layers));

    Matrix delta = grad_out;
    for (int l = n_layers - 1; l >= 0; --l) {
        const auto lu = static_cast<std::size_t>(l);
        g.weights[lu] = kernels::matmul_transpose_a(cache.inputs[lu], delta);
        g.biases[lu] = kernels::col_sums(delta);
        if (l == 0) break;

        Matrix prev = kernels::matmul_transpose_b(delta, model.weights[lu]);
        // through dropout and the activation of hidden layer l-1
        const auto hu = static_cast<std::size_t>(l - 1);
        if (hu < cache.dropout_mask.size() && cache.dropout_mask[hu].size() > 0)
            for (std::size_t i = 0; i < prev.data.size(); ++i)
                prev.data[i] *= cache.dropout_mask[hu].data[i];
        if (model.arch.activation == Activation::relu)
            kernels::relu_backward_inplace(prev, cache.pre_act[hu]);
        else {
            // tanh'(z) from the post-activation value; recompute without dropout scaling
            Matrix post = cache.pre_act[hu];
            kernels::tanh_inplace(post);
            kernels::tanh_backward_inplace(prev, post);
        }
        delta = std::move(prev);
    }
    return g;
}

}  // namespace lgt
