// SPDX-License-Identifier: Apache-2.0
#include "lgt/augment.hpp"

#include <cmath>
#include <stdexcept>

namespace lgt {

static double param_or(const std::map<std::string, double>& params, const std::string& name) {
    auto it = params.find(name);
    return it != params.end() ? it->second : default_method_param(name);
}

static void require_image(AugmentMethod m, const Dataset& d) {
    if (!d.is_image_shaped())
        throw std::invalid_argument("augment: method '" + to_string(m) +
                                    "' requires image-shaped features but the dataset is tabular");
}

static Dataset copy_meta(const Dataset& d, int n_rows) {
    Dataset out = d;
    out.features = Matrix(n_rows, d.features.cols);
    out.targets.clear();
    out.targets.reserve(static_cast<std::size_t>(n_rows));
    return out;
}

// Appends `factor` perturbed copies of every sample (small Gaussian jitter).
static Dataset duplicate(const Dataset& d, int factor, SeededRng& rng) {
    const int n = d.n_samples();
    Dataset out = copy_meta(d, n * (factor + 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d.features.cols; ++j) out.features(i, j) = d.features(i, j);
        out.targets.push_back(d.targets[static_cast<std::size_t>(i)]);
    }
    constexpr double jitter = 0.01;
    for (int c = 0; c < factor; ++c) {
        for (int i = 0; i < n; ++i) {
            const int r = n * (c + 1) + i;
            for (int j = 0; j < d.features.cols; ++j)
                out.features(r, j) = d.features(i, j) + jitter * rng.normal();
            out.targets.push_back(d.targets[static_cast<std::size_t>(i)]);
        }
    }
    return out;
}

Dataset augment(AugmentMethod method, const Dataset& data,
                const std::map<std::string, double>& params, SeededRng& rng) {
    switch (method) {
        case AugmentMethod::none:
            return data;

        case AugmentMethod::duplication: {
            const int factor = std::max(1, static_cast<int>(param_or(params, "duplication_factor")));
            return duplicate(data, factor, rng);
        }

        case AugmentMethod::noise: {
            const double sigma = param_or(params, "noise_sigma");
            Dataset out = data;
            if (sigma > 0.0)
                for (auto& v : out.features.data) v += sigma * rng.normal();
            return out;
        }

        case AugmentMethod::scale: {
            const double jitter = param_or(params, "scale_jitter");
            Dataset out = data;
            for (int i = 0; i < out.n_samples(); ++i) {
                const double s = 1.0 + rng.uniform(-jitter, jitter);
                for (int j = 0; j < out.features.cols; ++j) out.features(i, j) *= s;
            }
            return out;
        }

        case AugmentMethod::flip: {
            require_image(method, data);
            Dataset out = data;
            const int h = data.image_height;
            const int w = data.image_width;
            for (int i = 0; i < out.n_samples(); ++i)
                for (int r = 0; r < h; ++r)
                    for (int c = 0; c < w / 2; ++c)
                        std::swap(out.features(i, r * w + c), out.features(i, r * w + (w - 1 - c)));
            return out;
        }

        case AugmentMethod::shift: {
            require_image(method, data);
            const double frac = param_or(params, "shift_fraction");
            Dataset out = data;
            const int h = data.image_height;
            const int w = data.image_width;
            for (int i = 0; i < out.n_samples(); ++i) {
                const int dx = static_cast<int>(std::round(rng.uniform(-frac, frac) * w));
                const int dy = static_cast<int>(std::round(rng.uniform(-frac, frac) * h));
                for (int r = 0; r < h; ++r)
                    for (int c = 0; c < w; ++c) {
                        const int sr = r - dy;
                        const int sc = c - dx;
                        out.features(i, r * w + c) =
                            (sr >= 0 && sr < h && sc >= 0 && sc < w) ? data.features(i, sr * w + sc) : 0.0;
                    }
            }
            return out;
        }

        case AugmentMethod::rotation: {
            require_image(method, data);
            const double max_deg = param_or(params, "rotation_degrees");
            Dataset out = data;
            const int h = data.image_height;
            const int w = data.image_width;
            const double cy = (h - 1) / 2.0;
            const double cx = (w - 1) / 2.0;
            for (int i = 0; i < out.n_samples(); ++i) {
                const double theta = rng.uniform(-max_deg, max_deg) * 3.14159265358979323846 / 180.0;
                const double ct = std::cos(theta), st = std::sin(theta);
                for (int r = 0; r < h; ++r)
                    for (int c = 0; c < w; ++c) {
                        // nearest-neighbour inverse mapping about the centre
                        const double sy = ct * (r - cy) + st * (c - cx) + cy;
                        const double sx = -st * (r - cy) + ct * (c - cx) + cx;
                        const int sr = static_cast<int>(std::lround(sy));
                        const int sc = static_cast<int>(std::lround(sx));
                        out.features(i, r * w + c) =
                            (sr >= 0 && sr < h && sc >= 0 && sc < w) ? data.features(i, sr * w + sc) : 0.0;
                    }
            }
            return out;
        }

        case AugmentMethod::contrast: {
            require_image(method, data);
            const double c0 = param_or(params, "contrast_factor");
            Dataset out = data;
            for (int i = 0; i < out.n_samples(); ++i) {
                double mean = 0.0;
                for (int j = 0; j < out.features.cols; ++j) mean += out.features(i, j);
                mean /= out.features.cols;
                const double f = 1.0 + rng.uniform(-c0, c0);
                for (int j = 0; j < out.features.cols; ++j)
                    out.features(i, j) = mean + (out.features(i, j) - mean) * f;
            }
            return out;
        }
    }
    return data;
}

Dataset apply_feature_pipeline(const FeatureSpec& feature, const Dataset& data, SeededRng& rng) {
    Dataset out = data;
    for (auto m : feature.methods) out = augment(m, out, feature.method_params, rng);
    return out;
}

}  // namespace lgt
