// SPDX-License-Identifier: Apache-2.0
#include "lgt/dataset.hpp"

#include <cstring>
#include <stdexcept>

namespace lgt {

std::string to_string(TaskType t) {
    return t == TaskType::classification ? "classification" : "regression";
}

TaskType task_from_string(const std::string& s) {
    if (s == "classification") return TaskType::classification;
    if (s == "regression") return TaskType::regression;
    throw std::invalid_argument("unknown task type: " + s);
}

static std::uint64_t fnv1a_bytes(const void* p, std::size_t n, std::uint64_t h) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a(const std::string& s) {
    return fnv1a_bytes(s.data(), s.size(), 0xcbf29ce484222325ULL);
}

std::uint64_t dataset_hash(const Dataset& d) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const std::int64_t dims[4] = {d.features.rows, d.features.cols,
                                  static_cast<std::int64_t>(d.task), d.n_classes};
    h = fnv1a_bytes(dims, sizeof(dims), h);
    h = fnv1a_bytes(d.features.data.data(), d.features.data.size() * sizeof(double), h);
    h = fnv1a_bytes(d.targets.data(), d.targets.size() * sizeof(double), h);
    return h;
}

std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

}  // namespace lgt
