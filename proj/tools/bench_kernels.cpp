// SPDX-License-Identifier: Apache-2.0
//
// Times the OpenMP kernels against the serial reference and checks the
// results stay bit-identical while doing so.
#include <chrono>
#include <cstdio>
#include <functional>

#include "lgt/kernels.hpp"
#include "lgt/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using lgt::Matrix;

namespace {

Matrix random_matrix(int r, int c, lgt::SeededRng& rng) {
    Matrix m(r, c);
    for (auto& v : m.data) v = rng.uniform(-1.0, 1.0);
    return m;
}

double time_ms(const std::function<void()>& fn, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("openmp not enabled; parallel kernels run serially\n");
#endif

    lgt::SeededRng rng(7);
    const int reps = 5;
    std::printf("%-22s %8s %12s %12s %8s %s\n", "kernel", "size", "serial ms", "omp ms", "speedup",
                "bit-identical");

    for (int n : {128, 256, 512}) {
        Matrix a = random_matrix(n, n, rng);
        Matrix b = random_matrix(n, n, rng);

        Matrix serial_out, omp_out;
        const double ts = time_ms([&] { serial_out = lgt::kernels::serial::matmul(a, b); }, reps);
        const double tp = time_ms([&] { omp_out = lgt::kernels::matmul(a, b); }, reps);
        std::printf("%-22s %8d %12.3f %12.3f %8.2f %s\n", "matmul", n, ts, tp, ts / tp,
                    serial_out == omp_out ? "yes" : "NO");

        const double ts_a =
            time_ms([&] { serial_out = lgt::kernels::serial::matmul_transpose_a(a, b); }, reps);
        const double tp_a = time_ms([&] { omp_out = lgt::kernels::matmul_transpose_a(a, b); }, reps);
        std::printf("%-22s %8d %12.3f %12.3f %8.2f %s\n", "matmul_transpose_a", n, ts_a, tp_a,
                    ts_a / tp_a, serial_out == omp_out ? "yes" : "NO");

        const double ts_b =
            time_ms([&] { serial_out = lgt::kernels::serial::matmul_transpose_b(a, b); }, reps);
        const double tp_b = time_ms([&] { omp_out = lgt::kernels::matmul_transpose_b(a, b); }, reps);
        std::printf("%-22s %8d %12.3f %12.3f %8.2f %s\n", "matmul_transpose_b", n, ts_b, tp_b,
                    ts_b / tp_b, serial_out == omp_out ? "yes" : "NO");

        const double ts_s = time_ms([&] { serial_out = lgt::kernels::serial::softmax_rows(a); }, reps);
        const double tp_s = time_ms([&] { omp_out = lgt::kernels::softmax_rows(a); }, reps);
        std::printf("%-22s %8d %12.3f %12.3f %8.2f %s\n", "softmax_rows", n, ts_s, tp_s, ts_s / tp_s,
                    serial_out == omp_out ? "yes" : "NO");
    }
    return 0;
}
