// SPDX-License-Identifier: Apache-2.0
#include "lgt/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace lgt::kernels {

static void check_inner(int a, int b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string("kernel shape mismatch in ") + what);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    check_inner(a.cols, b.rows, "matmul");
    Matrix c(a.rows, b.cols);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = a.row_ptr(i);
        double* crow = c.row_ptr(i);
        for (int k = 0; k < a.cols; ++k) {
            const double av = arow[k];
            const double* brow = b.row_ptr(k);
            for (int j = 0; j < b.cols; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

Matrix matmul_transpose_a(const Matrix& a, const Matrix& b) {
    check_inner(a.rows, b.rows, "matmul_transpose_a");
    Matrix c(a.cols, b.cols);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < a.cols; ++i) {
        double* crow = c.row_ptr(i);
        for (int s = 0; s < a.rows; ++s) {
            const double av = a(s, i);
            const double* brow = b.row_ptr(s);
            for (int j = 0; j < b.cols; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

Matrix matmul_transpose_b(const Matrix& a, const Matrix& b) {
    check_inner(a.cols, b.cols, "matmul_transpose_b");
    Matrix c(a.rows, b.rows);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = a.row_ptr(i);
        double* crow = c.row_ptr(i);
        for (int j = 0; j < b.rows; ++j) {
            const double* brow = b.row_ptr(j);
            double acc = 0.0;
            for (int k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
            crow[j] = acc;
        }
    }
    return c;
}

void add_bias_rows(Matrix& m, const std::vector<double>& bias) {
    check_inner(m.cols, static_cast<int>(bias.size()), "add_bias_rows");
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m.rows; ++i) {
        double* row = m.row_ptr(i);
        for (int j = 0; j < m.cols; ++j) row[j] += bias[j];
    }
}

std::vector<double> col_sums(const Matrix& m) {
    std::vector<double> sums(static_cast<std::size_t>(m.cols), 0.0);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m.cols; ++j) {
        double acc = 0.0;
        for (int i = 0; i < m.rows; ++i) acc += m(i, j);
        sums[j] = acc;
    }
    return sums;
}

void relu_inplace(Matrix& m) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m.rows; ++i) {
        double* row = m.row_ptr(i);
        for (int j = 0; j < m.cols; ++j) row[j] = row[j] > 0.0 ? row[j] : 0.0;
    }
}

void tanh_inplace(Matrix& m) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m.rows; ++i) {
        double* row = m.row_ptr(i);
        for (int j = 0; j < m.cols; ++j) row[j] = std::tanh(row[j]);
    }
}

void relu_backward_inplace(Matrix& grad, const Matrix& pre) {
    check_inner(grad.rows, pre.rows, "relu_backward");
    check_inner(grad.cols, pre.cols, "relu_backward");
#pragma omp parallel for schedule(static)
    for (int i = 0; i < grad.rows; ++i) {
        double* grow = grad.row_ptr(i);
        const double* prow = pre.row_ptr(i);
        for (int j = 0; j < grad.cols; ++j)
            if (prow[j] <= 0.0) grow[j] = 0.0;
    }
}

void tanh_backward_inplace(Matrix& grad, const Matrix& post) {
    check_inner(grad.rows, post.rows, "tanh_backward");
    check_inner(grad.cols, post.cols, "tanh_backward");
#pragma omp parallel for schedule(static)
    for (int i = 0; i < grad.rows; ++i) {
        double* grow = grad.row_ptr(i);
        const double* prow = post.row_ptr(i);
        for (int j = 0; j < grad.cols; ++j) grow[j] *= 1.0 - prow[j] * prow[j];
    }
}

Matrix softmax_rows(const Matrix& logits) {
    Matrix p(logits.rows, logits.cols);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < logits.rows; ++i) {
        const double* z = logits.row_ptr(i);
        double* out = p.row_ptr(i);
        double mx = z[0];
        for (int j = 1; j < logits.cols; ++j) mx = z[j] > mx ? z[j] : mx;
        double denom = 0.0;
        for (int j = 0; j < logits.cols; ++j) {
            out[j] = std::exp(z[j] - mx);
            denom += out[j];
        }
        for (int j = 0; j < logits.cols; ++j) out[j] /= denom;
    }
    return p;
}

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b) {
    check_inner(a.cols, b.rows, "matmul");
    Matrix c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = a.row_ptr(i);
        double* crow = c.row_ptr(i);
        for (int k = 0; k < a.cols; ++k) {
            const double av = arow[k];
            const double* brow = b.row_ptr(k);
            for (int j = 0; j < b.cols; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

Matrix matmul_transpose_a(const Matrix& a, const Matrix& b) {
    check_inner(a.rows, b.rows, "matmul_transpose_a");
    Matrix c(a.cols, b.cols);
    for (int i = 0; i < a.cols; ++i) {
        double* crow = c.row_ptr(i);
        for (int s = 0; s < a.rows; ++s) {
            const double av = a(s, i);
            const double* brow = b.row_ptr(s);
            for (int j = 0; j < b.cols; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

Matrix matmul_transpose_b(const Matrix& a, const Matrix& b) {
    check_inner(a.cols, b.cols, "matmul_transpose_b");
    Matrix c(a.rows, b.rows);
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = a.row_ptr(i);
        double* crow = c.row_ptr(i);
        for (int j = 0; j < b.rows; ++j) {
            const double* brow = b.row_ptr(j);
            double acc = 0.0;
            for (int k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
            crow[j] = acc;
        }
    }
    return c;
}

void add_bias_rows(Matrix& m, const std::vector<double>& bias) {
    check_inner(m.cols, static_cast<int>(bias.size()), "add_bias_rows");
    for (int i = 0; i < m.rows; ++i) {
        double* row = m.row_ptr(i);
        for (int j = 0; j < m.cols; ++j) row[j] += bias[j];
    }
}

std::vector<double> col_sums(const Matrix& m) {
    std::vector<double> sums(static_cast<std::size_t>(m.cols), 0.0);
    for (int j = 0; j < m.cols; ++j) {
        double acc = 0.0;
        for (int i = 0; i < m.rows; ++i) acc += m(i, j);
        sums[j] = acc;
    }
    return sums;
}

void relu_inplace(Matrix& m) {
    for (auto& x : m.data) x = x > 0.0 ? x : 0.0;
}

void tanh_inplace(Matrix& m) {
    for (auto& x : m.data) x = std::tanh(x);
}

void relu_backward_inplace(Matrix& grad, const Matrix& pre) {
    for (std::size_t i = 0; i < grad.data.size(); ++i)
        if (pre.data[i] <= 0.0) grad.data[i] = 0.0;
}

void tanh_backward_inplace(Matrix& grad, const Matrix& post) {
    for (std::size_t i = 0; i < grad.data.size(); ++i)
        grad.data[i] *= 1.0 - post.data[i] * post.data[i];
}

Matrix softmax_rows(const Matrix& logits) {
    Matrix p(logits.rows, logits.cols);
    for (int i = 0; i < logits.rows; ++i) {
        const double* z = logits.row_ptr(i);
        double* out = p.row_ptr(i);
        double mx = z[0];
        for (int j = 1; j < logits.cols; ++j) mx = z[j] > mx ? z[j] : mx;
        double denom = 0.0;
        for (int j = 0; j < logits.cols; ++j) {
            out[j] = std::exp(z[j] - mx);
            denom += out[j];
        }
        for (int j = 0; j < logits.cols; ++j) out[j] /= denom;
    }
    return p;
}

}  // namespace serial

}  // namespace lgt::kernels
