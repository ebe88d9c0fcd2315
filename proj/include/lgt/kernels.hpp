// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "lgt/matrix.hpp"

namespace lgt::kernels {

// OpenMP-parallel dense kernels. Each output element is produced by exactly
// one loop iteration with the same inner summation order as the serial
// reference, so results are bit-identical to kernels::serial regardless of
// thread count.

/// C = A (n×k) * B (k×m)
Matrix matmul(const Matrix& a, const Matrix& b);

/// C = A^T (k×n)^T * B (k×m)  ->  n×m. A is stored k×n.
Matrix matmul_transpose_a(const Matrix& a, const Matrix& b);

/// C = A (n×k) * B^T where B is stored m×k  ->  n×m.
Matrix matmul_transpose_b(const Matrix& a, const Matrix& b);

/// Adds bias[j] to every element of column j, in place.
void add_bias_rows(Matrix& m, const std::vector<double>& bias);

/// Column sums of m (length m.cols).
std::vector<double> col_sums(const Matrix& m);

/// Elementwise activations and their input-gradients (grad *= act'(pre)).
void relu_inplace(Matrix& m);
void tanh_inplace(Matrix& m);
void relu_backward_inplace(Matrix& grad, const Matrix& pre);
void tanh_backward_inplace(Matrix& grad, const Matrix& post);

/// Row-wise numerically stable softmax.
Matrix softmax_rows(const Matrix& logits);

namespace serial {

// Reference implementations kept for testing; the parallel kernels above must
// match these byte for byte.

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_transpose_a(const Matrix& a, const Matrix& b);
Matrix matmul_transpose_b(const Matrix& a, const Matrix& b);
void add_bias_rows(Matrix& m, const std::vector<double>& bias);
std::vector<double> col_sums(const Matrix& m);
void relu_inplace(Matrix& m);
void tanh_inplace(Matrix& m);
void relu_backward_inplace(Matrix& grad, const Matrix& pre);
void tanh_backward_inplace(Matrix& grad, const Matrix& post);
Matrix softmax_rows(const Matrix& logits);

}  // namespace serial

}  // namespace lgt::kernels
