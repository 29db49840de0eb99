#include "moss/nn/mat.hpp"

#include <algorithm>
#include <cmath>

#include "moss/kernels/kernels.hpp"

namespace moss::nn {

namespace k = moss::kernels;

std::string shape_str(const Mat& m) {
  return "(" + std::to_string(m.rows) + "x" + std::to_string(m.cols) + ")";
}

void require_shape(const Mat& m, int r, int c, const char* what) {
  if (m.rows != r || m.cols != c)
    throw std::invalid_argument(std::string(what) + ": expected (" + std::to_string(r) +
                                "x" + std::to_string(c) + "), got " + shape_str(m));
}

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols != b.rows)
    throw std::invalid_argument("matmul: inner dims " + shape_str(a) + " vs " + shape_str(b));
  Mat c(a.rows, b.cols);
  k::ops().matmul_acc(a.ptr(), b.ptr(), c.ptr(), a.rows, a.cols, b.cols);
  return c;
}

void matmul_acc_into(const Mat& a, const Mat& b, Mat& c) {
  if (a.cols != b.rows || c.rows != a.rows || c.cols != b.cols)
    throw std::invalid_argument("matmul_acc_into: shape mismatch");
  k::ops().matmul_acc(a.ptr(), b.ptr(), c.ptr(), a.rows, a.cols, b.cols);
}

Mat add(const Mat& a, const Mat& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("add: shape mismatch");
  Mat out(a.rows, a.cols);
  k::ops().add(a.ptr(), b.ptr(), out.ptr(), a.size());
  return out;
}

Mat sub(const Mat& a, const Mat& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("sub: shape mismatch");
  Mat out(a.rows, a.cols);
  k::ops().sub(a.ptr(), b.ptr(), out.ptr(), a.size());
  return out;
}

Mat mul(const Mat& a, const Mat& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("mul: shape mismatch");
  Mat out(a.rows, a.cols);
  k::ops().mul(a.ptr(), b.ptr(), out.ptr(), a.size());
  return out;
}

Mat scale(const Mat& a, double c) {
  Mat out(a.rows, a.cols);
  k::ops().scale(a.ptr(), c, out.ptr(), a.size());
  return out;
}

Mat add_rowvec(const Mat& a, const Mat& bias) {
  if (bias.rows != 1 || bias.cols != a.cols)
    throw std::invalid_argument("add_rowvec: bias " + shape_str(bias) + " vs " + shape_str(a));
  Mat out(a.rows, a.cols);
  for (int i = 0; i < a.rows; ++i)
    k::ops().add(a.row_ptr(i), bias.ptr(), out.row_ptr(i), a.cols);
  return out;
}

Mat concat_cols(const Mat& a, const Mat& b) {
  if (a.rows != b.rows) throw std::invalid_argument("concat_cols: row mismatch");
  Mat out(a.rows, a.cols + b.cols);
  for (int i = 0; i < a.rows; ++i) {
    std::copy(a.row_ptr(i), a.row_ptr(i) + a.cols, out.row_ptr(i));
    std::copy(b.row_ptr(i), b.row_ptr(i) + b.cols, out.row_ptr(i) + a.cols);
  }
  return out;
}

Mat slice_cols(const Mat& a, int c0, int c1) {
  if (c0 < 0 || c1 > a.cols || c0 >= c1)
    throw std::invalid_argument("slice_cols: bad range");
  Mat out(a.rows, c1 - c0);
  for (int i = 0; i < a.rows; ++i)
    std::copy(a.row_ptr(i) + c0, a.row_ptr(i) + c1, out.row_ptr(i));
  return out;
}

Mat map(const Mat& a, double (*f)(double)) {
  Mat out(a.rows, a.cols);
  for (std::size_t i = 0; i < a.size(); ++i) out.data[i] = f(a.data[i]);
  return out;
}

Mat tanh_m(const Mat& a) { return map(a, [](double x) { return std::tanh(x); }); }

Mat sigmoid_m(const Mat& a) {
  return map(a, [](double x) { return 1.0 / (1.0 + std::exp(-x)); });
}

Mat relu_m(const Mat& a) { return map(a, [](double x) { return x > 0.0 ? x : 0.0; }); }

Mat exp_m(const Mat& a) { return map(a, [](double x) { return std::exp(x); }); }

Mat clamp_m(const Mat& a, double lo, double hi) {
  Mat out(a.rows, a.cols);
  for (std::size_t i = 0; i < a.size(); ++i) out.data[i] = std::clamp(a.data[i], lo, hi);
  return out;
}

double sum(const Mat& a) { return k::ops().sum(a.ptr(), a.size()); }

double mean(const Mat& a) { return a.size() == 0 ? 0.0 : sum(a) / static_cast<double>(a.size()); }

double dot_flat(const Mat& a, const Mat& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot_flat: size mismatch");
  return k::ops().dot(a.ptr(), b.ptr(), a.size());
}

double max_abs_diff(const Mat& a, const Mat& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

}  // namespace moss::nn
