#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace moss::nn {

// Row-major dense matrix of doubles. Vectors are 1xN or Nx1 matrices.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
  Mat(int r, int c, std::vector<double> d) : rows(r), cols(c), data(std::move(d)) {
    if (data.size() != static_cast<std::size_t>(r) * c)
      throw std::invalid_argument("Mat: data size does not match shape");
  }

  static Mat zeros(int r, int c) { return Mat(r, c); }
  static Mat full(int r, int c, double v) {
    Mat m(r, c);
    for (auto& x : m.data) x = v;
    return m;
  }
  static Mat row(std::vector<double> d) {
    const int n = static_cast<int>(d.size());
    return Mat(1, n, std::move(d));
  }

  std::size_t size() const { return data.size(); }
  double* ptr() { return data.data(); }
  const double* ptr() const { return data.data(); }
  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  double* row_ptr(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
  const double* row_ptr(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
  void fill(double v) { for (auto& x : data) x = v; }
  void zero() { fill(0.0); }
};

std::string shape_str(const Mat& m);
void require_shape(const Mat& m, int r, int c, const char* what);

// Plain (gradient-free) operations used by evaluation paths and by the tape.
Mat matmul(const Mat& a, const Mat& b);                  // (m,k)x(k,n)
void matmul_acc_into(const Mat& a, const Mat& b, Mat& c);
Mat add(const Mat& a, const Mat& b);
Mat sub(const Mat& a, const Mat& b);
Mat mul(const Mat& a, const Mat& b);
Mat scale(const Mat& a, double c);
Mat add_rowvec(const Mat& a, const Mat& bias);           // bias is 1 x cols
Mat concat_cols(const Mat& a, const Mat& b);
Mat slice_cols(const Mat& a, int c0, int c1);            // [c0, c1)
Mat map(const Mat& a, double (*f)(double));
Mat tanh_m(const Mat& a);
Mat sigmoid_m(const Mat& a);
Mat relu_m(const Mat& a);
Mat exp_m(const Mat& a);
Mat clamp_m(const Mat& a, double lo, double hi);
double sum(const Mat& a);
double mean(const Mat& a);
double dot_flat(const Mat& a, const Mat& b);
double max_abs_diff(const Mat& a, const Mat& b);

}  // namespace moss::nn
