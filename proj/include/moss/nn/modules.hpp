#pragma once

#include <memory>
#include <string>
#include <vector>

#include "moss/core/rng.hpp"
#include "moss/nn/graph.hpp"

namespace moss::nn {

// y = x W + b, with W stored (in x out) so the forward pass is one matmul.
struct Linear {
  Parameter W, b;

  Linear() = default;
  Linear(const std::string& name, int in, int out)
      : W(name + ".W", in, out), b(name + ".b", 1, out) {}

  void init(core::RandomStream& rng);  // U(-1/sqrt(in), 1/sqrt(in)), like torch
  Var forward(Graph& g, Var x) const;
  Mat forward(const Mat& x) const;
  void collect(std::vector<Parameter*>& out);
  int in_dim() const { return W.value.rows; }
  int out_dim() const { return W.value.cols; }
};

enum class Activation { relu, tanh };

// Hidden layers with a shared activation, linear output layer.
struct Mlp {
  std::vector<Linear> layers;
  Activation act = Activation::relu;

  Mlp() = default;
  Mlp(const std::string& name, const std::vector<int>& dims, Activation a);

  void init(core::RandomStream& rng);
  Var forward(Graph& g, Var x) const;
  Mat forward(const Mat& x) const;
  void collect(std::vector<Parameter*>& out);
  int in_dim() const { return layers.front().in_dim(); }
  int out_dim() const { return layers.back().out_dim(); }
};

// Gated recurrent unit, gate layout [r | z | n] along the columns.
//   r = sigmoid(x Wi_r + bi_r + h Wh_r + bh_r)
//   z = sigmoid(x Wi_z + bi_z + h Wh_z + bh_z)
//   n = tanh(x Wi_n + bi_n + r * (h Wh_n + bh_n))
//   h' = (1 - z) * n + z * h
struct GruCell {
  Parameter Wi, Wh, bi, bh;
  int in = 0, hidden = 0;

  GruCell() = default;
  GruCell(const std::string& name, int in_dim, int hidden_dim);

  void init(core::RandomStream& rng);
  Var step(Graph& g, Var x, Var h) const;
  Mat step(const Mat& x, const Mat& h) const;
  // Rows with mask[i] == 0 keep their previous hidden state. Used to batch
  // variable-length context unrolls by left-padding.
  Mat step_masked(const Mat& x, const Mat& h, const std::vector<unsigned char>& mask) const;
  void collect(std::vector<Parameter*>& out);
};

// Adam over an explicit parameter group.
struct Adam {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long long t = 0;
  std::vector<Parameter*> params;

  explicit Adam(double learning_rate = 3e-4) : lr(learning_rate) {}
  void add(std::vector<Parameter*> ps);
  void zero_grad();
  double grad_norm() const;
  // Scales gradients so the group's global L2 norm is at most max_norm.
  double clip_grad_norm(double max_norm);
  void step();
};

// Fills value with U(-bound, bound).
void uniform_init(Parameter& p, double bound, core::RandomStream& rng);

}  // namespace moss::nn
