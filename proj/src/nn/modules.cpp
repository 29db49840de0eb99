#include "moss/nn/modules.hpp"

#include <cmath>

#include "moss/kernels/kernels.hpp"

namespace moss::nn {

namespace k = moss::kernels;

void uniform_init(Parameter& p, double bound, core::RandomStream& rng) {
  for (auto& x : p.value.data) x = rng.uniform(-bound, bound);
  p.grad.zero();
  p.adam_m.zero();
  p.adam_v.zero();
}

void Linear::init(core::RandomStream& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(W.value.rows));
  uniform_init(W, bound, rng);
  uniform_init(b, bound, rng);
}

Var Linear::forward(Graph& g, Var x) const {
  auto& self = const_cast<Linear&>(*this);
  return g.add_rowvec(g.matmul(x, g.leaf(self.W)), g.leaf(self.b));
}

Mat Linear::forward(const Mat& x) const { return add_rowvec(matmul(x, W.value), b.value); }

void Linear::collect(std::vector<Parameter*>& out) {
  out.push_back(&W);
  out.push_back(&b);
}

Mlp::Mlp(const std::string& name, const std::vector<int>& dims, Activation a) : act(a) {
  for (std::size_t i = 0; i + 1 < dims.size(); ++i)
    layers.emplace_back(name + ".l" + std::to_string(i), dims[i], dims[i + 1]);
}

void Mlp::init(core::RandomStream& rng) {
  for (auto& l : layers) l.init(rng);
}

Var Mlp::forward(Graph& g, Var x) const {
  for (std::size_t i = 0; i < layers.size(); ++i) {
    x = layers[i].forward(g, x);
    if (i + 1 < layers.size())
      x = act == Activation::relu ? g.relu(x) : g.tanh_(x);
  }
  return x;
}

Mat Mlp::forward(const Mat& x) const {
  Mat h = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    h = layers[i].forward(h);
    if (i + 1 < layers.size()) h = act == Activation::relu ? relu_m(h) : tanh_m(h);
  }
  return h;
}

void Mlp::collect(std::vector<Parameter*>& out) {
  for (auto& l : layers) l.collect(out);
}

GruCell::GruCell(const std::string& name, int in_dim, int hidden_dim)
    : Wi(name + ".Wi", in_dim, 3 * hidden_dim),
      Wh(name + ".Wh", hidden_dim, 3 * hidden_dim),
      bi(name + ".bi", 1, 3 * hidden_dim),
      bh(name + ".bh", 1, 3 * hidden_dim),
      in(in_dim),
      hidden(hidden_dim) {}

void GruCell::init(core::RandomStream& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  uniform_init(Wi, bound, rng);
  uniform_init(Wh, bound, rng);
  uniform_init(bi, bound, rng);
  uniform_init(bh, bound, rng);
}

Var GruCell::step(Graph& g, Var x, Var h) const {
  auto& self = const_cast<GruCell&>(*this);
  Var gi = g.add_rowvec(g.matmul(x, g.leaf(self.Wi)), g.leaf(self.bi));
  Var gh = g.add_rowvec(g.matmul(h, g.leaf(self.Wh)), g.leaf(self.bh));
  Var r = g.sigmoid(g.add(g.slice_cols(gi, 0, hidden), g.slice_cols(gh, 0, hidden)));
  Var z = g.sigmoid(g.add(g.slice_cols(gi, hidden, 2 * hidden),
                          g.slice_cols(gh, hidden, 2 * hidden)));
  Var n = g.tanh_(g.add(g.slice_cols(gi, 2 * hidden, 3 * hidden),
                        g.mul(r, g.slice_cols(gh, 2 * hidden, 3 * hidden))));
  // h' = n + z * (h - n)
  return g.add(n, g.mul(z, g.sub(h, n)));
}

Mat GruCell::step(const Mat& x, const Mat& h) const {
  Mat gi = add_rowvec(matmul(x, Wi.value), bi.value);
  Mat gh = add_rowvec(matmul(h, Wh.value), bh.value);
  Mat r = sigmoid_m(add(slice_cols(gi, 0, hidden), slice_cols(gh, 0, hidden)));
  Mat z = sigmoid_m(add(slice_cols(gi, hidden, 2 * hidden), slice_cols(gh, hidden, 2 * hidden)));
  Mat n = tanh_m(add(slice_cols(gi, 2 * hidden, 3 * hidden),
                     mul(r, slice_cols(gh, 2 * hidden, 3 * hidden))));
  Mat out(h.rows, h.cols);
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data[i] = n.data[i] + z.data[i] * (h.data[i] - n.data[i]);
  return out;
}

Mat GruCell::step_masked(const Mat& x, const Mat& h,
                         const std::vector<unsigned char>& mask) const {
  Mat next = step(x, h);
  for (int i = 0; i < next.rows; ++i)
    if (!mask[i])
      std::copy(h.row_ptr(i), h.row_ptr(i) + h.cols, next.row_ptr(i));
  return next;
}

void GruCell::collect(std::vector<Parameter*>& out) {
  out.push_back(&Wi);
  out.push_back(&Wh);
  out.push_back(&bi);
  out.push_back(&bh);
}

void Adam::add(std::vector<Parameter*> ps) {
  params.insert(params.end(), ps.begin(), ps.end());
}

void Adam::zero_grad() {
  for (Parameter* p : params) p->grad.zero();
}

double Adam::grad_norm() const {
  double sq = 0.0;
  for (const Parameter* p : params) sq += dot_flat(p->grad, p->grad);
  return std::sqrt(sq);
}

double Adam::clip_grad_norm(double max_norm) {
  const double norm = grad_norm();
  if (norm > max_norm && norm > 0.0) {
    const double s = max_norm / norm;
    for (Parameter* p : params)
      k::ops().scale(p->grad.ptr(), s, p->grad.ptr(), p->grad.size());
  }
  return norm;
}

void Adam::step() {
  ++t;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  for (Parameter* p : params) {
    double* w = p->value.ptr();
    const double* g = p->grad.ptr();
    double* m = p->adam_m.ptr();
    double* v = p->adam_v.ptr();
    const std::size_t n = p->size();
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
      v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      w[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
}

}  // namespace moss::nn
