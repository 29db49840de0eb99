#include "moss/nn/graph.hpp"

#include <algorithm>
#include <cmath>

#include "moss/kernels/kernels.hpp"

namespace moss::nn {

namespace k = moss::kernels;

const Mat& Var::val() const { return g_->value_of(*this); }

int Graph::push(Mat value, std::vector<int> parents, bool requires_grad,
                std::function<void(Graph&, int)> back) {
  Node n;
  n.value = std::move(value);
  n.parents = std::move(parents);
  n.requires_grad = requires_grad;
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

bool Graph::needs_grad(std::initializer_list<Var> vs) const {
  for (const Var& v : vs)
    if (nodes_[v.idx_].requires_grad) return true;
  return false;
}

Mat& Graph::grad_of(int idx) {
  Mat& g = grads_[idx];
  if (g.rows == 0) g = Mat(nodes_[idx].value.rows, nodes_[idx].value.cols);
  return g;
}

Var Graph::leaf(Parameter& p) {
  int idx = push(p.value, {}, true, nullptr);
  nodes_[idx].param = &p;
  return Var(this, idx);
}

Var Graph::constant(Mat v) { return Var(this, push(std::move(v), {}, false, nullptr)); }

Var Graph::matmul(Var a, Var b) {
  const Mat& av = a.val();
  const Mat& bv = b.val();
  if (av.cols != bv.rows)
    throw std::invalid_argument("graph matmul: " + shape_str(av) + " x " + shape_str(bv));
  Mat out(av.rows, bv.cols);
  k::ops().matmul_acc(av.ptr(), bv.ptr(), out.ptr(), av.rows, av.cols, bv.cols);
  const int ai = a.idx_, bi = b.idx_;
  return Var(this, push(std::move(out), {ai, bi}, needs_grad({a, b}),
                        [ai, bi](Graph& g, int self) {
                          const Mat& go = g.grads_[self];
                          const Mat& avv = g.nodes_[ai].value;
                          const Mat& bvv = g.nodes_[bi].value;
                          if (g.nodes_[ai].requires_grad) {
                            Mat& ga = g.grad_of(ai);
                            // dA += dC * B^T
                            k::ops().matmul_a_bt_acc(go.ptr(), bvv.ptr(), ga.ptr(),
                                                     go.rows, go.cols, bvv.rows);
                          }
                          if (g.nodes_[bi].requires_grad) {
                            Mat& gb = g.grad_of(bi);
                            // dB += A^T * dC
                            k::ops().matmul_at_b_acc(avv.ptr(), go.ptr(), gb.ptr(),
                                                     avv.rows, avv.cols, go.cols);
                          }
                        }));
}

Var Graph::add(Var a, Var b) {
  const Mat& av = a.val();
  const Mat& bv = b.val();
  if (!av.same_shape(bv)) throw std::invalid_argument("graph add: shape mismatch");
  Mat out(av.rows, av.cols);
  k::ops().add(av.ptr(), bv.ptr(), out.ptr(), out.size());
  const int ai = a.idx_, bi = b.idx_;
  return Var(this, push(std::move(out), {ai, bi}, needs_grad({a, b}),
                        [ai, bi](Graph& g, int self) {
                          const Mat& go = g.grads_[self];
                          if (g.nodes_[ai].requires_grad)
                            k::ops().axpy(1.0, go.ptr(), g.grad_of(ai).ptr(), go.size());
                          if (g.nodes_[bi].requires_grad)
                            k::ops().axpy(1.0, go.ptr(), g.grad_of(bi).ptr(), go.size());
                        }));
}

Var Graph::add_rowvec(Var a, Var bias) {
  const Mat& av = a.val();
  const Mat& bv = bias.val();
  if (bv.rows != 1 || bv.cols != av.cols)
    throw std::invalid_argument("graph add_rowvec: bias shape");
  Mat out(av.rows, av.cols);
  for (int i = 0; i < av.rows; ++i)
    k::ops().add(av.row_ptr(i), bv.ptr(), out.row_ptr(i), av.cols);
  const int ai = a.idx_, bi = bias.idx_;
  return Var(this, push(std::move(out), {ai, bi}, needs_grad({a, bias}),
                        [ai, bi](Graph& g, int self) {
                          const Mat& go = g.grads_[self];
                          if (g.nodes_[ai].requires_grad)
                            k::ops().axpy(1.0, go.ptr(), g.grad_of(ai).ptr(), go.size());
                          if (g.nodes_[bi].requires_grad) {
                            Mat& gb = g.grad_of(bi);
                            for (int i = 0; i < go.rows; ++i)
                              k::ops().axpy(1.0, go.row_ptr(i), gb.ptr(), go.cols);
                          }
                        }));
}

Var Graph::sub(Var a, Var b) {
  const Mat& av = a.val();
  const Mat& bv = b.val();
  if (!av.same_shape(bv)) throw std::invalid_argument("graph sub: shape mismatch");
  Mat out(av.rows, av.cols);
  k::ops().sub(av.ptr(), bv.ptr(), out.ptr(), out.size());
  const int ai = a.idx_, bi = b.idx_;
  return Var(this, push(std::move(out), {ai, bi}, needs_grad({a, b}),
                        [ai, bi](Graph& g, int self) {
                          const Mat& go = g.grads_[self];
                          if (g.nodes_[ai].requires_grad)
                            k::ops().axpy(1.0, go.ptr(), g.grad_of(ai).ptr(), go.size());
                          if (g.nodes_[bi].requires_grad)
                            k::ops().axpy(-1.0, go.ptr(), g.grad_of(bi).ptr(), go.size());
                        }));
}

Var Graph::mul(Var a, Var b) {
  const Mat& av = a.val();
  const Mat& bv = b.val();
  if (!av.same_shape(bv)) throw std::invalid_argument("graph mul: shape mismatch");
  Mat out(av.rows, av.cols);
  k::ops().mul(av.ptr(), bv.ptr(), out.ptr(), out.size());
  const int ai = a.idx_, bi = b.idx_;
  return Var(this, push(std::move(out), {ai, bi}, needs_grad({a, b}),
                        [ai, bi](Graph& g, int self) {
                          const Mat& go = g.grads_[self];
                          const Mat& avv = g.nodes_[ai].value;
                          const Mat& bvv = g.nodes_[bi].value;
                          if (g.nodes_[ai].requires_grad) {
                            Mat& ga = g.grad_of(ai);
                            for (std::size_t i = 0; i < go.size(); ++i)
                              ga.data[i] += go.data[i] * bvv.data[i];
                          }
                          if (g.nodes_[bi].requires_grad) {
                            Mat& gb = g.grad_of(bi);
                            for (std::size_t i = 0; i < go.size(); ++i)
                              gb.data[i] += go.data[i] * avv.data[i];
                          }
                        }));
}

Var Graph::scale(Var a, double c) {
  Mat out(a.rows(), a.cols());
  k::ops().scale(a.val().ptr(), c, out.ptr(), out.size());
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai, c](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          k::ops().axpy(c, go.ptr(), g.grad_of(ai).ptr(), go.size());
                        }));
}

Var Graph::add_scalar(Var a, double c) {
  Mat out = a.val();
  for (auto& x : out.data) x += c;
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          k::ops().axpy(1.0, go.ptr(), g.grad_of(ai).ptr(), go.size());
                        }));
}

Var Graph::neg(Var a) { return scale(a, -1.0); }

Var Graph::min_elem(Var a, Var b) {
  const Mat& av = a.val();
  const Mat& bv = b.val();
  if (!av.same_shape(bv)) throw std::invalid_argument("graph min_elem: shape mismatch");
  Mat out(av.rows, av.cols);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = std::min(av.data[i], bv.data[i]);
  const int ai = a.idx_, bi = b.idx_;
  return Var(this, push(std::move(out), {ai, bi}, needs_grad({a, b}),
                        [ai, bi](Graph& g, int self) {
                          const Mat& go = g.grads_[self];
                          const Mat& avv = g.nodes_[ai].value;
                          const Mat& bvv = g.nodes_[bi].value;
                          for (std::size_t i = 0; i < go.size(); ++i) {
                            if (avv.data[i] <= bvv.data[i]) {
                              if (g.nodes_[ai].requires_grad) g.grad_of(ai).data[i] += go.data[i];
                            } else if (g.nodes_[bi].requires_grad) {
                              g.grad_of(bi).data[i] += go.data[i];
                            }
                          }
                        }));
}

Var Graph::tanh_(Var a) {
  const Mat& av = a.val();
  Mat out(av.rows, av.cols);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = std::tanh(av.data[i]);
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          const Mat& y = g.nodes_[self].value;
                          Mat& ga = g.grad_of(ai);
                          for (std::size_t i = 0; i < go.size(); ++i)
                            ga.data[i] += go.data[i] * (1.0 - y.data[i] * y.data[i]);
                        }));
}

Var Graph::sigmoid(Var a) {
  const Mat& av = a.val();
  Mat out(av.rows, av.cols);
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data[i] = 1.0 / (1.0 + std::exp(-av.data[i]));
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          const Mat& y = g.nodes_[self].value;
                          Mat& ga = g.grad_of(ai);
                          for (std::size_t i = 0; i < go.size(); ++i)
                            ga.data[i] += go.data[i] * y.data[i] * (1.0 - y.data[i]);
                        }));
}

Var Graph::relu(Var a) {
  const Mat& av = a.val();
  Mat out(av.rows, av.cols);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = av.data[i] > 0.0 ? av.data[i] : 0.0;
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          const Mat& x = g.nodes_[ai].value;
                          Mat& ga = g.grad_of(ai);
                          for (std::size_t i = 0; i < go.size(); ++i)
                            if (x.data[i] > 0.0) ga.data[i] += go.data[i];
                        }));
}

Var Graph::exp_(Var a) {
  const Mat& av = a.val();
  Mat out(av.rows, av.cols);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = std::exp(av.data[i]);
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          const Mat& y = g.nodes_[self].value;
                          Mat& ga = g.grad_of(ai);
                          for (std::size_t i = 0; i < go.size(); ++i)
                            ga.data[i] += go.data[i] * y.data[i];
                        }));
}

Var Graph::log_(Var a) {
  const Mat& av = a.val();
  Mat out(av.rows, av.cols);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = std::log(av.data[i]);
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          const Mat& x = g.nodes_[ai].value;
                          Mat& ga = g.grad_of(ai);
                          for (std::size_t i = 0; i < go.size(); ++i)
                            ga.data[i] += go.data[i] / x.data[i];
                        }));
}

Var Graph::log_floor(Var a, double floor) {
  const Mat& av = a.val();
  Mat out(av.rows, av.cols);
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data[i] = std::log(std::max(av.data[i], floor));
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai, floor](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          const Mat& x = g.nodes_[ai].value;
                          Mat& ga = g.grad_of(ai);
                          for (std::size_t i = 0; i < go.size(); ++i)
                            if (x.data[i] > floor) ga.data[i] += go.data[i] / x.data[i];
                        }));
}

Var Graph::square(Var a) {
  const Mat& av = a.val();
  Mat out(av.rows, av.cols);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = av.data[i] * av.data[i];
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          const Mat& x = g.nodes_[ai].value;
                          Mat& ga = g.grad_of(ai);
                          for (std::size_t i = 0; i < go.size(); ++i)
                            ga.data[i] += 2.0 * x.data[i] * go.data[i];
                        }));
}

Var Graph::sqrt_(Var a, double eps) {
  const Mat& av = a.val();
  Mat out(av.rows, av.cols);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = std::sqrt(av.data[i] + eps);
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          const Mat& y = g.nodes_[self].value;
                          Mat& ga = g.grad_of(ai);
                          for (std::size_t i = 0; i < go.size(); ++i)
                            ga.data[i] += go.data[i] / (2.0 * y.data[i]);
                        }));
}

Var Graph::clamp(Var a, double lo, double hi) {
  const Mat& av = a.val();
  Mat out(av.rows, av.cols);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = std::clamp(av.data[i], lo, hi);
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai, lo, hi](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          const Mat& x = g.nodes_[ai].value;
                          Mat& ga = g.grad_of(ai);
                          for (std::size_t i = 0; i < go.size(); ++i)
                            if (x.data[i] >= lo && x.data[i] <= hi) ga.data[i] += go.data[i];
                        }));
}

Var Graph::sum(Var a) {
  Mat out(1, 1);
  out.data[0] = k::ops().sum(a.val().ptr(), a.val().size());
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const double go = g.grads_[self].data[0];
                          Mat& ga = g.grad_of(ai);
                          for (auto& x : ga.data) x += go;
                        }));
}

Var Graph::mean(Var a) {
  const double n = static_cast<double>(a.val().size());
  Mat out(1, 1);
  out.data[0] = k::ops().sum(a.val().ptr(), a.val().size()) / n;
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai, n](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const double go = g.grads_[self].data[0] / n;
                          Mat& ga = g.grad_of(ai);
                          for (auto& x : ga.data) x += go;
                        }));
}

Var Graph::sum_rows(Var a) {
  const Mat& av = a.val();
  Mat out(av.rows, 1);
  for (int i = 0; i < av.rows; ++i) out.data[i] = k::ops().sum(av.row_ptr(i), av.cols);
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          Mat& ga = g.grad_of(ai);
                          for (int i = 0; i < ga.rows; ++i) {
                            const double gi = go.data[i];
                            double* row = ga.row_ptr(i);
                            for (int j = 0; j < ga.cols; ++j) row[j] += gi;
                          }
                        }));
}

Var Graph::softmax_rows(Var a) {
  const Mat& av = a.val();
  Mat out(av.rows, av.cols);
  for (int i = 0; i < av.rows; ++i) {
    const double* x = av.row_ptr(i);
    double* y = out.row_ptr(i);
    double mx = x[0];
    for (int j = 1; j < av.cols; ++j) mx = std::max(mx, x[j]);
    double z = 0.0;
    for (int j = 0; j < av.cols; ++j) {
      y[j] = std::exp(x[j] - mx);
      z += y[j];
    }
    for (int j = 0; j < av.cols; ++j) y[j] /= z;
  }
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          const Mat& y = g.nodes_[self].value;
                          Mat& ga = g.grad_of(ai);
                          for (int i = 0; i < y.rows; ++i) {
                            const double* yr = y.row_ptr(i);
                            const double* gr = go.row_ptr(i);
                            double inner = k::ops().dot(yr, gr, y.cols);
                            double* gar = ga.row_ptr(i);
                            for (int j = 0; j < y.cols; ++j)
                              gar[j] += yr[j] * (gr[j] - inner);
                          }
                        }));
}

Var Graph::log_softmax_rows(Var a) {
  const Mat& av = a.val();
  Mat out(av.rows, av.cols);
  for (int i = 0; i < av.rows; ++i) {
    const double* x = av.row_ptr(i);
    double* y = out.row_ptr(i);
    double mx = x[0];
    for (int j = 1; j < av.cols; ++j) mx = std::max(mx, x[j]);
    double z = 0.0;
    for (int j = 0; j < av.cols; ++j) z += std::exp(x[j] - mx);
    const double lse = mx + std::log(z);
    for (int j = 0; j < av.cols; ++j) y[j] = x[j] - lse;
  }
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          const Mat& y = g.nodes_[self].value;
                          Mat& ga = g.grad_of(ai);
                          for (int i = 0; i < y.rows; ++i) {
                            const double* yr = y.row_ptr(i);
                            const double* gr = go.row_ptr(i);
                            double gsum = k::ops().sum(gr, y.cols);
                            double* gar = ga.row_ptr(i);
                            for (int j = 0; j < y.cols; ++j)
                              gar[j] += gr[j] - std::exp(yr[j]) * gsum;
                          }
                        }));
}

Var Graph::logsumexp_rows(Var a) {
  const Mat& av = a.val();
  Mat out(av.rows, 1);
  for (int i = 0; i < av.rows; ++i) {
    const double* x = av.row_ptr(i);
    double mx = x[0];
    for (int j = 1; j < av.cols; ++j) mx = std::max(mx, x[j]);
    double z = 0.0;
    for (int j = 0; j < av.cols; ++j) z += std::exp(x[j] - mx);
    out.data[i] = mx + std::log(z);
  }
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          const Mat& y = g.nodes_[self].value;
                          const Mat& x = g.nodes_[ai].value;
                          Mat& ga = g.grad_of(ai);
                          for (int i = 0; i < x.rows; ++i) {
                            const double gi = go.data[i];
                            const double lse = y.data[i];
                            const double* xr = x.row_ptr(i);
                            double* gar = ga.row_ptr(i);
                            for (int j = 0; j < x.cols; ++j)
                              gar[j] += gi * std::exp(xr[j] - lse);
                          }
                        }));
}

Var Graph::concat_cols(Var a, Var b) {
  const Mat& av = a.val();
  const Mat& bv = b.val();
  if (av.rows != bv.rows) throw std::invalid_argument("graph concat_cols: row mismatch");
  Mat out(av.rows, av.cols + bv.cols);
  for (int i = 0; i < av.rows; ++i) {
    std::copy(av.row_ptr(i), av.row_ptr(i) + av.cols, out.row_ptr(i));
    std::copy(bv.row_ptr(i), bv.row_ptr(i) + bv.cols, out.row_ptr(i) + av.cols);
  }
  const int ai = a.idx_, bi = b.idx_, ac = av.cols;
  return Var(this, push(std::move(out), {ai, bi}, needs_grad({a, b}),
                        [ai, bi, ac](Graph& g, int self) {
                          const Mat& go = g.grads_[self];
                          if (g.nodes_[ai].requires_grad) {
                            Mat& ga = g.grad_of(ai);
                            for (int i = 0; i < ga.rows; ++i)
                              k::ops().axpy(1.0, go.row_ptr(i), ga.row_ptr(i), ga.cols);
                          }
                          if (g.nodes_[bi].requires_grad) {
                            Mat& gb = g.grad_of(bi);
                            for (int i = 0; i < gb.rows; ++i)
                              k::ops().axpy(1.0, go.row_ptr(i) + ac, gb.row_ptr(i), gb.cols);
                          }
                        }));
}

Var Graph::concat_rows(const std::vector<Var>& parts) {
  if (parts.empty()) throw std::invalid_argument("graph concat_rows: empty");
  const int cols = parts[0].cols();
  int rows = 0;
  bool rg = false;
  std::vector<int> pidx;
  pidx.reserve(parts.size());
  for (const Var& p : parts) {
    if (p.cols() != cols) throw std::invalid_argument("graph concat_rows: col mismatch");
    rows += p.rows();
    rg = rg || nodes_[p.idx_].requires_grad;
    pidx.push_back(p.idx_);
  }
  Mat out(rows, cols);
  int r = 0;
  for (const Var& p : parts) {
    const Mat& pv = p.val();
    std::copy(pv.data.begin(), pv.data.end(), out.row_ptr(r));
    r += pv.rows;
  }
  return Var(this, push(std::move(out), pidx, rg,
                        [pidx](Graph& g, int self) {
                          const Mat& go = g.grads_[self];
                          int r0 = 0;
                          for (int pi : pidx) {
                            const int pr = g.nodes_[pi].value.rows;
                            if (g.nodes_[pi].requires_grad) {
                              Mat& gp = g.grad_of(pi);
                              k::ops().axpy(1.0, go.row_ptr(r0), gp.ptr(), gp.size());
                            }
                            r0 += pr;
                          }
                        }));
}

Var Graph::slice_cols(Var a, int c0, int c1) {
  const Mat& av = a.val();
  if (c0 < 0 || c1 > av.cols || c0 >= c1)
    throw std::invalid_argument("graph slice_cols: bad range");
  Mat out(av.rows, c1 - c0);
  for (int i = 0; i < av.rows; ++i)
    std::copy(av.row_ptr(i) + c0, av.row_ptr(i) + c1, out.row_ptr(i));
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai, c0](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          Mat& ga = g.grad_of(ai);
                          for (int i = 0; i < go.rows; ++i)
                            k::ops().axpy(1.0, go.row_ptr(i), ga.row_ptr(i) + c0, go.cols);
                        }));
}

Var Graph::reshape(Var a, int r, int c) {
  const Mat& av = a.val();
  if (static_cast<std::size_t>(r) * c != av.size())
    throw std::invalid_argument("graph reshape: size mismatch");
  Mat out(r, c, av.data);
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          Mat& ga = g.grad_of(ai);
                          k::ops().axpy(1.0, go.ptr(), ga.ptr(), go.size());
                        }));
}

Var Graph::repeat_rows_interleave(Var a, int times) {
  const Mat& av = a.val();
  Mat out(av.rows * times, av.cols);
  for (int i = 0; i < av.rows; ++i)
    for (int t = 0; t < times; ++t)
      std::copy(av.row_ptr(i), av.row_ptr(i) + av.cols, out.row_ptr(i * times + t));
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai, times](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          Mat& ga = g.grad_of(ai);
                          for (int i = 0; i < ga.rows; ++i)
                            for (int t = 0; t < times; ++t)
                              k::ops().axpy(1.0, go.row_ptr(i * times + t), ga.row_ptr(i), ga.cols);
                        }));
}

Var Graph::gather_rows(Var a, std::vector<int> idx) {
  const Mat& av = a.val();
  Mat out(static_cast<int>(idx.size()), av.cols);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= av.rows)
      throw std::invalid_argument("graph gather_rows: index out of range");
    std::copy(av.row_ptr(idx[i]), av.row_ptr(idx[i]) + av.cols, out.row_ptr(static_cast<int>(i)));
  }
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai, idx = std::move(idx)](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          Mat& ga = g.grad_of(ai);
                          for (std::size_t i = 0; i < idx.size(); ++i)
                            k::ops().axpy(1.0, go.row_ptr(static_cast<int>(i)),
                                          ga.row_ptr(idx[i]), ga.cols);
                        }));
}

Var Graph::gather_cols_per_row(Var a, std::vector<int> col) {
  const Mat& av = a.val();
  if (static_cast<int>(col.size()) != av.rows)
    throw std::invalid_argument("graph gather_cols_per_row: index count");
  Mat out(av.rows, 1);
  for (int i = 0; i < av.rows; ++i) {
    if (col[i] < 0 || col[i] >= av.cols)
      throw std::invalid_argument("graph gather_cols_per_row: index out of range");
    out.data[i] = av.at(i, col[i]);
  }
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai, col = std::move(col)](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          Mat& ga = g.grad_of(ai);
                          for (int i = 0; i < ga.rows; ++i) ga.at(i, col[i]) += go.data[i];
                        }));
}

Var Graph::gather_components(Var a, std::vector<int> comp, int d) {
  const Mat& av = a.val();
  if (static_cast<int>(comp.size()) != av.rows)
    throw std::invalid_argument("graph gather_components: index count");
  Mat out(av.rows, d);
  for (int i = 0; i < av.rows; ++i) {
    const int c0 = comp[i] * d;
    if (c0 < 0 || c0 + d > av.cols)
      throw std::invalid_argument("graph gather_components: index out of range");
    std::copy(av.row_ptr(i) + c0, av.row_ptr(i) + c0 + d, out.row_ptr(i));
  }
  const int ai = a.idx_;
  return Var(this, push(std::move(out), {ai}, needs_grad({a}),
                        [ai, comp = std::move(comp), d](Graph& g, int self) {
                          if (!g.nodes_[ai].requires_grad) return;
                          const Mat& go = g.grads_[self];
                          Mat& ga = g.grad_of(ai);
                          for (int i = 0; i < ga.rows; ++i)
                            k::ops().axpy(1.0, go.row_ptr(i), ga.row_ptr(i) + comp[i] * d, d);
                        }));
}

void Graph::backward(Var loss) {
  const Mat& lv = loss.val();
  if (lv.rows != 1 || lv.cols != 1)
    throw std::invalid_argument("backward: loss must be 1x1, got " + shape_str(lv));
  grads_.assign(nodes_.size(), Mat());
  grad_of(loss.idx_).data[0] = 1.0;
  for (int i = loss.idx_; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.requires_grad || grads_[i].rows == 0) continue;
    if (n.back) n.back(*this, i);
    if (n.param) {
      k::ops().axpy(1.0, grads_[i].ptr(), n.param->grad.ptr(), grads_[i].size());
    }
  }
  grads_.clear();
}

}  // namespace moss::nn
