#pragma once

#include <functional>
#include <vector>

#include "moss/nn/mat.hpp"

namespace moss::nn {

// A trainable tensor with persistent gradient and Adam state.
struct Parameter {
  std::string name;
  Mat value;
  Mat grad;
  Mat adam_m, adam_v;

  Parameter() = default;
  Parameter(std::string n, int r, int c)
      : name(std::move(n)), value(r, c), grad(r, c), adam_m(r, c), adam_v(r, c) {}
  std::size_t size() const { return value.size(); }
};

class Graph;

// Handle to a node on a Graph tape. Cheap to copy; valid only as long as the
// graph that produced it.
class Var {
 public:
  Var() = default;
  const Mat& val() const;
  int rows() const { return val().rows; }
  int cols() const { return val().cols; }
  bool valid() const { return g_ != nullptr; }

 private:
  friend class Graph;
  Var(Graph* g, int idx) : g_(g), idx_(idx) {}
  Graph* g_ = nullptr;
  int idx_ = -1;
};

// Dynamic reverse-mode tape over Mat values. Nodes are created in evaluation
// order, so a reverse sweep over the tape is a valid topological order for
// backpropagation. One Graph per training step; not thread-safe.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  // leaves
  Var leaf(Parameter& p);          // gradient accumulates into p.grad
  Var constant(Mat v);             // no gradient

  // arithmetic
  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var add_rowvec(Var a, Var bias);          // bias: 1 x cols
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);                    // elementwise
  Var scale(Var a, double c);
  Var add_scalar(Var a, double c);
  Var neg(Var a);
  Var min_elem(Var a, Var b);               // ties route gradient to a

  // elementwise nonlinearities
  Var tanh_(Var a);
  Var sigmoid(Var a);
  Var relu(Var a);
  Var exp_(Var a);
  Var log_(Var a);                          // caller must keep inputs positive
  Var log_floor(Var a, double floor);       // log(max(a, floor)); zero grad below
  Var square(Var a);
  Var sqrt_(Var a, double eps = 0.0);       // sqrt(a + eps)
  Var clamp(Var a, double lo, double hi);   // unit grad inside [lo, hi]

  // reductions and shape
  Var sum(Var a);                           // -> 1x1
  Var mean(Var a);                          // -> 1x1
  Var sum_rows(Var a);                      // m x n -> m x 1
  Var softmax_rows(Var a);
  Var log_softmax_rows(Var a);
  Var logsumexp_rows(Var a);                // m x n -> m x 1 (max-shifted)
  Var concat_cols(Var a, Var b);
  Var concat_rows(const std::vector<Var>& parts);
  Var slice_cols(Var a, int c0, int c1);
  Var reshape(Var a, int r, int c);
  Var repeat_rows_interleave(Var a, int times);  // row i -> rows i*times..i*times+times-1
  Var gather_rows(Var a, std::vector<int> idx);
  Var gather_cols_per_row(Var a, std::vector<int> col);          // m x n -> m x 1
  // per-row block gather: row i yields cols [comp[i]*d, (comp[i]+1)*d)
  Var gather_components(Var a, std::vector<int> comp, int d);

  // Runs the reverse sweep from a 1x1 loss node and accumulates parameter
  // gradients into their Parameter::grad.
  void backward(Var loss);

  std::size_t num_nodes() const { return nodes_.size(); }
  const Mat& value_of(Var v) const { return nodes_[v.idx_].value; }

 private:
  friend class Var;
  struct Node {
    Mat value;
    bool requires_grad = false;
    Parameter* param = nullptr;
    std::vector<int> parents;
    // Accumulates this node's output gradient into its parents' gradients.
    std::function<void(Graph&, int)> back;
  };

  int push(Mat value, std::vector<int> parents, bool requires_grad,
           std::function<void(Graph&, int)> back);
  bool needs_grad(std::initializer_list<Var> vs) const;
  Mat& grad_of(int idx);

  std::vector<Node> nodes_;
  std::vector<Mat> grads_;   // populated during backward()
};

}  // namespace moss::nn
