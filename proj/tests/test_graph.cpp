#include "doctest.h"

#include <cmath>

#include "moss/core/rng.hpp"
#include "moss/nn/graph.hpp"
#include "moss/nn/modules.hpp"
#include "oracles/fd.hpp"

using namespace moss::nn;
using moss::core::RandomStream;

namespace {

Mat random_mat(RandomStream& rng, int r, int c, double scale = 1.0) {
  Mat m(r, c);
  for (auto& x : m.data) x = rng.uniform(-scale, scale);
  return m;
}

}  // namespace

TEST_CASE("smooth op mix passes central finite differences") {
  RandomStream rng(42, "graph-smooth");
  Parameter A("A", 3, 4), B("B", 4, 5), bias("bias", 1, 5), C("C", 3, 5);
  for (auto* p : {&A, &B, &bias, &C})
    for (auto& x : p->value.data) x = rng.uniform(-0.8, 0.8);

  auto build = [&](Graph& g) {
    Var a = g.leaf(A), b = g.leaf(B), bb = g.leaf(bias), c = g.leaf(C);
    Var h = g.add_rowvec(g.matmul(a, b), bb);     // 3x5
    h = g.tanh_(h);
    h = g.mul(h, g.sigmoid(c));
    h = g.add(h, g.scale(c, 0.3));
    Var e = g.exp_(g.scale(h, 0.5));
    Var lg = g.log_(g.add_scalar(g.square(h), 1.0));
    Var sq = g.sqrt_(g.square(h), 1e-3);
    Var mix = g.add(g.add(e, lg), sq);
    Var sm = g.softmax_rows(mix);
    Var lsm = g.log_softmax_rows(mix);
    Var lse = g.logsumexp_rows(mix);
    Var parts = g.concat_cols(g.mul(sm, lsm), lse);  // 3x6
    Var pooled = g.sum_rows(parts);                   // 3x1
    return g.add(g.mean(g.square(pooled)), g.sum(g.neg(g.add_scalar(pooled, -0.1))));
  };
  auto loss = [&]() {
    Graph g;
    return build(g).val().data[0];
  };

  // analytic grads
  {
    Graph g;
    for (auto* p : {&A, &B, &bias, &C}) p->grad.zero();
    g.backward(build(g));
  }

  auto r = oracles::fd_check({&A, &B, &bias, &C}, loss);
  CAPTURE(r.worst_param);
  CAPTURE(r.worst_ad);
  CAPTURE(r.worst_fd);
  CHECK(r.max_rel < 1e-5);
}

TEST_CASE("shape and gather ops pass finite differences") {
  RandomStream rng(43, "graph-shape");
  Parameter A("A", 4, 6);
  for (auto& x : A.value.data) x = rng.uniform(-1.0, 1.0);

  const std::vector<int> rows = {2, 0, 3, 3, 1};
  const std::vector<int> cols = {1, 5, 0, 2};
  const std::vector<int> comps = {0, 2, 1, 0};

  auto build = [&](Graph& g) {
    Var a = g.leaf(A);
    Var r1 = g.reshape(a, 2, 12);
    Var r2 = g.repeat_rows_interleave(r1, 3);                 // 6x12
    Var s = g.slice_cols(r2, 2, 8);                           // 6x6
    Var gr = g.gather_rows(g.tanh_(s), {5, 1, 0, 2, 2});      // 5x6
    Var cr = g.concat_rows({gr, g.scale(gr, -0.5)});          // 10x6
    Var gc = g.gather_cols_per_row(g.slice_cols(cr, 0, 6),
                                   {0, 1, 2, 3, 4, 5, 0, 1, 2, 3});  // 10x1
    Var comp = g.gather_components(a, comps, 2);              // 4x2 (3 comps of width 2)
    Var total = g.add(g.sum(g.square(gc)), g.mean(g.square(comp)));
    (void)rows;
    (void)cols;
    return total;
  };

  {
    Graph g;
    A.grad.zero();
    g.backward(build(g));
  }
  auto loss = [&]() {
    Graph g;
    return build(g).val().data[0];
  };
  auto r = oracles::fd_check({&A}, loss);
  CHECK(r.max_rel < 1e-6);
}

TEST_CASE("kinked ops route gradients correctly away from kinks") {
  RandomStream rng(44, "graph-kinks");
  Parameter A("A", 3, 3), B("B", 3, 3);
  // keep all magnitudes > 0.05 so eps=1e-4 never crosses a kink
  for (auto* p : {&A, &B})
    for (auto& x : p->value.data) {
      x = rng.uniform(-1.0, 1.0);
      if (std::abs(x) < 0.05) x += (x >= 0 ? 0.1 : -0.1);
    }
  // separate the min_elem operands
  for (std::size_t i = 0; i < A.value.size(); ++i)
    if (std::abs(A.value.data[i] - B.value.data[i]) < 0.05) B.value.data[i] += 0.2;

  auto build = [&](Graph& g) {
    Var a = g.leaf(A), b = g.leaf(B);
    Var m = g.min_elem(a, b);
    Var rl = g.relu(a);
    Var cl = g.clamp(b, -0.5, 0.5);
    Var lf = g.log_floor(g.add_scalar(g.square(a), 0.2), 1e-8);
    return g.sum(g.add(g.add(g.square(m), rl), g.add(g.square(cl), lf)));
  };
  {
    Graph g;
    A.grad.zero();
    B.grad.zero();
    g.backward(build(g));
  }
  auto loss = [&]() {
    Graph g;
    return build(g).val().data[0];
  };
  auto r = oracles::fd_check({&A, &B}, loss);
  CHECK(r.max_rel < 1e-6);
}

TEST_CASE("gru cell chain matches finite differences") {
  RandomStream rng(45, "graph-gru");
  GruCell gru("gru", 3, 4);
  gru.init(rng);
  Mat x0 = random_mat(rng, 2, 3), x1 = random_mat(rng, 2, 3), x2 = random_mat(rng, 2, 3);

  std::vector<Parameter*> params;
  gru.collect(params);

  auto build = [&](Graph& g) {
    Var h = g.constant(Mat(2, 4));
    h = gru.step(g, g.constant(x0), h);
    h = gru.step(g, g.constant(x1), h);
    h = gru.step(g, g.constant(x2), h);
    return g.mean(g.square(h));
  };
  {
    Graph g;
    for (auto* p : params) p->grad.zero();
    g.backward(build(g));
  }
  auto loss = [&]() {
    Graph g;
    return build(g).val().data[0];
  };
  auto r = oracles::fd_check(params, loss);
  CAPTURE(r.worst_param);
  CHECK(r.max_rel < 1e-6);
}

TEST_CASE("graph and eval forward paths agree for linear, mlp and gru") {
  RandomStream rng(46, "graph-evalparity");
  Mlp mlp("m", {4, 6, 3}, Activation::relu);
  mlp.init(rng);
  GruCell gru("g", 4, 5);
  gru.init(rng);
  Mat x = random_mat(rng, 7, 4);
  Mat h = random_mat(rng, 7, 5);

  Graph g;
  Mat via_graph = mlp.forward(g, g.constant(x)).val();
  Mat via_eval = mlp.forward(x);
  CHECK(max_abs_diff(via_graph, via_eval) == 0.0);

  Mat hg = gru.step(g, g.constant(x), g.constant(h)).val();
  Mat he = gru.step(x, h);
  CHECK(max_abs_diff(hg, he) < 1e-15);

  // masked step freezes masked rows
  std::vector<unsigned char> mask = {1, 0, 1, 0, 1, 1, 0};
  Mat hm = gru.step_masked(x, h, mask);
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (mask[i])
        CHECK(hm.at(i, j) == he.at(i, j));
      else
        CHECK(hm.at(i, j) == h.at(i, j));
    }
  }
}

TEST_CASE("adam minimizes a quadratic and matches the reference update") {
  Parameter w("w", 1, 1);
  w.value.data[0] = 1.0;
  Adam opt(0.1);
  opt.add({&w});

  // single step from zero state: update is exactly -lr * sign(g) scaled by
  // bias correction: m_hat = g, v_hat = g^2 -> step = lr * g / (|g| + eps)
  w.grad.data[0] = 0.5;
  opt.step();
  CHECK(w.value.data[0] == doctest::Approx(1.0 - 0.1 * 0.5 / (0.5 + 1e-8)).epsilon(1e-12));

  for (int i = 0; i < 200; ++i) {
    opt.zero_grad();
    const double x = w.value.data[0];
    w.grad.data[0] = 2.0 * (x - 3.0);
    opt.step();
  }
  CHECK(std::abs(w.value.data[0] - 3.0) < 0.05);
}

TEST_CASE("clip_grad_norm rescales to the requested norm") {
  Parameter a("a", 1, 3), b("b", 1, 1);
  a.grad.data = {3.0, 0.0, 4.0};
  b.grad.data = {0.0};
  Adam opt(0.1);
  opt.add({&a, &b});
  const double norm = opt.clip_grad_norm(1.0);
  CHECK(norm == doctest::Approx(5.0));
  CHECK(opt.grad_norm() == doctest::Approx(1.0));
  CHECK(a.grad.data[0] == doctest::Approx(0.6));
}
