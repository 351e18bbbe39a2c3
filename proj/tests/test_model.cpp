#include <random>

#include "doctest.h"
#include "qwalk/gradcheck.hpp"
#include "qwalk/model.hpp"
#include "oracles.hpp"

using namespace qwalk;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = nd(rng);
  return m;
}

void jitter(ModelGraphNet& model, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  for (Parameter& p : model.parameters())
    if (p.trainable)
      for (double& v : p.value) v += u(rng);
}

}  // namespace

TEST_CASE("zero steps with identity head reproduces the input") {
  const Graph g = cycle_graph(5);
  const PreparedGraph pg = prepare_graph(g, EdgeOrdering::as_given(), 2, {}, DiffusionKind::quantum_walk);
  ModelSpec spec;
  spec.walk.steps = 0;
  spec.slot_dim = 2;
  spec.in_features = 3;
  ModelGraphNet model(spec, 1);
  std::mt19937_64 rng(3);
  const Matrix x = random_matrix(5, 3, rng);
  CHECK((model.forward(pg, x) - x).norm() == doctest::Approx(0.0));
}

TEST_CASE("one Grover step on K2 swaps the rows") {
  const std::vector<Edge> e{{0, 1}};
  const PreparedGraph pg =
      prepare_graph(Graph::from_edges(2, e), EdgeOrdering::as_given(), 1, {}, DiffusionKind::quantum_walk);
  ModelSpec spec;
  spec.walk.steps = 1;
  spec.walk.mode = CoinMode::fixed_grover;
  spec.slot_dim = 1;
  spec.in_features = 2;
  ModelGraphNet model(spec, 1);
  Matrix x(2, 2);
  x << 1, 2, 3, 4;
  Matrix expected(2, 2);
  expected << 3, 4, 1, 2;
  CHECK((model.forward(pg, x) - expected).norm() == doctest::Approx(0.0));
}

TEST_CASE("unitary walk outputs are convex combinations of input rows") {
  std::mt19937_64 rng(11);
  const Graph g = oracle::random_connected_graph(8, rng);
  const std::size_t d = g.max_degree();
  const PreparedGraph pg = prepare_graph(g, EdgeOrdering::centrality(), d, {}, DiffusionKind::quantum_walk);
  ModelSpec spec;
  spec.walk = {3, CoinPlacement::temporal, CoinMode::unitary, false, true, false};
  spec.slot_dim = d;
  spec.in_features = 1;
  ModelGraphNet model(spec, 2);
  jitter(model, rng, 0.7);
  const Matrix p = model.diffusion_operator(pg);
  CHECK((p.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
  CHECK(p.minCoeff() >= 0.0);
}

TEST_CASE("frozen model with one dense layer and sum loss gives all-ones bias gradient") {
  const PreparedGraph pg = prepare_graph(cycle_graph(4), EdgeOrdering::as_given(), 2, {}, DiffusionKind::quantum_walk);
  ModelSpec spec;
  spec.walk.steps = 2;
  spec.slot_dim = 2;
  spec.in_features = 2;
  spec.outputs = 3;
  ModelGraphNet model(spec, 5);
  for (Parameter& p : model.parameters()) p.trainable = p.name.rfind("dense", 0) == 0;
  std::mt19937_64 rng(1);
  Tape tape;
  const Matrix y = model.forward(pg, random_matrix(4, 2, rng), &tape);
  model.zero_grad();
  model.backward(tape, Matrix::Ones(y.rows(), y.cols()));
  for (double g : model.parameters().find("dense0.bias")->grad) CHECK(g == doctest::Approx(4.0));
  for (double g : model.parameters().find("walk.bias")->grad) CHECK(g != 0.0);
}

TEST_CASE("parameters off the loss path get exactly zero gradient") {
  const PreparedGraph pg = prepare_graph(cycle_graph(4), EdgeOrdering::as_given(), 2, {}, DiffusionKind::quantum_walk);
  ModelSpec spec;
  spec.walk.steps = 0;
  spec.walk.mode = CoinMode::unconstrained;
  spec.slot_dim = 2;
  spec.in_features = 1;
  ModelGraphNet model(spec, 5);
  std::mt19937_64 rng(1);
  Tape tape;
  const Matrix y = model.forward(pg, random_matrix(4, 1, rng), &tape);
  model.zero_grad();
  model.backward(tape, Matrix::Ones(y.rows(), y.cols()));
  // With zero steps there are no coins, so the coin tensor is empty.
  CHECK(model.parameters().find("walk.coins.re")->size() == 0);

  spec.walk.steps = 2;
  spec.outputs = 1;
  ModelGraphNet head(spec, 5);
  Tape t2;
  const Matrix y2 = head.forward(pg, random_matrix(4, 1, rng), &t2);
  Matrix grad = Matrix::Zero(y2.rows(), y2.cols());
  head.zero_grad();
  head.backward(t2, grad);
  for (const Parameter& p : head.parameters())
    for (double g : p.grad) CHECK(g == 0.0);
}

TEST_CASE("backward before forward is rejected") {
  ModelSpec spec;
  spec.walk.steps = 1;
  spec.slot_dim = 2;
  spec.in_features = 1;
  ModelGraphNet model(spec, 1);
  Tape tape;
  CHECK_THROWS_AS(model.backward(tape, Matrix::Zero(1, 1)), std::logic_error);
}

TEST_CASE("shape mismatches are diagnosed") {
  const PreparedGraph pg = prepare_graph(cycle_graph(4), EdgeOrdering::as_given(), 2, {}, DiffusionKind::quantum_walk);
  ModelSpec spec;
  spec.walk.steps = 1;
  spec.slot_dim = 2;
  spec.in_features = 2;
  ModelGraphNet model(spec, 1);
  CHECK_THROWS_AS(model.forward(pg, Matrix::Zero(3, 2)), std::invalid_argument);
  CHECK_THROWS_AS(model.forward(pg, Matrix::Zero(4, 1)), std::invalid_argument);
  spec.slot_dim = 3;
  ModelGraphNet wide(spec, 1);
  CHECK_THROWS_AS(wide.forward(pg, Matrix::Zero(4, 2)), std::invalid_argument);
}

TEST_CASE("finite differences: linear head only") {
  const PreparedGraph pg = prepare_graph(cycle_graph(5), EdgeOrdering::as_given(), 2, {}, DiffusionKind::quantum_walk);
  ModelSpec spec;
  spec.walk.steps = 2;
  spec.slot_dim = 2;
  spec.in_features = 2;
  spec.outputs = 2;
  ModelGraphNet model(spec, 9);
  std::mt19937_64 rng(4);
  const Matrix x = random_matrix(5, 2, rng), t = random_matrix(5, 2, rng);
  for (Parameter& p : model.parameters()) p.trainable = p.name.rfind("dense", 0) == 0;
  const GradCheckReport r = finite_difference_check(model, pg, std::span(&x, 1), std::span(&t, 1), LossKind::mse);
  INFO(r.worst_parameter);
  CHECK(r.max_relative_error < 1e-8);
}

TEST_CASE("finite differences: spatial unconstrained coins, T=3, N=6") {
  std::mt19937_64 rng(21);
  const Graph g = oracle::random_connected_graph(6, rng);
  const std::size_t d = g.max_degree();
  const PreparedGraph pg = prepare_graph(g, EdgeOrdering::as_given(), d, {}, DiffusionKind::quantum_walk);
  ModelSpec spec;
  spec.walk = {3, CoinPlacement::spatial, CoinMode::unconstrained, true, true, false};
  spec.slot_dim = d;
  spec.n_nodes = 6;
  spec.in_features = 2;
  spec.hidden = {4};
  spec.hidden_activation = Activation::sigmoid;
  spec.outputs = 1;
  ModelGraphNet model(spec, 3, &pg);
  jitter(model, rng, 0.2);
  const Matrix x = random_matrix(6, 2, rng), t = random_matrix(6, 1, rng);
  const GradCheckReport r = finite_difference_check(model, pg, std::span(&x, 1), std::span(&t, 1), LossKind::mse);
  INFO(r.worst_parameter, " analytic ", r.analytic, " numeric ", r.numeric);
  CHECK(r.max_relative_error < 1e-5);
}

TEST_CASE("finite differences: complex unitary coins") {
  std::mt19937_64 rng(8);
  const Graph g = oracle::random_connected_graph(6, rng);
  const std::size_t d = g.max_degree();
  for (CoinPlacement place : {CoinPlacement::temporal, CoinPlacement::spatial}) {
    const PreparedGraph pg = prepare_graph(g, EdgeOrdering::similarity(2), d, {}, DiffusionKind::quantum_walk);
    ModelSpec spec;
    spec.walk = {3, place, CoinMode::unitary, true, true, true};
    spec.slot_dim = d;
    spec.n_nodes = 6;
    spec.in_features = 2;
    spec.readout = Readout::mean;
    spec.outputs = 3;
    spec.output_activation = Activation::softmax;
    ModelGraphNet model(spec, 3, &pg);
    jitter(model, rng, 0.3);
    const Matrix x = random_matrix(6, 2, rng);
    Matrix t(1, 1);
    t << 2;
    const GradCheckReport r =
        finite_difference_check(model, pg, std::span(&x, 1), std::span(&t, 1), LossKind::cross_entropy);
    INFO(to_string(place), " ", r.worst_parameter, " analytic ", r.analytic, " numeric ", r.numeric);
    CHECK(r.max_relative_error < 1e-4);
  }
}

TEST_CASE("finite differences: complex unconstrained amplitudes and coins") {
  std::mt19937_64 rng(10);
  const Graph g = oracle::random_connected_graph(5, rng);
  const std::size_t d = g.max_degree();
  const PreparedGraph pg = prepare_graph(g, EdgeOrdering::as_given(), d, {}, DiffusionKind::quantum_walk);
  ModelSpec spec;
  spec.walk = {2, CoinPlacement::temporal, CoinMode::unconstrained, true, true, true};
  spec.slot_dim = d;
  spec.n_nodes = 5;
  spec.in_features = 1;
  ModelGraphNet model(spec, 3, &pg);
  jitter(model, rng, 0.3);
  const Matrix xs[2] = {random_matrix(5, 1, rng), random_matrix(5, 1, rng)};
  const Matrix ts[2] = {random_matrix(5, 1, rng), random_matrix(5, 1, rng)};
  const GradCheckReport r = finite_difference_check(model, pg, xs, ts, LossKind::mse);
  INFO(r.worst_parameter, " analytic ", r.analytic, " numeric ", r.numeric);
  CHECK(r.max_relative_error < 1e-5);
}

TEST_CASE("masked rows do not contribute to graph readouts") {
  const Graph g = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {1, 2}});
  const PreparedGraph pg = prepare_graph(g, EdgeOrdering::as_given(), 2, {1, 1, 1, 0}, DiffusionKind::quantum_walk);
  ModelSpec spec;
  spec.walk.steps = 2;
  spec.slot_dim = 2;
  spec.in_features = 1;
  spec.readout = Readout::sum;
  ModelGraphNet model(spec, 1);
  Matrix x(4, 1);
  x << 1, 2, 3, 100;
  CHECK(model.forward(pg, x)(0, 0) == doctest::Approx(6.0));
}

TEST_CASE("graph-bound parameters require a matching reference graph") {
  ModelSpec spec;
  spec.walk = {2, CoinPlacement::spatial, CoinMode::unconstrained, false, true, false};
  spec.slot_dim = 2;
  spec.n_nodes = 4;
  spec.in_features = 1;
  CHECK_THROWS_AS(ModelGraphNet(spec, 1), std::invalid_argument);
  const PreparedGraph pg = prepare_graph(cycle_graph(4), EdgeOrdering::as_given(), 2, {}, DiffusionKind::quantum_walk);
  CHECK_NOTHROW(ModelGraphNet(spec, 1, &pg));
  const PreparedGraph other = prepare_graph(cycle_graph(5), EdgeOrdering::as_given(), 2, {}, DiffusionKind::quantum_walk);
  CHECK_THROWS_AS(ModelGraphNet(spec, 1, &other), std::invalid_argument);
}
