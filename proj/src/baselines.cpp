#include "qwalk/baselines.hpp"

#include <cmath>

namespace qwalk {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::softmax: return "softmax";
  }
  return "?";
}

Activation parse_activation(const std::string& s) {
  if (s == "identity") return Activation::identity;
  if (s == "relu") return Activation::relu;
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "softmax") return Activation::softmax;
  throw std::invalid_argument("unknown activation '" + s + "'");
}

Matrix activate(Activation a, const Matrix& z) {
  switch (a) {
    case Activation::identity: return z;
    case Activation::relu: return z.cwiseMax(0.0);
    case Activation::sigmoid: return z.unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
    case Activation::softmax: {
      Matrix y(z.rows(), z.cols());
      for (Eigen::Index r = 0; r < z.rows(); ++r) {
        const double m = z.row(r).maxCoeff();
        y.row(r) = (z.row(r).array() - m).exp();
        y.row(r) /= y.row(r).sum();
      }
      return y;
    }
  }
  return z;
}

Matrix activation_backward(Activation a, const Matrix& z, const Matrix& y, const Matrix& grad_y) {
  switch (a) {
    case Activation::identity: return grad_y;
    case Activation::relu: return grad_y.cwiseProduct((z.array() > 0.0).cast<double>().matrix());
    case Activation::sigmoid: return grad_y.cwiseProduct(y.cwiseProduct((1.0 - y.array()).matrix()));
    case Activation::softmax: {
      Matrix g(z.rows(), z.cols());
      for (Eigen::Index r = 0; r < z.rows(); ++r) {
        const double dot = grad_y.row(r).dot(y.row(r));
        g.row(r) = y.row(r).cwiseProduct((grad_y.row(r).array() - dot).matrix());
      }
      return g;
    }
  }
  return grad_y;
}

Matrix masked_transition_matrix(const Graph& g, std::span<const std::uint8_t> node_mask) {
  const std::size_t n = g.num_nodes();
  Matrix w = Matrix::Zero(n, n);
  for (NodeId v = 0; v < n; ++v) {
    const bool active = node_mask.empty() || node_mask[v] != 0;
    const std::size_t deg = g.degree(v);
    if (deg == 0) {
      if (active) throw std::invalid_argument("node " + std::to_string(v) + " is isolated; transition row undefined");
      continue;
    }
    for (NodeId u : g.neighbors(v)) w(v, u) = 1.0 / static_cast<double>(deg);
  }
  return w;
}

Matrix gcn_operator(const Graph& g) {
  const std::size_t n = g.num_nodes();
  Vector inv_sqrt(n);
  for (NodeId v = 0; v < n; ++v) inv_sqrt[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v) + 1));
  Matrix a = Matrix::Zero(n, n);
  for (NodeId v = 0; v < n; ++v) {
    a(v, v) = inv_sqrt[v] * inv_sqrt[v];
    for (NodeId u : g.neighbors(v)) a(v, u) = inv_sqrt[v] * inv_sqrt[u];
  }
  return a;
}

Matrix diffusion_stack(const Matrix& transition, const Matrix& x, std::size_t hops) {
  const Eigen::Index f = x.cols();
  Matrix out(x.rows(), static_cast<Eigen::Index>(hops + 1) * f);
  Matrix hop = x;
  for (std::size_t k = 0; k <= hops; ++k) {
    if (k > 0) hop = transition * hop;
    out.middleCols(static_cast<Eigen::Index>(k) * f, f) = hop;
  }
  return out;
}

Matrix dcnn_forward(const Graph& g, const Matrix& x, const DcnnParams& p, Activation h) {
  if (static_cast<std::size_t>(x.rows()) != g.num_nodes()) throw std::invalid_argument("feature rows != node count");
  if (static_cast<std::size_t>(p.weights.rows()) != p.hops + 1 || p.weights.cols() != x.cols()) {
    throw std::invalid_argument("DCNN weights must be (hops + 1) x F");
  }
  const Matrix stack = diffusion_stack(transition_matrix(g), x, p.hops);
  Eigen::RowVectorXd w(stack.cols());
  for (std::size_t k = 0; k <= p.hops; ++k) w.segment(static_cast<Eigen::Index>(k) * x.cols(), x.cols()) = p.weights.row(k);
  Matrix z = stack.array().rowwise() * w.array();
  return activate(h, z);
}

Matrix gcnn_forward(const Graph& g, const Matrix& x, const GcnnParams& p, Activation h) {
  if (static_cast<std::size_t>(x.rows()) != g.num_nodes()) throw std::invalid_argument("feature rows != node count");
  if (p.weights.rows() != x.cols()) throw std::invalid_argument("GCNN weights must have F_in rows");
  Matrix z = gcn_operator(g) * x * p.weights;
  if (p.bias.size() > 0) {
    if (p.bias.size() != p.weights.cols()) throw std::invalid_argument("GCNN bias must have F_out entries");
    z.rowwise() += p.bias.transpose();
  }
  return activate(h, z);
}

}  // namespace qwalk
