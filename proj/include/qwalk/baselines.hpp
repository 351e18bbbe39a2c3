#pragma once

#include <span>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/types.hpp"

namespace qwalk {

enum class Activation { identity, relu, sigmoid, softmax };

std::string to_string(Activation a);
Activation parse_activation(const std::string& s);

/// Elementwise activation. Softmax is applied per row.
Matrix activate(Activation a, const Matrix& z);
/// dL/dz given dL/dy, the pre-activation z and the output y = h(z).
Matrix activation_backward(Activation a, const Matrix& z, const Matrix& y, const Matrix& grad_y);

/// Diffusion-convolution weights: one weight per (hop, feature).
struct DcnnParams {
  std::size_t hops = 0;
  Matrix weights;  // (hops + 1) x F
};

/// Graph-convolution weights.
struct GcnnParams {
  Matrix weights;  // F_in x F_out
  Vector bias;     // empty, or F_out
};

/// Transition matrix with rows of masked-out nodes left at zero. Unmasked
/// isolated nodes are rejected.
Matrix masked_transition_matrix(const Graph& g, std::span<const std::uint8_t> node_mask);

/// D~^{-1/2} (A + I) D~^{-1/2} over real edges.
Matrix gcn_operator(const Graph& g);

/// Stacked hop-diffused features [P^0 X | P^1 X | ... | P^K X], N x (K+1)F;
/// column k * F + f holds hop k of feature f.
Matrix diffusion_stack(const Matrix& transition, const Matrix& x, std::size_t hops);

/// Y = h(W (.) P* X), flattened to N x (K+1)F as in diffusion_stack.
Matrix dcnn_forward(const Graph& g, const Matrix& x, const DcnnParams& p, Activation h);

/// Y = h(D~^{-1/2} A~ D~^{-1/2} X W + b).
Matrix gcnn_forward(const Graph& g, const Matrix& x, const GcnnParams& p, Activation h);

}  // namespace qwalk
