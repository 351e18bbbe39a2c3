#include "qwalk/parameters.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace qwalk {

std::string shape_string(const std::vector<std::size_t>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

std::size_t ParameterSet::add(std::string name, std::vector<std::size_t> shape, bool trainable) {
  if (find(name)) throw std::invalid_argument("duplicate parameter name '" + name + "'");
  const std::size_t n = std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  params_.push_back({std::move(name), std::move(shape), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                     trainable});
  return params_.size() - 1;
}

Parameter* ParameterSet::find(const std::string& name) {
  auto it = std::find_if(params_.begin(), params_.end(), [&](const Parameter& p) { return p.name == name; });
  return it == params_.end() ? nullptr : &*it;
}

const Parameter* ParameterSet::find(const std::string& name) const {
  auto it = std::find_if(params_.begin(), params_.end(), [&](const Parameter& p) { return p.name == name; });
  return it == params_.end() ? nullptr : &*it;
}

void ParameterSet::zero_grad() {
  for (auto& p : params_) std::fill(p.grad.begin(), p.grad.end(), 0.0);
}

void ParameterSet::scale_grad(double factor) {
  for (auto& p : params_)
    for (double& g : p.grad) g *= factor;
}

std::size_t ParameterSet::scalar_count(bool trainable_only) const {
  std::size_t n = 0;
  for (const auto& p : params_)
    if (!trainable_only || p.trainable) n += p.size();
  return n;
}

}  // namespace qwalk
