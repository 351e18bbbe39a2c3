#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qwalk {

/// A named dense tensor with a gradient buffer of the same shape. Frozen
/// parameters keep a zero gradient and are skipped by optimizers.
struct Parameter {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> value;
  std::vector<double> grad;
  bool trainable = true;

  std::size_t size() const { return value.size(); }
};

std::string shape_string(const std::vector<std::size_t>& shape);

class ParameterSet {
 public:
  /// Zero-initialized; returns the parameter's index.
  std::size_t add(std::string name, std::vector<std::size_t> shape, bool trainable);

  Parameter& operator[](std::size_t i) { return params_.at(i); }
  const Parameter& operator[](std::size_t i) const { return params_.at(i); }
  Parameter* find(const std::string& name);
  const Parameter* find(const std::string& name) const;

  std::size_t size() const { return params_.size(); }
  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  void zero_grad();
  void scale_grad(double factor);
  std::size_t scalar_count(bool trainable_only) const;

 private:
  std::vector<Parameter> params_;
};

}  // namespace qwalk
