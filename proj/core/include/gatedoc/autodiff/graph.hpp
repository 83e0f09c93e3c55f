#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "gatedoc/autodiff/parameters.hpp"
#include "gatedoc/autodiff/shape.hpp"

namespace gatedoc::ad {

using NodeId = std::uint32_t;

enum class OpKind : std::uint8_t {
  kConstant,
  kVariable,
  kParameter,
  kMatMul,
  kTranspose,
  kReshape,
  kAdd,
  kSub,
  kMul,
  kScale,
  kSigmoid,
  kTanh,
  kRelu,
  kConcat,
  kSlice,
  kSoftmax,
  kLayerNorm,
  kGather,
  kSum,
  kBceLoss,
};

const char* op_name(OpKind op);

template <typename T>
class Graph;

/// Handle to a node of a Graph. Cheap to copy; valid while its graph lives.
template <typename T>
class Tensor {
 public:
  Tensor() = default;
  Tensor(Graph<T>* graph, NodeId id) : graph_(graph), id_(id) {}

  bool valid() const { return graph_ != nullptr; }
  NodeId id() const { return id_; }
  Graph<T>& graph() const { return *graph_; }

  const Shape& shape() const;
  std::size_t dim(std::size_t axis) const { return shape().at(axis); }
  std::size_t rank() const { return shape().size(); }
  std::size_t numel() const { return ad::numel(shape()); }
  std::span<const T> values() const;
  T item() const;
  T at(std::size_t flat) const { return values()[flat]; }
  /// Gradient after backward(); empty when the node received none.
  std::span<const T> grad() const;
  bool requires_grad() const;

 private:
  Graph<T>* graph_ = nullptr;
  NodeId id_ = 0;
};

/// Tape of operations for one forward pass. Nodes are appended in
/// evaluation order, so the node vector is already topologically sorted.
template <typename T>
class Graph {
 public:
  using BackwardFn = std::function<void(Graph&, NodeId)>;

  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;
  Graph(Graph&&) = default;
  Graph& operator=(Graph&&) = default;

  Tensor<T> constant(Shape shape, std::vector<T> values);
  Tensor<T> variable(Shape shape, std::vector<T> values);
  /// Leaf bound to params[index]. Repeated calls return the same node, so
  /// every use of a shared weight accumulates into one gradient.
  Tensor<T> parameter(const ParameterSet<T>& params, std::size_t index);
  Tensor<T> parameter(const ParameterSet<T>& params, std::string_view name) {
    return parameter(params, params.index_of(name));
  }

  /// Appends an op node. `backward` may be empty for non-differentiable ops.
  Tensor<T> record(OpKind op, Shape shape, std::vector<T> values, std::vector<NodeId> inputs,
                   BackwardFn backward);

  void backward(const Tensor<T>& loss);
  /// Adds the gradient of every parameter leaf into the matching buffer.
  void accumulate_parameter_grads(Gradients<T>& into) const;

  std::size_t node_count() const { return nodes_.size(); }
  OpKind op(NodeId id) const { return nodes_[id].op; }
  const std::vector<NodeId>& inputs(NodeId id) const { return nodes_[id].inputs; }
  const Shape& shape(NodeId id) const { return nodes_[id].shape; }
  bool requires_grad(NodeId id) const { return nodes_[id].requires_grad; }
  std::span<const T> values(NodeId id) const;
  std::span<const T> grad(NodeId id) const { return nodes_[id].grad; }
  /// Gradient accumulator of a node, zero-initialized on first access.
  std::span<T> grad_buffer(NodeId id);

 private:
  struct Node {
    OpKind op = OpKind::kConstant;
    Shape shape;
    std::vector<T> owned;
    std::span<const T> external;
    std::vector<T> grad;
    std::vector<NodeId> inputs;
    BackwardFn backward;
    bool requires_grad = false;
    std::int64_t param_index = -1;
  };

  std::vector<Node> nodes_;
  const ParameterSet<T>* params_ = nullptr;
  std::unordered_map<std::size_t, NodeId> param_leaves_;
  bool backward_done_ = false;
};

template <typename T>
const Shape& Tensor<T>::shape() const {
  return graph_->shape(id_);
}
template <typename T>
std::span<const T> Tensor<T>::values() const {
  return graph_->values(id_);
}
template <typename T>
std::span<const T> Tensor<T>::grad() const {
  return graph_->grad(id_);
}
template <typename T>
bool Tensor<T>::requires_grad() const {
  return graph_->requires_grad(id_);
}

extern template class Graph<float>;
extern template class Graph<double>;
extern template class Tensor<float>;
extern template class Tensor<double>;

}  // namespace gatedoc::ad
