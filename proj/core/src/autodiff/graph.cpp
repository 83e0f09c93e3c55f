#include "gatedoc/autodiff/graph.hpp"

#include <algorithm>

#include "gatedoc/errors.hpp"

namespace gatedoc::ad {

const char* op_name(OpKind op) {
  switch (op) {
    case OpKind::kConstant: return "constant";
    case OpKind::kVariable: return "variable";
    case OpKind::kParameter: return "parameter";
    case OpKind::kMatMul: return "matmul";
    case OpKind::kTranspose: return "transpose";
    case OpKind::kReshape: return "reshape";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kScale: return "scale";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kTanh: return "tanh";
    case OpKind::kRelu: return "relu";
    case OpKind::kConcat: return "concat";
    case OpKind::kSlice: return "slice";
    case OpKind::kSoftmax: return "softmax";
    case OpKind::kLayerNorm: return "layer_norm";
    case OpKind::kGather: return "gather";
    case OpKind::kSum: return "sum";
    case OpKind::kBceLoss: return "bce_loss";
  }
  return "?";
}

template <typename T>
T Tensor<T>::item() const {
  if (numel() != 1) throw UsageError("item() on tensor of shape " + to_string(shape()));
  return values()[0];
}

template <typename T>
Tensor<T> Graph<T>::constant(Shape shape, std::vector<T> values) {
  return record(OpKind::kConstant, std::move(shape), std::move(values), {}, {});
}

template <typename T>
Tensor<T> Graph<T>::variable(Shape shape, std::vector<T> values) {
  auto t = record(OpKind::kVariable, std::move(shape), std::move(values), {}, {});
  nodes_[t.id()].requires_grad = true;
  return t;
}

template <typename T>
Tensor<T> Graph<T>::parameter(const ParameterSet<T>& params, std::size_t index) {
  if (params_ == nullptr) {
    params_ = &params;
  } else if (params_ != &params) {
    throw InternalError("graph already bound to a different parameter set");
  }
  if (auto it = param_leaves_.find(index); it != param_leaves_.end()) {
    return Tensor<T>(this, it->second);
  }
  const auto& p = params[index];
  Node node;
  node.op = OpKind::kParameter;
  node.shape = p.shape;
  node.external = std::span<const T>(p.value);
  node.requires_grad = true;
  node.param_index = static_cast<std::int64_t>(index);
  nodes_.push_back(std::move(node));
  const auto id = static_cast<NodeId>(nodes_.size() - 1);
  param_leaves_.emplace(index, id);
  return Tensor<T>(this, id);
}

template <typename T>
Tensor<T> Graph<T>::record(OpKind op, Shape shape, std::vector<T> values,
                           std::vector<NodeId> inputs, BackwardFn backward) {
  if (numel(shape) != values.size()) {
    throw DimensionError(std::string(op_name(op)) + ": shape " + to_string(shape) + " holds " +
                         std::to_string(numel(shape)) + " values, got " +
                         std::to_string(values.size()));
  }
  if (backward_done_) throw UsageError("graph is closed after backward()");
  Node node;
  node.op = op;
  node.shape = std::move(shape);
  node.owned = std::move(values);
  node.inputs = std::move(inputs);
  for (auto in : node.inputs) {
    if (in >= nodes_.size()) throw InternalError("op input refers to a later node");
    node.requires_grad = node.requires_grad || nodes_[in].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Tensor<T>(this, static_cast<NodeId>(nodes_.size() - 1));
}

template <typename T>
std::span<const T> Graph<T>::values(NodeId id) const {
  const auto& n = nodes_[id];
  if (n.op == OpKind::kParameter) return n.external;
  return n.owned;
}

template <typename T>
std::span<T> Graph<T>::grad_buffer(NodeId id) {
  auto& n = nodes_[id];
  if (n.grad.empty()) n.grad.assign(numel(n.shape), T(0));
  return n.grad;
}

template <typename T>
void Graph<T>::backward(const Tensor<T>& loss) {
  if (&loss.graph() != this) throw UsageError("backward: loss belongs to another graph");
  if (loss.numel() != 1) {
    throw UsageError("backward: loss must be a scalar, got shape " + to_string(loss.shape()));
  }
  if (backward_done_) throw UsageError("backward: already run on this graph");
  backward_done_ = true;
  if (!nodes_[loss.id()].requires_grad) return;
  grad_buffer(loss.id())[0] = T(1);
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    auto& n = nodes_[i];
    if (!n.requires_grad || n.grad.empty() || !n.backward) continue;
    n.backward(*this, static_cast<NodeId>(i));
  }
}

template <typename T>
void Graph<T>::accumulate_parameter_grads(Gradients<T>& into) const {
  for (const auto& [index, id] : param_leaves_) {
    const auto& g = nodes_[id].grad;
    if (g.empty()) continue;
    auto& dst = into[index];
    if (dst.size() != g.size()) throw DimensionError("gradient buffer size mismatch");
    for (std::size_t j = 0; j < g.size(); ++j) dst[j] += g[j];
  }
}

template class Graph<float>;
template class Graph<double>;
template class Tensor<float>;
template class Tensor<double>;

}  // namespace gatedoc::ad
