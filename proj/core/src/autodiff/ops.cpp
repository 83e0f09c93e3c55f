#include "gatedoc/autodiff/ops.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <string>

#include "gatedoc/errors.hpp"

namespace gatedoc::ad {
namespace {

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using ConstMap = Eigen::Map<const RowMatrix<T>>;
template <typename T>
using MutMap = Eigen::Map<RowMatrix<T>>;

template <typename T>
void require_same_graph(const Tensor<T>& a, const Tensor<T>& b, const char* op) {
  if (!a.valid() || !b.valid() || &a.graph() != &b.graph()) {
    throw InternalError(std::string(op) + ": operands belong to different graphs");
  }
}

[[noreturn]] void dimension_error(const char* op, const Shape& a, const Shape& b) {
  throw DimensionError(std::string(op) + ": incompatible shapes " + to_string(a) + " and " +
                       to_string(b));
}

Shape strip_leading_ones(const Shape& s) {
  auto it = std::find_if(s.begin(), s.end(), [](std::size_t d) { return d != 1; });
  return Shape(it, s.end());
}

// True when `small` repeats with period numel(small) across `big`.
bool is_row_broadcast(const Shape& small, const Shape& big) {
  if (numel(small) == 1) return true;
  const Shape core = strip_leading_ones(small);
  if (core.size() > big.size()) return false;
  return std::equal(core.rbegin(), core.rend(), big.rbegin());
}

}  // namespace

template <typename T>
T stable_sigmoid(T x) {
  if (x >= T(0)) {
    const T e = std::exp(-x);
    return T(1) / (T(1) + e);
  }
  const T e = std::exp(x);
  return e / (T(1) + e);
}

template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_graph(a, b, "matmul");
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
    dimension_error("matmul", a.shape(), b.shape());
  }
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  std::vector<T> out(m * n);
  MutMap<T>(out.data(), m, n).noalias() =
      ConstMap<T>(a.values().data(), m, k) * ConstMap<T>(b.values().data(), k, n);
  const NodeId ia = a.id(), ib = b.id();
  return a.graph().record(
      OpKind::kMatMul, {m, n}, std::move(out), {ia, ib}, [ia, ib, m, k, n](Graph<T>& g, NodeId self) {
        ConstMap<T> dout(g.grad(self).data(), m, n);
        if (g.requires_grad(ia)) {
          MutMap<T>(g.grad_buffer(ia).data(), m, k).noalias() +=
              dout * ConstMap<T>(g.values(ib).data(), k, n).transpose();
        }
        if (g.requires_grad(ib)) {
          MutMap<T>(g.grad_buffer(ib).data(), k, n).noalias() +=
              ConstMap<T>(g.values(ia).data(), m, k).transpose() * dout;
        }
      });
}

template <typename T>
Tensor<T> transpose(const Tensor<T>& a) {
  if (a.rank() != 2) throw DimensionError("transpose: expected a matrix, got " + to_string(a.shape()));
  const std::size_t m = a.dim(0), n = a.dim(1);
  std::vector<T> out(m * n);
  const auto in = a.values();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = in[i * n + j];
  }
  const NodeId ia = a.id();
  return a.graph().record(OpKind::kTranspose, {n, m}, std::move(out), {ia},
                          [ia, m, n](Graph<T>& g, NodeId self) {
                            const auto dout = g.grad(self);
                            auto da = g.grad_buffer(ia);
                            for (std::size_t i = 0; i < m; ++i) {
                              for (std::size_t j = 0; j < n; ++j) da[i * n + j] += dout[j * m + i];
                            }
                          });
}

template <typename T>
Tensor<T> reshape(const Tensor<T>& a, Shape shape) {
  if (numel(shape) != a.numel()) dimension_error("reshape", a.shape(), shape);
  const auto in = a.values();
  const NodeId ia = a.id();
  return a.graph().record(OpKind::kReshape, std::move(shape), std::vector<T>(in.begin(), in.end()),
                          {ia}, [ia](Graph<T>& g, NodeId self) {
                            const auto dout = g.grad(self);
                            auto da = g.grad_buffer(ia);
                            for (std::size_t i = 0; i < dout.size(); ++i) da[i] += dout[i];
                          });
}

template <typename T>
Tensor<T> elementwise(Elementwise kind, const Tensor<T>& a, const Tensor<T>& b) {
  require_same_graph(a, b, "elementwise");
  const char* name = kind == Elementwise::kAdd ? "add" : kind == Elementwise::kSub ? "sub" : "mul";
  // Output takes the shape of the larger operand; the other one repeats.
  Shape out_shape;
  if (a.shape() == b.shape()) {
    out_shape = a.shape();
  } else if (a.numel() >= b.numel() && is_row_broadcast(b.shape(), a.shape())) {
    out_shape = a.shape();
  } else if (b.numel() > a.numel() && is_row_broadcast(a.shape(), b.shape())) {
    out_shape = b.shape();
  } else {
    dimension_error(name, a.shape(), b.shape());
  }
  const std::size_t n = numel(out_shape);
  const std::size_t na = a.numel(), nb = b.numel();
  const auto va = a.values(), vb = b.values();
  std::vector<T> out(n);
  switch (kind) {
    case Elementwise::kAdd:
      for (std::size_t i = 0; i < n; ++i) out[i] = va[i % na] + vb[i % nb];
      break;
    case Elementwise::kSub:
      for (std::size_t i = 0; i < n; ++i) out[i] = va[i % na] - vb[i % nb];
      break;
    case Elementwise::kMul:
      for (std::size_t i = 0; i < n; ++i) out[i] = va[i % na] * vb[i % nb];
      break;
  }
  const OpKind op = kind == Elementwise::kAdd   ? OpKind::kAdd
                    : kind == Elementwise::kSub ? OpKind::kSub
                                                : OpKind::kMul;
  const NodeId ia = a.id(), ib = b.id();
  return a.graph().record(op, std::move(out_shape), std::move(out), {ia, ib},
                          [kind, ia, ib, n, na, nb](Graph<T>& g, NodeId self) {
                            const auto dout = g.grad(self);
                            if (g.requires_grad(ia)) {
                              auto da = g.grad_buffer(ia);
                              if (kind == Elementwise::kMul) {
                                const auto vb = g.values(ib);
                                for (std::size_t i = 0; i < n; ++i) da[i % na] += dout[i] * vb[i % nb];
                              } else {
                                for (std::size_t i = 0; i < n; ++i) da[i % na] += dout[i];
                              }
                            }
                            if (g.requires_grad(ib)) {
                              auto db = g.grad_buffer(ib);
                              if (kind == Elementwise::kMul) {
                                const auto va = g.values(ia);
                                for (std::size_t i = 0; i < n; ++i) db[i % nb] += dout[i] * va[i % na];
                              } else if (kind == Elementwise::kSub) {
                                for (std::size_t i = 0; i < n; ++i) db[i % nb] -= dout[i];
                              } else {
                                for (std::size_t i = 0; i < n; ++i) db[i % nb] += dout[i];
                              }
                            }
                          });
}

template <typename T>
Tensor<T> scale(const Tensor<T>& a, T factor) {
  const auto in = a.values();
  std::vector<T> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] * factor;
  const NodeId ia = a.id();
  return a.graph().record(OpKind::kScale, a.shape(), std::move(out), {ia},
                          [ia, factor](Graph<T>& g, NodeId self) {
                            const auto dout = g.grad(self);
                            auto da = g.grad_buffer(ia);
                            for (std::size_t i = 0; i < dout.size(); ++i) da[i] += dout[i] * factor;
                          });
}

template <typename T>
Tensor<T> activation(Activation kind, const Tensor<T>& x) {
  const auto in = x.values();
  std::vector<T> out(in.size());
  OpKind op = OpKind::kSigmoid;
  switch (kind) {
    case Activation::kSigmoid:
      for (std::size_t i = 0; i < in.size(); ++i) out[i] = stable_sigmoid(in[i]);
      break;
    case Activation::kTanh:
      op = OpKind::kTanh;
      for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::tanh(in[i]);
      break;
    case Activation::kRelu:
      op = OpKind::kRelu;
      for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] > T(0) ? in[i] : T(0);
      break;
  }
  const NodeId ix = x.id();
  return x.graph().record(op, x.shape(), std::move(out), {ix}, [kind, ix](Graph<T>& g, NodeId self) {
    const auto dout = g.grad(self);
    const auto y = g.values(self);
    auto dx = g.grad_buffer(ix);
    switch (kind) {
      case Activation::kSigmoid:
        for (std::size_t i = 0; i < dout.size(); ++i) dx[i] += dout[i] * y[i] * (T(1) - y[i]);
        break;
      case Activation::kTanh:
        for (std::size_t i = 0; i < dout.size(); ++i) dx[i] += dout[i] * (T(1) - y[i] * y[i]);
        break;
      case Activation::kRelu: {
        const auto xin = g.values(ix);
        for (std::size_t i = 0; i < dout.size(); ++i) {
          if (xin[i] > T(0)) dx[i] += dout[i];
        }
        break;
      }
    }
  });
}

template <typename T>
Tensor<T> concat(std::span<const Tensor<T>> parts, std::size_t axis) {
  if (parts.empty()) throw DimensionError("concat: no operands");
  const Shape& first = parts[0].shape();
  if (axis >= first.size()) {
    throw DimensionError("concat: axis " + std::to_string(axis) + " out of range for " +
                         to_string(first));
  }
  Shape out_shape = first;
  out_shape[axis] = 0;
  for (const auto& p : parts) {
    require_same_graph(parts[0], p, "concat");
    const Shape& s = p.shape();
    if (s.size() != first.size()) dimension_error("concat", first, s);
    for (std::size_t d = 0; d < s.size(); ++d) {
      if (d != axis && s[d] != first[d]) dimension_error("concat", first, s);
    }
    out_shape[axis] += s[axis];
  }
  std::size_t outer = 1, inner = 1;
  for (std::size_t d = 0; d < axis; ++d) outer *= first[d];
  for (std::size_t d = axis + 1; d < first.size(); ++d) inner *= first[d];

  std::vector<std::size_t> widths;
  std::vector<NodeId> ids;
  for (const auto& p : parts) {
    widths.push_back(p.shape()[axis] * inner);
    ids.push_back(p.id());
  }
  const std::size_t total = out_shape[axis] * inner;
  std::vector<T> out(outer * total);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto v = parts[k].values();
    for (std::size_t o = 0; o < outer; ++o) {
      std::copy_n(v.data() + o * widths[k], widths[k], out.data() + o * total + offset);
    }
    offset += widths[k];
  }
  auto inputs = ids;
  return parts[0].graph().record(
      OpKind::kConcat, std::move(out_shape), std::move(out), std::move(inputs),
      [ids, widths, outer, total](Graph<T>& g, NodeId self) {
        const auto dout = g.grad(self);
        std::size_t off = 0;
        for (std::size_t k = 0; k < ids.size(); ++k) {
          if (g.requires_grad(ids[k])) {
            auto dk = g.grad_buffer(ids[k]);
            for (std::size_t o = 0; o < outer; ++o) {
              const T* src = dout.data() + o * total + off;
              T* dst = dk.data() + o * widths[k];
              for (std::size_t j = 0; j < widths[k]; ++j) dst[j] += src[j];
            }
          }
          off += widths[k];
        }
      });
}

template <typename T>
Tensor<T> slice(const Tensor<T>& a, std::size_t axis, std::size_t begin, std::size_t end) {
  const Shape& s = a.shape();
  if (axis >= s.size() || begin >= end || end > s[axis]) {
    throw DimensionError("slice: range [" + std::to_string(begin) + "," + std::to_string(end) +
                         ") on axis " + std::to_string(axis) + " invalid for " + to_string(s));
  }
  std::size_t outer = 1, inner = 1;
  for (std::size_t d = 0; d < axis; ++d) outer *= s[d];
  for (std::size_t d = axis + 1; d < s.size(); ++d) inner *= s[d];
  const std::size_t src_width = s[axis] * inner;
  const std::size_t width = (end - begin) * inner;
  const std::size_t start = begin * inner;
  Shape out_shape = s;
  out_shape[axis] = end - begin;
  const auto v = a.values();
  std::vector<T> out(outer * width);
  for (std::size_t o = 0; o < outer; ++o) {
    std::copy_n(v.data() + o * src_width + start, width, out.data() + o * width);
  }
  const NodeId ia = a.id();
  return a.graph().record(OpKind::kSlice, std::move(out_shape), std::move(out), {ia},
                          [ia, outer, width, src_width, start](Graph<T>& g, NodeId self) {
                            const auto dout = g.grad(self);
                            auto da = g.grad_buffer(ia);
                            for (std::size_t o = 0; o < outer; ++o) {
                              for (std::size_t j = 0; j < width; ++j) {
                                da[o * src_width + start + j] += dout[o * width + j];
                              }
                            }
                          });
}

template <typename T>
Tensor<T> softmax(const Tensor<T>& x, std::size_t axis) {
  const Shape& s = x.shape();
  if (axis >= s.size()) {
    throw DimensionError("softmax: axis " + std::to_string(axis) + " out of range for " + to_string(s));
  }
  std::size_t outer = 1, inner = 1;
  for (std::size_t d = 0; d < axis; ++d) outer *= s[d];
  for (std::size_t d = axis + 1; d < s.size(); ++d) inner *= s[d];
  const std::size_t len = s[axis];
  const auto v = x.values();
  std::vector<T> out(v.size());
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * len * inner + in;
      T mx = v[base];
      for (std::size_t j = 1; j < len; ++j) mx = std::max(mx, v[base + j * inner]);
      T total = 0;
      for (std::size_t j = 0; j < len; ++j) {
        const T e = std::exp(v[base + j * inner] - mx);
        out[base + j * inner] = e;
        total += e;
      }
      for (std::size_t j = 0; j < len; ++j) out[base + j * inner] /= total;
    }
  }
  const NodeId ix = x.id();
  return x.graph().record(OpKind::kSoftmax, s, std::move(out), {ix},
                          [ix, outer, inner, len](Graph<T>& g, NodeId self) {
                            const auto dout = g.grad(self);
                            const auto y = g.values(self);
                            auto dx = g.grad_buffer(ix);
                            for (std::size_t o = 0; o < outer; ++o) {
                              for (std::size_t in = 0; in < inner; ++in) {
                                const std::size_t base = o * len * inner + in;
                                T dot = 0;
                                for (std::size_t j = 0; j < len; ++j) {
                                  dot += dout[base + j * inner] * y[base + j * inner];
                                }
                                for (std::size_t j = 0; j < len; ++j) {
                                  const std::size_t idx = base + j * inner;
                                  dx[idx] += y[idx] * (dout[idx] - dot);
                                }
                              }
                            }
                          });
}

template <typename T>
Tensor<T> layer_norm(const Tensor<T>& x, const Tensor<T>& gain, const Tensor<T>& bias, T eps) {
  require_same_graph(x, gain, "layer_norm");
  require_same_graph(x, bias, "layer_norm");
  if (x.rank() == 0) throw DimensionError("layer_norm: scalar input");
  const std::size_t n = x.shape().back();
  if (gain.numel() != n || bias.numel() != n) dimension_error("layer_norm", x.shape(), gain.shape());
  const std::size_t rows = x.numel() / n;
  const auto v = x.values();
  const auto gv = gain.values();
  const auto bv = bias.values();
  std::vector<T> out(v.size());
  std::vector<T> xhat(v.size());
  std::vector<T> rstd(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const T* xr = v.data() + r * n;
    T mean = 0;
    for (std::size_t j = 0; j < n; ++j) mean += xr[j];
    mean /= T(n);
    T var = 0;
    for (std::size_t j = 0; j < n; ++j) var += (xr[j] - mean) * (xr[j] - mean);
    var /= T(n);
    rstd[r] = T(1) / std::sqrt(var + eps);
    for (std::size_t j = 0; j < n; ++j) {
      const T h = (xr[j] - mean) * rstd[r];
      xhat[r * n + j] = h;
      out[r * n + j] = h * gv[j] + bv[j];
    }
  }
  const NodeId ix = x.id(), ig = gain.id(), ib = bias.id();
  return x.graph().record(
      OpKind::kLayerNorm, x.shape(), std::move(out), {ix, ig, ib},
      [ix, ig, ib, rows, n, xhat = std::move(xhat), rstd = std::move(rstd)](Graph<T>& g, NodeId self) {
        const auto dout = g.grad(self);
        const auto gv = g.values(ig);
        if (g.requires_grad(ig)) {
          auto dg = g.grad_buffer(ig);
          for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t j = 0; j < n; ++j) dg[j] += dout[r * n + j] * xhat[r * n + j];
          }
        }
        if (g.requires_grad(ib)) {
          auto db = g.grad_buffer(ib);
          for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t j = 0; j < n; ++j) db[j] += dout[r * n + j];
          }
        }
        if (g.requires_grad(ix)) {
          auto dx = g.grad_buffer(ix);
          for (std::size_t r = 0; r < rows; ++r) {
            T mean_d = 0, mean_dh = 0;
            for (std::size_t j = 0; j < n; ++j) {
              const T d = dout[r * n + j] * gv[j];
              mean_d += d;
              mean_dh += d * xhat[r * n + j];
            }
            mean_d /= T(n);
            mean_dh /= T(n);
            for (std::size_t j = 0; j < n; ++j) {
              const T d = dout[r * n + j] * gv[j];
              dx[r * n + j] += rstd[r] * (d - mean_d - xhat[r * n + j] * mean_dh);
            }
          }
        }
      });
}

template <typename T>
Tensor<T> gather_rows(const Tensor<T>& table, std::span<const std::size_t> ids) {
  if (table.rank() != 2) throw DimensionError("gather_rows: table must be a matrix, got " + to_string(table.shape()));
  if (ids.empty()) throw DimensionError("gather_rows: empty id list");
  const std::size_t rows = table.dim(0), width = table.dim(1);
  const auto v = table.values();
  std::vector<T> out(ids.size() * width);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= rows) {
      throw DimensionError("gather_rows: id " + std::to_string(ids[i]) + " out of range for table " +
                           to_string(table.shape()));
    }
    std::copy_n(v.data() + ids[i] * width, width, out.data() + i * width);
  }
  const NodeId it = table.id();
  std::vector<std::size_t> saved(ids.begin(), ids.end());
  return table.graph().record(OpKind::kGather, {ids.size(), width}, std::move(out), {it},
                              [it, width, saved = std::move(saved)](Graph<T>& g, NodeId self) {
                                const auto dout = g.grad(self);
                                auto dt = g.grad_buffer(it);
                                for (std::size_t i = 0; i < saved.size(); ++i) {
                                  T* dst = dt.data() + saved[i] * width;
                                  const T* src = dout.data() + i * width;
                                  for (std::size_t j = 0; j < width; ++j) dst[j] += src[j];
                                }
                              });
}

template <typename T>
Tensor<T> sum(const Tensor<T>& a) {
  T total = 0;
  for (T v : a.values()) total += v;
  const NodeId ia = a.id();
  return a.graph().record(OpKind::kSum, {1}, {total}, {ia}, [ia](Graph<T>& g, NodeId self) {
    const T d = g.grad(self)[0];
    for (auto& v : g.grad_buffer(ia)) v += d;
  });
}

template <typename T>
Tensor<T> bce_loss(const Tensor<T>& probs, const Tensor<T>& target) {
  require_same_graph(probs, target, "bce_loss");
  if (probs.numel() != target.numel() || probs.numel() == 0) {
    dimension_error("bce_loss", probs.shape(), target.shape());
  }
  const std::size_t c = probs.numel();
  const T lo = T(kProbabilityClamp), hi = T(1) - T(kProbabilityClamp);
  const auto p = probs.values();
  const auto t = target.values();
  T total = 0;
  for (std::size_t i = 0; i < c; ++i) {
    const T pc = std::clamp(p[i], lo, hi);
    total -= t[i] * std::log(pc) + (T(1) - t[i]) * std::log(T(1) - pc);
  }
  const NodeId ip = probs.id(), it = target.id();
  return probs.graph().record(
      OpKind::kBceLoss, {1}, {total / T(c)}, {ip, it}, [ip, it, c, lo, hi](Graph<T>& g, NodeId self) {
        const T d = g.grad(self)[0] / T(c);
        const auto p = g.values(ip);
        const auto t = g.values(it);
        if (g.requires_grad(ip)) {
          auto dp = g.grad_buffer(ip);
          for (std::size_t i = 0; i < c; ++i) {
            if (p[i] < lo || p[i] > hi) continue;
            dp[i] += d * (-t[i] / p[i] + (T(1) - t[i]) / (T(1) - p[i]));
          }
        }
        if (g.requires_grad(it)) {
          auto dt = g.grad_buffer(it);
          for (std::size_t i = 0; i < c; ++i) {
            const T pc = std::clamp(p[i], lo, hi);
            dt[i] += d * (std::log(T(1) - pc) - std::log(pc));
          }
        }
      });
}

#define GATEDOC_INSTANTIATE_OPS(T)                                                              \
  template T stable_sigmoid<T>(T);                                                              \
  template Tensor<T> matmul<T>(const Tensor<T>&, const Tensor<T>&);                             \
  template Tensor<T> transpose<T>(const Tensor<T>&);                                            \
  template Tensor<T> reshape<T>(const Tensor<T>&, Shape);                                       \
  template Tensor<T> elementwise<T>(Elementwise, const Tensor<T>&, const Tensor<T>&);           \
  template Tensor<T> scale<T>(const Tensor<T>&, T);                                             \
  template Tensor<T> activation<T>(Activation, const Tensor<T>&);                               \
  template Tensor<T> concat<T>(std::span<const Tensor<T>>, std::size_t);                        \
  template Tensor<T> slice<T>(const Tensor<T>&, std::size_t, std::size_t, std::size_t);         \
  template Tensor<T> softmax<T>(const Tensor<T>&, std::size_t);                                 \
  template Tensor<T> layer_norm<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, T);    \
  template Tensor<T> gather_rows<T>(const Tensor<T>&, std::span<const std::size_t>);            \
  template Tensor<T> sum<T>(const Tensor<T>&);                                                  \
  template Tensor<T> bce_loss<T>(const Tensor<T>&, const Tensor<T>&);

GATEDOC_INSTANTIATE_OPS(float)
GATEDOC_INSTANTIATE_OPS(double)

#undef GATEDOC_INSTANTIATE_OPS

}  // namespace gatedoc::ad
