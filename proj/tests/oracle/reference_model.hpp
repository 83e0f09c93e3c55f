#pragma once

// Straight-line double-precision transcription of the classifier, written
// directly against raw parameter arrays. It deliberately avoids the autodiff
// engine and the model code so that agreement between the two is evidence.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gatedoc/autodiff/parameters.hpp"
#include "gatedoc/model/config.hpp"
#include "gatedoc/text/document.hpp"

namespace oracle {

struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> v;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
};

struct ReferenceOutput {
  std::vector<double> probabilities;
  std::vector<double> gate_scores;
  double loss = 0.0;
};

class ReferenceModel {
 public:
  ReferenceModel(const gatedoc::model::ModelConfig& config, const gatedoc::ad::ParameterSet<double>& params)
      : c_(config), p_(params) {}

  ReferenceOutput run(const gatedoc::text::TokenizedDocument& doc) const {
    const std::size_t len = doc.token_stream.size();
    const std::size_t d = c_.hidden_dim;

    // Token + position embeddings, projected.
    const Matrix tok = param("encoder.token_embedding");
    const Matrix pos = param("encoder.position_embedding");
    Matrix x(len, c_.token_dim);
    for (std::size_t i = 0; i < len; ++i) {
      for (std::size_t j = 0; j < c_.token_dim; ++j) x(i, j) = tok(doc.token_stream[i], j) + pos(i, j);
    }
    Matrix h = affine(x, "encoder.input_projection");

    // Shared pre-norm layer applied n_layers times.
    const std::size_t heads = c_.n_heads;
    const std::size_t hd = d / heads;
    for (std::size_t layer = 0; layer < c_.n_layers; ++layer) {
      const Matrix a = layer_norm(h, "encoder.layer.norm1");
      const Matrix q = affine(a, "encoder.layer.attention.query");
      const Matrix k = product(a, param("encoder.layer.attention.key.weight"));
      const Matrix v = affine(a, "encoder.layer.attention.value");
      Matrix merged(len, d);
      for (std::size_t head = 0; head < heads; ++head) {
        for (std::size_t i = 0; i < len; ++i) {
          std::vector<double> score(len);
          double top = -1e300;
          for (std::size_t j = 0; j < len; ++j) {
            double s = 0;
            for (std::size_t t = 0; t < hd; ++t) s += q(i, head * hd + t) * k(j, head * hd + t);
            score[j] = s / std::sqrt(static_cast<double>(hd));
            top = std::max(top, score[j]);
          }
          double z = 0;
          for (auto& s : score) z += (s = std::exp(s - top));
          for (std::size_t t = 0; t < hd; ++t) {
            double acc = 0;
            for (std::size_t j = 0; j < len; ++j) acc += score[j] / z * v(j, head * hd + t);
            merged(i, head * hd + t) = acc;
          }
        }
      }
      const Matrix attn = affine(merged, "encoder.layer.attention.output");
      for (std::size_t i = 0; i < h.v.size(); ++i) h.v[i] += attn.v[i];
      const Matrix b = layer_norm(h, "encoder.layer.norm2");
      Matrix inner = affine(b, "encoder.layer.ffn.inner");
      for (auto& e : inner.v) e = std::max(0.0, e);
      const Matrix outer = affine(inner, "encoder.layer.ffn.outer");
      for (std::size_t i = 0; i < h.v.size(); ++i) h.v[i] += outer.v[i];
    }

    // Separator rows, optionally extended with class similarities.
    const std::size_t n = doc.sep_positions.size();
    const bool sent_sim = c_.variant.sentence_class_similarity;
    const std::size_t width = d + (sent_sim ? c_.n_classes : 0);
    Matrix e(n, width);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t j = 0; j < d; ++j) e(s, j) = h(doc.sep_positions[s], j);
    }
    if (sent_sim) {
      Matrix rows(n, d);
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t j = 0; j < d; ++j) rows(s, j) = e(s, j);
      }
      const Matrix sim = class_similarity(rows, "sentence_fnn");
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t k = 0; k < c_.n_classes; ++k) e(s, d + k) = sim(s, k);
      }
    }

    // Gate.
    ReferenceOutput out;
    if (c_.variant.gate) {
      const Matrix wg = param("gate.weight");
      for (std::size_t s = 0; s < n; ++s) {
        if (c_.gate_mode == gatedoc::model::GateMode::kScalar) {
          double a = 0;
          for (std::size_t j = 0; j < width; ++j) a += wg(0, j) * e(s, j);
          const double g = sigmoid(a);
          for (std::size_t j = 0; j < width; ++j) e(s, j) *= g;
          out.gate_scores.push_back(g);
        } else {
          std::vector<double> g(width);
          double mean = 0;
          for (std::size_t r = 0; r < width; ++r) {
            double a = 0;
            for (std::size_t j = 0; j < width; ++j) a += wg(r, j) * e(s, j);
            g[r] = sigmoid(a);
            mean += g[r];
          }
          for (std::size_t j = 0; j < width; ++j) e(s, j) *= g[j];
          out.gate_scores.push_back(mean / static_cast<double>(width));
        }
      }
    } else {
      out.gate_scores.assign(n, 0.5);
    }

    // GRU encoder from a zero state.
    const std::size_t gd = c_.gru_dim;
    std::vector<double> state(gd, 0.0);
    Matrix enc(n, gd);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<double> input(e.v.begin() + static_cast<std::ptrdiff_t>(s * width),
                                e.v.begin() + static_cast<std::ptrdiff_t>((s + 1) * width));
      state = gru("encoder_gru", input, state);
      for (std::size_t j = 0; j < gd; ++j) enc(s, j) = state[j];
    }

    // One-step attention decoder.
    const Matrix bw = param("bridge.weight");
    const Matrix bb = param("bridge.bias");
    std::vector<double> dec0(gd);
    for (std::size_t j = 0; j < gd; ++j) {
      double a = bb.v[j];
      for (std::size_t t = 0; t < gd; ++t) a += enc(n - 1, t) * bw(t, j);
      dec0[j] = std::tanh(a);
    }
    std::vector<double> att(n);
    double top = -1e300;
    for (std::size_t s = 0; s < n; ++s) {
      double a = 0;
      for (std::size_t j = 0; j < gd; ++j) a += enc(s, j) * dec0[j];
      att[s] = a;
      top = std::max(top, a);
    }
    double z = 0;
    for (auto& a : att) z += (a = std::exp(a - top));
    std::vector<double> dec_in = param("start_symbol").v;
    for (std::size_t j = 0; j < gd; ++j) {
      double acc = 0;
      for (std::size_t s = 0; s < n; ++s) acc += att[s] / z * enc(s, j);
      dec_in.push_back(acc);
    }
    const std::vector<double> doc_emb = gru("decoder_gru", dec_in, dec0);

    // Classifier head.
    std::vector<double> features = doc_emb;
    if (c_.variant.document_class_similarity) {
      Matrix row(1, gd);
      row.v = doc_emb;
      const Matrix sim = class_similarity(row, "document_fnn");
      features.insert(features.end(), sim.v.begin(), sim.v.end());
    }
    Matrix f(1, features.size());
    f.v = features;
    Matrix hidden = affine(f, "output.hidden");
    for (auto& v : hidden.v) v = std::max(0.0, v);
    const Matrix logits = affine(hidden, "output.output");
    for (double l : logits.v) out.probabilities.push_back(sigmoid(l));

    if (doc.label < out.probabilities.size()) {
      double total = 0;
      for (std::size_t k = 0; k < out.probabilities.size(); ++k) {
        const double p = std::min(std::max(out.probabilities[k], 1e-7), 1.0 - 1e-7);
        const double t = k == doc.label ? 1.0 : 0.0;
        total -= t * std::log(p) + (1 - t) * std::log(1 - p);
      }
      out.loss = total / static_cast<double>(out.probabilities.size());
    }
    return out;
  }

 private:
  static double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

  Matrix param(const std::string& name) const {
    const auto& p = p_.at(name);
    Matrix m(p.shape.size() == 2 ? p.shape[0] : 1, p.shape.back());
    m.v = p.value;
    return m;
  }

  static Matrix product(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
      for (std::size_t j = 0; j < b.cols; ++j) {
        double acc = 0;
        for (std::size_t t = 0; t < a.cols; ++t) acc += a(i, t) * b(t, j);
        out(i, j) = acc;
      }
    }
    return out;
  }

  Matrix affine(const Matrix& x, const std::string& prefix) const {
    Matrix out = product(x, param(prefix + ".weight"));
    const Matrix b = param(prefix + ".bias");
    for (std::size_t i = 0; i < out.rows; ++i) {
      for (std::size_t j = 0; j < out.cols; ++j) out(i, j) += b.v[j];
    }
    return out;
  }

  Matrix layer_norm(const Matrix& x, const std::string& prefix) const {
    const Matrix gain = param(prefix + ".gain");
    const Matrix bias = param(prefix + ".bias");
    Matrix out(x.rows, x.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
      double mean = 0, var = 0;
      for (std::size_t j = 0; j < x.cols; ++j) mean += x(i, j);
      mean /= static_cast<double>(x.cols);
      for (std::size_t j = 0; j < x.cols; ++j) var += (x(i, j) - mean) * (x(i, j) - mean);
      var /= static_cast<double>(x.cols);
      for (std::size_t j = 0; j < x.cols; ++j) {
        out(i, j) = (x(i, j) - mean) / std::sqrt(var + 1e-5) * gain.v[j] + bias.v[j];
      }
    }
    return out;
  }

  // W_c applied to a two-layer ReLU network of the rows.
  Matrix class_similarity(const Matrix& rows, const std::string& fnn) const {
    Matrix a = affine(rows, fnn + ".hidden");
    for (auto& v : a.v) v = std::max(0.0, v);
    Matrix b = affine(a, fnn + ".output");
    for (auto& v : b.v) v = std::max(0.0, v);
    const Matrix wc = param("class_matrix");
    Matrix out(rows.rows, c_.n_classes);
    for (std::size_t i = 0; i < rows.rows; ++i) {
      for (std::size_t k = 0; k < c_.n_classes; ++k) {
        double acc = 0;
        for (std::size_t j = 0; j < wc.cols; ++j) acc += b(i, j) * wc(k, j);
        out(i, k) = acc;
      }
    }
    return out;
  }

  std::vector<double> gru(const std::string& prefix, const std::vector<double>& x,
                          const std::vector<double>& hprev) const {
    const std::size_t gd = hprev.size();
    auto pre = [&](const std::string& gate, const std::vector<double>& hin) {
      const Matrix wi = param(prefix + "." + gate + ".input");
      const Matrix wh = param(prefix + "." + gate + ".hidden");
      const Matrix b = param(prefix + "." + gate + ".bias");
      std::vector<double> out(gd);
      for (std::size_t j = 0; j < gd; ++j) {
        double a = b.v[j];
        for (std::size_t t = 0; t < x.size(); ++t) a += x[t] * wi(t, j);
        for (std::size_t t = 0; t < gd; ++t) a += hin[t] * wh(t, j);
        out[j] = a;
      }
      return out;
    };
    const auto zu = pre("update", hprev);
    const auto ru = pre("reset", hprev);
    std::vector<double> reset_state(gd);
    for (std::size_t j = 0; j < gd; ++j) reset_state[j] = sigmoid(ru[j]) * hprev[j];
    const auto cu = pre("candidate", reset_state);
    std::vector<double> out(gd);
    for (std::size_t j = 0; j < gd; ++j) {
      const double zj = sigmoid(zu[j]);
      out[j] = (1 - zj) * hprev[j] + zj * std::tanh(cu[j]);
    }
    return out;
  }

  gatedoc::model::ModelConfig c_;
  const gatedoc::ad::ParameterSet<double>& p_;
};

}  // namespace oracle
