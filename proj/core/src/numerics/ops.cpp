/*
 * Copyright 2026 The SpecSem Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "specsem/numerics/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "specsem/errors.hpp"
#include "specsem/numerics/tape.hpp"

namespace specsem::numerics {

namespace {

bool tracking(std::initializer_list<const Tensor*> inputs) {
  if (Tape::active() == nullptr) return false;
  return std::any_of(inputs.begin(), inputs.end(),
                     [](const Tensor* t) { return t->requires_grad(); });
}

// Wraps freshly computed data into a tensor, enforcing finiteness and
// registering the backward rule when gradients are being tracked.
Tensor finish(const char* op, Shape shape, std::vector<double> data, bool track,
              Tape::BackwardFn backward) {
  for (double v : data) {
    if (!std::isfinite(v)) {
      throw NumericError(std::string(op) + " produced a non-finite value");
    }
  }
  Tensor out(std::move(shape), std::move(data), track);
  if (track) Tape::active()->record(out.node(), std::move(backward));
  return out;
}

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " +
                         shape_string(a.shape()) + " vs " +
                         shape_string(b.shape()));
  }
}

void accumulate(const std::shared_ptr<TensorNode>& node,
                std::span<const double> g) {
  if (node->requires_grad) node->accumulate_grad(g);
}

// c[m,n] += a[m,k] * b[k,n]
void gemm_acc(std::size_t m, std::size_t k, std::size_t n, const double* a,
              const double* b, double* c) {
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    const double* arow = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

std::vector<double> transposed(std::span<const double> a, std::size_t rows,
                               std::size_t cols) {
  std::vector<double> t(a.size());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) t[j * rows + i] = a[i * cols + j];
  return t;
}

template <typename Fwd, typename Deriv>
Tensor unary(const char* op, const Tensor& a, Fwd fwd, Deriv deriv) {
  const auto in = a.data();
  std::vector<double> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = fwd(in[i]);
  const bool track = tracking({&a});
  auto an = a.node();
  return finish(op, a.shape(), std::move(out), track,
                [an, deriv](const TensorNode& o) {
                  if (!an->requires_grad) return;
                  std::vector<double> g(o.grad.size());
                  for (std::size_t i = 0; i < g.size(); ++i)
                    g[i] = o.grad[i] * deriv(an->data[i], o.data[i]);
                  an->accumulate_grad(g);
                });
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  const std::size_t m = a.rows(), k = a.cols();
  if (b.rank() != 2 || b.dim(0) != k) {
    throw DimensionError("matmul: inner extents disagree, " +
                         shape_string(a.shape()) + " x " +
                         shape_string(b.shape()));
  }
  const std::size_t n = b.dim(1);
  std::vector<double> c(m * n, 0.0);
  gemm_acc(m, k, n, a.data().data(), b.data().data(), c.data());
  const bool track = tracking({&a, &b});
  auto an = a.node(), bn = b.node();
  return finish("matmul", {m, n}, std::move(c), track,
                [an, bn, m, k, n](const TensorNode& o) {
                  if (an->requires_grad) {
                    // dA = dC * B^T
                    const auto bt = transposed(bn->data, k, n);
                    std::vector<double> ga(m * k, 0.0);
                    gemm_acc(m, n, k, o.grad.data(), bt.data(), ga.data());
                    an->accumulate_grad(ga);
                  }
                  if (bn->requires_grad) {
                    // dB = A^T * dC
                    const auto at = transposed(an->data, m, k);
                    std::vector<double> gb(k * n, 0.0);
                    gemm_acc(k, m, n, at.data(), o.grad.data(), gb.data());
                    bn->accumulate_grad(gb);
                  }
                });
}

Tensor transpose(const Tensor& a) {
  const std::size_t r = a.rows(), c = a.cols();
  auto out = transposed(a.data(), r, c);
  const bool track = tracking({&a});
  auto an = a.node();
  return finish("transpose", {c, r}, std::move(out), track,
                [an, r, c](const TensorNode& o) {
                  accumulate(an, transposed(o.grad, c, r));
                });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape("add", a, b);
  const auto x = a.data(), y = b.data();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + y[i];
  const bool track = tracking({&a, &b});
  auto an = a.node(), bn = b.node();
  return finish("add", a.shape(), std::move(out), track,
                [an, bn](const TensorNode& o) {
                  accumulate(an, o.grad);
                  accumulate(bn, o.grad);
                });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape("sub", a, b);
  const auto x = a.data(), y = b.data();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] - y[i];
  const bool track = tracking({&a, &b});
  auto an = a.node(), bn = b.node();
  return finish("sub", a.shape(), std::move(out), track,
                [an, bn](const TensorNode& o) {
                  accumulate(an, o.grad);
                  if (bn->requires_grad) {
                    std::vector<double> g(o.grad.size());
                    for (std::size_t i = 0; i < g.size(); ++i) g[i] = -o.grad[i];
                    bn->accumulate_grad(g);
                  }
                });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape("mul", a, b);
  const auto x = a.data(), y = b.data();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] * y[i];
  const bool track = tracking({&a, &b});
  auto an = a.node(), bn = b.node();
  return finish("mul", a.shape(), std::move(out), track,
                [an, bn](const TensorNode& o) {
                  const std::size_t n = o.grad.size();
                  if (an->requires_grad) {
                    std::vector<double> g(n);
                    for (std::size_t i = 0; i < n; ++i)
                      g[i] = o.grad[i] * bn->data[i];
                    an->accumulate_grad(g);
                  }
                  if (bn->requires_grad) {
                    std::vector<double> g(n);
                    for (std::size_t i = 0; i < n; ++i)
                      g[i] = o.grad[i] * an->data[i];
                    bn->accumulate_grad(g);
                  }
                });
}

Tensor scale(const Tensor& a, double factor) {
  return unary(
      "scale", a, [factor](double x) { return factor * x; },
      [factor](double, double) { return factor; });
}

Tensor sigmoid(const Tensor& a) {
  return unary(
      "sigmoid", a,
      [](double x) {
        if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor gelu(const Tensor& a) {
  return unary(
      "gelu", a,
      [](double x) { return 0.5 * x * (1.0 + std::erf(x * std::numbers::sqrt2 / 2)); },
      [](double x, double) {
        const double cdf = 0.5 * (1.0 + std::erf(x * std::numbers::sqrt2 / 2));
        const double pdf =
            std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
        return cdf + x * pdf;
      });
}

Tensor exp(const Tensor& a) {
  return unary(
      "exp", a, [](double x) { return std::exp(x); },
      [](double, double y) { return y; });
}

Tensor log(const Tensor& a) {
  for (double v : a.data()) {
    if (!(v > 0.0)) {
      throw DomainError("log of non-positive value " + std::to_string(v));
    }
  }
  return unary(
      "log", a, [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; });
}

Tensor elementwise(ElementwiseOp op, const Tensor& a) {
  switch (op) {
    case ElementwiseOp::kSigmoid: return sigmoid(a);
    case ElementwiseOp::kGelu: return gelu(a);
    case ElementwiseOp::kExp: return exp(a);
    case ElementwiseOp::kLog: return log(a);
    default: throw ContractError("elementwise: binary op given one operand");
  }
}

Tensor elementwise(ElementwiseOp op, const Tensor& a, const Tensor& b) {
  switch (op) {
    case ElementwiseOp::kAdd: return add(a, b);
    case ElementwiseOp::kSub: return sub(a, b);
    case ElementwiseOp::kMul: return mul(a, b);
    default: throw ContractError("elementwise: unary op given two operands");
  }
}

Tensor softmax_rows(const Tensor& a) {
  const std::size_t rows = a.rows(), n = a.cols();
  const auto x = a.data();
  std::vector<double> out(x.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* xr = x.data() + r * n;
    double* yr = out.data() + r * n;
    const double mx = *std::max_element(xr, xr + n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += (yr[j] = std::exp(xr[j] - mx));
    for (std::size_t j = 0; j < n; ++j) yr[j] /= total;
  }
  const bool track = tracking({&a});
  auto an = a.node();
  return finish("softmax_rows", a.shape(), std::move(out), track,
                [an, rows, n](const TensorNode& o) {
                  if (!an->requires_grad) return;
                  std::vector<double> g(o.grad.size());
                  for (std::size_t r = 0; r < rows; ++r) {
                    const double* y = o.data.data() + r * n;
                    const double* dy = o.grad.data() + r * n;
                    double dot = 0.0;
                    for (std::size_t j = 0; j < n; ++j) dot += dy[j] * y[j];
                    for (std::size_t j = 0; j < n; ++j)
                      g[r * n + j] = y[j] * (dy[j] - dot);
                  }
                  an->accumulate_grad(g);
                });
}

Tensor layernorm(const Tensor& a, const Tensor& gamma, const Tensor& beta,
                 double eps) {
  const std::size_t rows = a.rows(), d = a.cols();
  if (gamma.numel() != d || beta.numel() != d) {
    throw DimensionError("layernorm: gamma/beta must have " +
                         std::to_string(d) + " entries");
  }
  if (!(eps > 0.0)) throw DomainError("layernorm: eps must be positive");
  const auto x = a.data(), gm = gamma.data(), bt = beta.data();
  std::vector<double> out(x.size()), xhat(x.size()), rstd(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* xr = x.data() + r * d;
    double mean = 0.0;
    for (std::size_t j = 0; j < d; ++j) mean += xr[j];
    mean /= static_cast<double>(d);
    double var = 0.0;
    for (std::size_t j = 0; j < d; ++j) var += (xr[j] - mean) * (xr[j] - mean);
    var /= static_cast<double>(d);
    rstd[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t idx = r * d + j;
      xhat[idx] = (xr[j] - mean) * rstd[r];
      out[idx] = xhat[idx] * gm[j] + bt[j];
    }
  }
  const bool track = tracking({&a, &gamma, &beta});
  auto an = a.node(), gn = gamma.node(), bn = beta.node();
  return finish(
      "layernorm", a.shape(), std::move(out), track,
      [an, gn, bn, rows, d, xhat = std::move(xhat),
       rstd = std::move(rstd)](const TensorNode& o) {
        const auto& dy = o.grad;
        if (gn->requires_grad || bn->requires_grad) {
          std::vector<double> gg(d, 0.0), gb(d, 0.0);
          for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t j = 0; j < d; ++j) {
              gg[j] += dy[r * d + j] * xhat[r * d + j];
              gb[j] += dy[r * d + j];
            }
          accumulate(gn, gg);
          accumulate(bn, gb);
        }
        if (!an->requires_grad) return;
        std::vector<double> gx(rows * d);
        const double inv_d = 1.0 / static_cast<double>(d);
        for (std::size_t r = 0; r < rows; ++r) {
          double mean_g = 0.0, mean_gx = 0.0;
          for (std::size_t j = 0; j < d; ++j) {
            const double gh = dy[r * d + j] * gn->data[j];
            mean_g += gh;
            mean_gx += gh * xhat[r * d + j];
          }
          mean_g *= inv_d;
          mean_gx *= inv_d;
          for (std::size_t j = 0; j < d; ++j) {
            const double gh = dy[r * d + j] * gn->data[j];
            gx[r * d + j] =
                rstd[r] * (gh - mean_g - xhat[r * d + j] * mean_gx);
          }
        }
        an->accumulate_grad(gx);
      });
}

Tensor add_bias(const Tensor& a, const Tensor& bias) {
  const std::size_t rows = a.rows(), n = a.cols();
  if (bias.numel() != n) {
    throw DimensionError("add_bias: bias has " + std::to_string(bias.numel()) +
                         " entries, rows have " + std::to_string(n));
  }
  const auto x = a.data(), b = bias.data();
  std::vector<double> out(x.size());
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < n; ++j) out[r * n + j] = x[r * n + j] + b[j];
  const bool track = tracking({&a, &bias});
  auto an = a.node(), bn = bias.node();
  return finish("add_bias", a.shape(), std::move(out), track,
                [an, bn, rows, n](const TensorNode& o) {
                  accumulate(an, o.grad);
                  if (bn->requires_grad) {
                    std::vector<double> g(n, 0.0);
                    for (std::size_t r = 0; r < rows; ++r)
                      for (std::size_t j = 0; j < n; ++j) g[j] += o.grad[r * n + j];
                    bn->accumulate_grad(g);
                  }
                });
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
  const std::size_t rows = a.rows(), ca = a.cols(), cb = b.cols();
  if (b.rows() != rows) {
    throw DimensionError("concat_cols: row counts differ, " +
                         shape_string(a.shape()) + " vs " +
                         shape_string(b.shape()));
  }
  const std::size_t n = ca + cb;
  std::vector<double> out(rows * n);
  const auto x = a.data(), y = b.data();
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(x.data() + r * ca, ca, out.data() + r * n);
    std::copy_n(y.data() + r * cb, cb, out.data() + r * n + ca);
  }
  const bool track = tracking({&a, &b});
  auto an = a.node(), bn = b.node();
  return finish("concat_cols", {rows, n}, std::move(out), track,
                [an, bn, rows, ca, cb, n](const TensorNode& o) {
                  if (an->requires_grad) {
                    std::vector<double> g(rows * ca);
                    for (std::size_t r = 0; r < rows; ++r)
                      std::copy_n(o.grad.data() + r * n, ca, g.data() + r * ca);
                    an->accumulate_grad(g);
                  }
                  if (bn->requires_grad) {
                    std::vector<double> g(rows * cb);
                    for (std::size_t r = 0; r < rows; ++r)
                      std::copy_n(o.grad.data() + r * n + ca, cb,
                                  g.data() + r * cb);
                    bn->accumulate_grad(g);
                  }
                });
}

Tensor concat_rows(const Tensor& a, const Tensor& b) {
  const std::size_t n = a.cols();
  if (b.cols() != n) {
    throw DimensionError("concat_rows: column counts differ, " +
                         shape_string(a.shape()) + " vs " +
                         shape_string(b.shape()));
  }
  const std::size_t ra = a.rows(), rb = b.rows();
  std::vector<double> out(a.data().begin(), a.data().end());
  out.insert(out.end(), b.data().begin(), b.data().end());
  const bool track = tracking({&a, &b});
  auto an = a.node(), bn = b.node();
  return finish("concat_rows", {ra + rb, n}, std::move(out), track,
                [an, bn, ra, n](const TensorNode& o) {
                  const std::span<const double> g(o.grad);
                  accumulate(an, g.subspan(0, ra * n));
                  accumulate(bn, g.subspan(ra * n));
                });
}

Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end) {
  const std::size_t rows = a.rows(), n = a.cols();
  if (begin >= end || end > n) {
    throw DimensionError("slice_cols: bad range [" + std::to_string(begin) +
                         "," + std::to_string(end) + ") for " +
                         std::to_string(n) + " columns");
  }
  const std::size_t w = end - begin;
  std::vector<double> out(rows * w);
  const auto x = a.data();
  for (std::size_t r = 0; r < rows; ++r)
    std::copy_n(x.data() + r * n + begin, w, out.data() + r * w);
  const bool track = tracking({&a});
  auto an = a.node();
  return finish("slice_cols", {rows, w}, std::move(out), track,
                [an, rows, n, begin, w](const TensorNode& o) {
                  if (!an->requires_grad) return;
                  std::vector<double> g(rows * n, 0.0);
                  for (std::size_t r = 0; r < rows; ++r)
                    std::copy_n(o.grad.data() + r * w, w,
                                g.data() + r * n + begin);
                  an->accumulate_grad(g);
                });
}

Tensor slice_rows(const Tensor& a, std::size_t begin, std::size_t end) {
  const std::size_t rows = a.rows(), n = a.cols();
  if (begin >= end || end > rows) {
    throw DimensionError("slice_rows: bad range [" + std::to_string(begin) +
                         "," + std::to_string(end) + ") for " +
                         std::to_string(rows) + " rows");
  }
  std::vector<double> out(a.data().begin() + begin * n,
                          a.data().begin() + end * n);
  const bool track = tracking({&a});
  auto an = a.node();
  return finish("slice_rows", {end - begin, n}, std::move(out), track,
                [an, rows, n, begin](const TensorNode& o) {
                  if (!an->requires_grad) return;
                  std::vector<double> g(rows * n, 0.0);
                  std::copy(o.grad.begin(), o.grad.end(), g.begin() + begin * n);
                  an->accumulate_grad(g);
                });
}

Tensor mean_rows(const Tensor& a) {
  const std::size_t rows = a.rows(), n = a.cols();
  std::vector<double> out(n, 0.0);
  const auto x = a.data();
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < n; ++j) out[j] += x[r * n + j];
  for (auto& v : out) v /= static_cast<double>(rows);
  const bool track = tracking({&a});
  auto an = a.node();
  return finish("mean_rows", {1, n}, std::move(out), track,
                [an, rows, n](const TensorNode& o) {
                  if (!an->requires_grad) return;
                  std::vector<double> g(rows * n);
                  const double inv = 1.0 / static_cast<double>(rows);
                  for (std::size_t r = 0; r < rows; ++r)
                    for (std::size_t j = 0; j < n; ++j) g[r * n + j] = o.grad[j] * inv;
                  an->accumulate_grad(g);
                });
}

Tensor sum(const Tensor& a) {
  double total = 0.0;
  for (double v : a.data()) total += v;
  const bool track = tracking({&a});
  auto an = a.node();
  return finish("sum", {1}, {total}, track, [an](const TensorNode& o) {
    if (!an->requires_grad) return;
    an->accumulate_grad(std::vector<double>(an->data.size(), o.grad[0]));
  });
}

Tensor reshape(const Tensor& a, Shape shape) {
  if (shape_numel(shape) != a.numel()) {
    throw DimensionError("reshape: cannot view " + shape_string(a.shape()) +
                         " as " + shape_string(shape));
  }
  std::vector<double> out(a.data().begin(), a.data().end());
  const bool track = tracking({&a});
  auto an = a.node();
  return finish("reshape", std::move(shape), std::move(out), track,
                [an](const TensorNode& o) { accumulate(an, o.grad); });
}

Tensor bce_with_logits(const Tensor& logit, double target) {
  if (logit.numel() != 1) {
    throw DimensionError("bce_with_logits expects a scalar logit");
  }
  const double z = logit.data()[0];
  const double loss = std::max(z, 0.0) - z * target + std::log1p(std::exp(-std::abs(z)));
  const bool track = tracking({&logit});
  auto ln = logit.node();
  return finish("bce_with_logits", {1}, {loss}, track,
                [ln, target](const TensorNode& o) {
                  if (!ln->requires_grad) return;
                  const double z = ln->data[0];
                  const double p = z >= 0 ? 1.0 / (1.0 + std::exp(-z))
                                          : std::exp(z) / (1.0 + std::exp(z));
                  const double g[1] = {o.grad[0] * (p - target)};
                  ln->accumulate_grad(g);
                });
}

Tensor cross_entropy(const Tensor& logits, std::size_t label) {
  const std::size_t n = logits.numel();
  if (label >= n) throw DimensionError("cross_entropy: label out of range");
  const auto x = logits.data();
  const double mx = *std::max_element(x.begin(), x.end());
  double total = 0.0;
  for (double v : x) total += std::exp(v - mx);
  const double log_z = mx + std::log(total);
  const bool track = tracking({&logits});
  auto ln = logits.node();
  return finish("cross_entropy", {1}, {log_z - x[label]}, track,
                [ln, label, log_z](const TensorNode& o) {
                  if (!ln->requires_grad) return;
                  std::vector<double> g(ln->data.size());
                  for (std::size_t j = 0; j < g.size(); ++j)
                    g[j] = o.grad[0] * (std::exp(ln->data[j] - log_z) -
                                        (j == label ? 1.0 : 0.0));
                  ln->accumulate_grad(g);
                });
}

}  // namespace specsem::numerics

namespace specsem::numerics {

Tensor gather(const Tensor& a, const std::vector<std::size_t>& indices,
              Shape shape) {
  if (shape_numel(shape) != indices.size()) {
    throw DimensionError("gather: " + std::to_string(indices.size()) +
                         " indices for shape " + shape_string(shape));
  }
  const auto x = a.data();
  std::vector<double> out(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= x.size()) throw DimensionError("gather: index out of range");
    out[i] = x[indices[i]];
  }
  const bool track = Tape::active() != nullptr && a.requires_grad();
  auto an = a.node();
  return finish("gather", std::move(shape), std::move(out), track,
                [an, indices](const TensorNode& o) {
                  if (!an->requires_grad) return;
                  std::vector<double> g(an->data.size(), 0.0);
                  for (std::size_t i = 0; i < indices.size(); ++i)
                    g[indices[i]] += o.grad[i];
                  an->accumulate_grad(g);
                });
}

}  // namespace specsem::numerics
