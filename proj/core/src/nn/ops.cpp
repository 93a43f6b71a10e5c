// Copyright 2026 The HDR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "hdr/nn/ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <Eigen/Core>

#include "hdr/core/error.hpp"

namespace hdr::nn {
namespace {

using MatR = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapR = Eigen::Map<MatR>;
using CMapR = Eigen::Map<const MatR>;
using StridedMapR = Eigen::Map<MatR, 0, Eigen::OuterStride<>>;
using CStridedMapR = Eigen::Map<const MatR, 0, Eigen::OuterStride<>>;

// Target patch-matrix size (doubles / 64) for one band of conv output rows.
constexpr int kBandColumns = 4096;

// Gradient buffer of parent i, or null when that parent is a constant.
std::vector<double>* pgrad(Node& self, std::size_t i) {
  Node& p = *self.parents[i];
  return p.requires_grad ? &p.ensure_grad() : nullptr;
}

const std::vector<double>& pval(Node& self, std::size_t i) { return self.parents[i]->value; }

void require_same(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ShapeMismatch(std::string(op) + ": " + shape_string(a.shape()) + " vs " +
                        shape_string(b.shape()));
  }
}

void require_rank(const Tensor& x, int rank, const char* op) {
  if (x.ndim() != rank) {
    throw ShapeMismatch(std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
                        shape_string(x.shape()));
  }
}

template <class F, class G>
Tensor unary(const Tensor& x, F f, G dfdx) {
  const auto in = x.data();
  std::vector<double> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = f(in[i]);
  return make_result(x.shape(), std::move(out), {x}, [dfdx](Node& self) {
    auto* g = pgrad(self, 0);
    const auto& xv = pval(self, 0);
    for (std::size_t i = 0; i < xv.size(); ++i) (*g)[i] += self.grad[i] * dfdx(xv[i], self.value[i]);
  });
}

double stable_sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double stable_softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  require_same(a, b, "add");
  std::vector<double> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] + b.data()[i];
  return make_result(a.shape(), std::move(out), {a, b}, [](Node& self) {
    for (std::size_t k = 0; k < 2; ++k) {
      if (auto* g = pgrad(self, k)) {
        for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += self.grad[i];
      }
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same(a, b, "sub");
  std::vector<double> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] - b.data()[i];
  return make_result(a.shape(), std::move(out), {a, b}, [](Node& self) {
    if (auto* g = pgrad(self, 0)) {
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += self.grad[i];
    }
    if (auto* g = pgrad(self, 1)) {
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] -= self.grad[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same(a, b, "mul");
  std::vector<double> out(a.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] * b.data()[i];
  return make_result(a.shape(), std::move(out), {a, b}, [](Node& self) {
    const auto& av = pval(self, 0);
    const auto& bv = pval(self, 1);
    if (auto* g = pgrad(self, 0)) {
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += self.grad[i] * bv[i];
    }
    if (auto* g = pgrad(self, 1)) {
      for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += self.grad[i] * av[i];
    }
  });
}

Tensor scale(const Tensor& a, double s) {
  return unary(a, [s](double v) { return v * s; }, [s](double, double) { return s; });
}

Tensor add_scalar(const Tensor& a, double s) {
  return unary(a, [s](double v) { return v + s; }, [](double, double) { return 1.0; });
}

Tensor relu(const Tensor& x) {
  return unary(x, [](double v) { return v > 0 ? v : 0.0; },
               [](double v, double) { return v > 0 ? 1.0 : 0.0; });
}

Tensor leaky_relu(const Tensor& x, double slope) {
  return unary(x, [slope](double v) { return v > 0 ? v : slope * v; },
               [slope](double v, double) { return v > 0 ? 1.0 : slope; });
}

Tensor sigmoid(const Tensor& x) {
  return unary(x, stable_sigmoid, [](double, double y) { return y * (1.0 - y); });
}

Tensor gelu(const Tensor& x) {
  constexpr double k = 0.7978845608028654;  // sqrt(2 / pi)
  constexpr double c = 0.044715;
  return unary(
      x, [](double v) { return 0.5 * v * (1.0 + std::tanh(k * (v + c * v * v * v))); },
      [](double v, double) {
        const double u = k * (v + c * v * v * v);
        const double t = std::tanh(u);
        return 0.5 * (1.0 + t) + 0.5 * v * (1.0 - t * t) * k * (1.0 + 3.0 * c * v * v);
      });
}

Tensor softplus(const Tensor& x) {
  return unary(x, stable_softplus, [](double v, double) { return stable_sigmoid(v); });
}

Tensor sum(const Tensor& x) {
  const auto d = x.data();
  const double s = std::accumulate(d.begin(), d.end(), 0.0);
  return make_result({1}, {s}, {x}, [](Node& self) {
    auto* g = pgrad(self, 0);
    for (double& v : *g) v += self.grad[0];
  });
}

Tensor mean(const Tensor& x) {
  const auto d = x.data();
  const double n = static_cast<double>(d.size());
  const double s = std::accumulate(d.begin(), d.end(), 0.0) / n;
  return make_result({1}, {s}, {x}, [n](Node& self) {
    auto* g = pgrad(self, 0);
    for (double& v : *g) v += self.grad[0] / n;
  });
}

Tensor sum_squares(const Tensor& x) {
  double s = 0.0;
  for (double v : x.data()) s += v * v;
  return make_result({1}, {s}, {x}, [](Node& self) {
    auto* g = pgrad(self, 0);
    const auto& xv = pval(self, 0);
    for (std::size_t i = 0; i < xv.size(); ++i) (*g)[i] += 2.0 * xv[i] * self.grad[0];
  });
}

Tensor reshape(const Tensor& x, Shape shape) {
  if (numel(shape) != x.numel()) {
    throw ShapeMismatch("reshape: " + shape_string(x.shape()) + " -> " + shape_string(shape));
  }
  std::vector<double> out(x.data().begin(), x.data().end());
  return make_result(std::move(shape), std::move(out), {x}, [](Node& self) {
    auto* g = pgrad(self, 0);
    for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += self.grad[i];
  });
}

Tensor permute(const Tensor& x, const std::vector<int>& perm) {
  const int r = x.ndim();
  if (static_cast<int>(perm.size()) != r || r > 4) throw ShapeMismatch("permute: bad permutation");
  // Pad to rank 4 with leading unit axes.
  std::array<int, 4> in_dims{1, 1, 1, 1};
  std::array<int, 4> p{0, 1, 2, 3};
  const int off = 4 - r;
  for (int i = 0; i < r; ++i) {
    in_dims[off + i] = x.shape()[i];
    p[off + i] = perm[i] + off;
  }
  std::array<std::size_t, 4> in_stride{};
  in_stride[3] = 1;
  for (int i = 2; i >= 0; --i) in_stride[i] = in_stride[i + 1] * in_dims[i + 1];
  std::array<int, 4> out_dims{};
  for (int i = 0; i < 4; ++i) out_dims[i] = in_dims[p[i]];
  Shape out_shape(out_dims.begin() + off, out_dims.end());

  std::vector<std::size_t> src_index(x.numel());
  std::size_t k = 0;
  for (int a = 0; a < out_dims[0]; ++a)
    for (int b = 0; b < out_dims[1]; ++b)
      for (int c = 0; c < out_dims[2]; ++c)
        for (int d = 0; d < out_dims[3]; ++d)
          src_index[k++] = a * in_stride[p[0]] + b * in_stride[p[1]] + c * in_stride[p[2]] +
                           d * in_stride[p[3]];
  std::vector<double> out(x.numel());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.data()[src_index[i]];
  return make_result(std::move(out_shape), std::move(out), {x},
                     [idx = std::move(src_index)](Node& self) {
                       auto* g = pgrad(self, 0);
                       for (std::size_t i = 0; i < idx.size(); ++i) (*g)[idx[i]] += self.grad[i];
                     });
}

Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& b, int stride, int pad) {
  require_rank(x, 4, "conv2d");
  require_rank(w, 4, "conv2d weight");
  const int n = x.dim(0), ci = x.dim(1), h = x.dim(2), wd = x.dim(3);
  const int co = w.dim(0), k = w.dim(2);
  if (w.dim(1) != ci || w.dim(3) != k) {
    throw ShapeMismatch("conv2d: weight " + shape_string(w.shape()) + " vs input " +
                        shape_string(x.shape()));
  }
  if (b.defined() && (b.ndim() != 1 || b.dim(0) != co)) throw ShapeMismatch("conv2d: bias shape");
  const int ho = (h + 2 * pad - k) / stride + 1;
  const int wo = (wd + 2 * pad - k) / stride + 1;
  if (ho <= 0 || wo <= 0) throw ShapeMismatch("conv2d: input smaller than kernel");
  const int kk = ci * k * k;
  const std::size_t hw = static_cast<std::size_t>(ho) * wo;
  // Output rows are processed in bands whose patch matrix stays cache
  // resident; backward rebuilds the bands instead of storing them.
  const int band = std::clamp(kBandColumns / std::max(1, kk * wo / 64), 1, ho);
  const std::size_t ximg = static_cast<std::size_t>(ci) * h * wd;

  auto fill_band = [=](const double* img, int y0, int y1, double* dst) {
    const std::size_t cols_n = static_cast<std::size_t>(y1 - y0) * wo;
    for (int c = 0; c < ci; ++c) {
      const double* plane = img + static_cast<std::size_t>(c) * h * wd;
      for (int ky = 0; ky < k; ++ky) {
        for (int kx = 0; kx < k; ++kx) {
          double* row = dst + static_cast<std::size_t>((c * k + ky) * k + kx) * cols_n;
          const int lo = std::clamp((pad - kx + stride - 1) / stride, 0, wo);
          const int hi = std::clamp((wd + pad - kx + stride - 1) / stride, lo, wo);
          for (int oy = y0; oy < y1; ++oy, row += wo) {
            const int iy = oy * stride - pad + ky;
            if (iy < 0 || iy >= h) {
              std::fill(row, row + wo, 0.0);
              continue;
            }
            std::fill(row, row + lo, 0.0);
            std::fill(row + hi, row + wo, 0.0);
            const double* src = plane + iy * wd + lo * stride - pad + kx;
            if (stride == 1) {
              std::copy(src, src + (hi - lo), row + lo);
            } else {
              for (int ox = lo; ox < hi; ++ox, src += stride) row[ox] = *src;
            }
          }
        }
      }
    }
  };

  std::vector<double> out(static_cast<std::size_t>(n) * co * hw);
  std::vector<double> cols(static_cast<std::size_t>(kk) * band * wo);
  const CMapR wmat(w.data().data(), co, kk);
  for (int bn = 0; bn < n; ++bn) {
    for (int y0 = 0; y0 < ho; y0 += band) {
      const int y1 = std::min(ho, y0 + band);
      const int cols_n = (y1 - y0) * wo;
      fill_band(x.data().data() + bn * ximg, y0, y1, cols.data());
      StridedMapR dst(out.data() + static_cast<std::size_t>(bn) * co * hw + static_cast<std::size_t>(y0) * wo, co,
                      cols_n, Eigen::OuterStride<>(hw));
      dst.noalias() = wmat * CMapR(cols.data(), kk, cols_n);
    }
    if (b.defined()) {
      for (int o = 0; o < co; ++o) {
        double* dst = out.data() + (static_cast<std::size_t>(bn) * co + o) * hw;
        const double bias = b.data()[o];
        for (std::size_t i = 0; i < hw; ++i) dst[i] += bias;
      }
    }
  }

  std::vector<Tensor> parents{x, w};
  if (b.defined()) parents.push_back(b);
  const bool has_bias = b.defined();
  return make_result(
      {n, co, ho, wo}, std::move(out), parents,
      [=](Node& self) {
        auto* gw = pgrad(self, 1);
        auto* gb = has_bias ? pgrad(self, 2) : nullptr;
        auto* gx = pgrad(self, 0);
        const CMapR wm(pval(self, 1).data(), co, kk);
        const double* xdata = pval(self, 0).data();
        std::vector<double> cols_b(static_cast<std::size_t>(kk) * band * wo);
        MatR dcols;
        for (int bn = 0; bn < n; ++bn) {
          const double* gptr = self.grad.data() + static_cast<std::size_t>(bn) * co * hw;
          if (gb) {
            for (int o = 0; o < co; ++o) {
              double acc = 0.0;
              for (std::size_t i = 0; i < hw; ++i) acc += gptr[o * hw + i];
              (*gb)[o] += acc;
            }
          }
          for (int y0 = 0; y0 < ho; y0 += band) {
            const int y1 = std::min(ho, y0 + band);
            const int cols_n = (y1 - y0) * wo;
            const CStridedMapR gmat(gptr + static_cast<std::size_t>(y0) * wo, co, cols_n, Eigen::OuterStride<>(hw));
            if (gw) {
              fill_band(xdata + bn * ximg, y0, y1, cols_b.data());
              MapR(gw->data(), co, kk).noalias() += gmat * CMapR(cols_b.data(), kk, cols_n).transpose();
            }
            if (!gx) continue;
            dcols.noalias() = wm.transpose() * gmat;
            for (int c = 0; c < ci; ++c) {
              double* plane = gx->data() + (static_cast<std::size_t>(bn) * ci + c) * h * wd;
              for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                  const double* src = dcols.data() + static_cast<std::size_t>((c * k + ky) * k + kx) * cols_n;
                  const int lo = std::clamp((pad - kx + stride - 1) / stride, 0, wo);
                  const int hi = std::clamp((wd + pad - kx + stride - 1) / stride, lo, wo);
                  for (int oy = y0; oy < y1; ++oy, src += wo) {
                    const int iy = oy * stride - pad + ky;
                    if (iy < 0 || iy >= h) continue;
                    double* dst = plane + iy * wd + lo * stride - pad + kx;
                    for (int ox = lo; ox < hi; ++ox, dst += stride) *dst += src[ox];
                  }
                }
              }
            }
          }
        }
      });
}

Tensor mul_pixelwise(const Tensor& x, const Tensor& m) {
  require_rank(x, 4, "mul_pixelwise");
  const int n = x.dim(0), c = x.dim(1);
  const std::size_t hw = static_cast<std::size_t>(x.dim(2)) * x.dim(3);
  if (m.shape() != Shape{n, 1, x.dim(2), x.dim(3)}) throw ShapeMismatch("mul_pixelwise: mask shape");
  std::vector<double> out(x.numel());
  for (int bn = 0; bn < n; ++bn)
    for (int ch = 0; ch < c; ++ch)
      for (std::size_t i = 0; i < hw; ++i)
        out[(bn * c + ch) * hw + i] = x.data()[(bn * c + ch) * hw + i] * m.data()[bn * hw + i];
  return make_result(x.shape(), std::move(out), {x, m}, [n, c, hw](Node& self) {
    const auto& xv = pval(self, 0);
    const auto& mv = pval(self, 1);
    auto* gx = pgrad(self, 0);
    auto* gm = pgrad(self, 1);
    for (int bn = 0; bn < n; ++bn)
      for (int ch = 0; ch < c; ++ch)
        for (std::size_t i = 0; i < hw; ++i) {
          const std::size_t j = (bn * c + ch) * hw + i;
          if (gx) (*gx)[j] += self.grad[j] * mv[bn * hw + i];
          if (gm) (*gm)[bn * hw + i] += self.grad[j] * xv[j];
        }
  });
}

Tensor add_channel_bias(const Tensor& x, const Tensor& b) {
  require_rank(x, 4, "add_channel_bias");
  const int n = x.dim(0), c = x.dim(1);
  const std::size_t hw = static_cast<std::size_t>(x.dim(2)) * x.dim(3);
  if (b.shape() != Shape{c}) throw ShapeMismatch("add_channel_bias: bias shape");
  std::vector<double> out(x.data().begin(), x.data().end());
  for (int bn = 0; bn < n; ++bn)
    for (int ch = 0; ch < c; ++ch)
      for (std::size_t i = 0; i < hw; ++i) out[(bn * c + ch) * hw + i] += b.data()[ch];
  return make_result(x.shape(), std::move(out), {x, b}, [n, c, hw](Node& self) {
    if (auto* gx = pgrad(self, 0)) {
      for (std::size_t i = 0; i < gx->size(); ++i) (*gx)[i] += self.grad[i];
    }
    if (auto* gb = pgrad(self, 1)) {
      for (int bn = 0; bn < n; ++bn)
        for (int ch = 0; ch < c; ++ch)
          for (std::size_t i = 0; i < hw; ++i) (*gb)[ch] += self.grad[(bn * c + ch) * hw + i];
    }
  });
}

Tensor blend(const Tensor& a, const Tensor& b, const Tensor& m) {
  require_same(a, b, "blend");
  require_rank(a, 4, "blend");
  const int n = a.dim(0), c = a.dim(1);
  const std::size_t hw = static_cast<std::size_t>(a.dim(2)) * a.dim(3);
  if (m.shape() != Shape{n, 1, a.dim(2), a.dim(3)}) throw ShapeMismatch("blend: mask shape");
  std::vector<double> out(a.numel());
  for (int bn = 0; bn < n; ++bn)
    for (int ch = 0; ch < c; ++ch)
      for (std::size_t i = 0; i < hw; ++i) {
        const std::size_t j = (bn * c + ch) * hw + i;
        const double mv = m.data()[bn * hw + i];
        if (mv == 1.0) {
          out[j] = a.data()[j];
        } else if (mv == 0.0) {
          out[j] = b.data()[j];
        } else {
          out[j] = mv * a.data()[j] + (1.0 - mv) * b.data()[j];
        }
      }
  return make_result(a.shape(), std::move(out), {a, b}, [n, c, hw, mask = m.detach()](Node& self) {
    auto* ga = pgrad(self, 0);
    auto* gb = pgrad(self, 1);
    for (int bn = 0; bn < n; ++bn)
      for (int ch = 0; ch < c; ++ch)
        for (std::size_t i = 0; i < hw; ++i) {
          const std::size_t j = (bn * c + ch) * hw + i;
          const double mv = mask.data()[bn * hw + i];
          if (ga) (*ga)[j] += self.grad[j] * mv;
          if (gb) (*gb)[j] += self.grad[j] * (1.0 - mv);
        }
  });
}

Tensor concat_channels(const std::vector<Tensor>& xs) {
  if (xs.empty()) throw ShapeMismatch("concat_channels: no inputs");
  const int n = xs[0].dim(0), h = xs[0].dim(2), w = xs[0].dim(3);
  int total = 0;
  std::vector<int> offsets;
  for (const auto& t : xs) {
    require_rank(t, 4, "concat_channels");
    if (t.dim(0) != n || t.dim(2) != h || t.dim(3) != w) {
      throw ShapeMismatch("concat_channels: " + shape_string(t.shape()) + " vs " +
                          shape_string(xs[0].shape()));
    }
    offsets.push_back(total);
    total += t.dim(1);
  }
  const std::size_t hw = static_cast<std::size_t>(h) * w;
  std::vector<double> out(static_cast<std::size_t>(n) * total * hw);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const int c = xs[k].dim(1);
    for (int bn = 0; bn < n; ++bn) {
      const double* src = xs[k].data().data() + static_cast<std::size_t>(bn) * c * hw;
      std::copy(src, src + c * hw, out.data() + (static_cast<std::size_t>(bn) * total + offsets[k]) * hw);
    }
  }
  std::vector<int> chans;
  for (const auto& t : xs) chans.push_back(t.dim(1));
  return make_result({n, total, h, w}, std::move(out), xs, [=](Node& self) {
    for (std::size_t k = 0; k < chans.size(); ++k) {
      auto* g = pgrad(self, k);
      if (!g) continue;
      const int c = chans[k];
      for (int bn = 0; bn < n; ++bn) {
        const double* src = self.grad.data() + (static_cast<std::size_t>(bn) * total + offsets[k]) * hw;
        double* dst = g->data() + static_cast<std::size_t>(bn) * c * hw;
        for (std::size_t i = 0; i < c * hw; ++i) dst[i] += src[i];
      }
    }
  });
}

Tensor slice_channels(const Tensor& x, int begin, int end) {
  require_rank(x, 4, "slice_channels");
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  if (begin < 0 || end > c || begin >= end) throw ShapeMismatch("slice_channels: bad range");
  const int cs = end - begin;
  const std::size_t hw = static_cast<std::size_t>(h) * w;
  std::vector<double> out(static_cast<std::size_t>(n) * cs * hw);
  for (int bn = 0; bn < n; ++bn) {
    const double* src = x.data().data() + (static_cast<std::size_t>(bn) * c + begin) * hw;
    std::copy(src, src + cs * hw, out.data() + static_cast<std::size_t>(bn) * cs * hw);
  }
  return make_result({n, cs, h, w}, std::move(out), {x}, [=](Node& self) {
    auto* g = pgrad(self, 0);
    for (int bn = 0; bn < n; ++bn) {
      double* dst = g->data() + (static_cast<std::size_t>(bn) * c + begin) * hw;
      const double* src = self.grad.data() + static_cast<std::size_t>(bn) * cs * hw;
      for (std::size_t i = 0; i < cs * hw; ++i) dst[i] += src[i];
    }
  });
}

Tensor upsample_nearest(const Tensor& x, int factor) {
  require_rank(x, 4, "upsample_nearest");
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  const int ho = h * factor, wo = w * factor;
  std::vector<double> out(static_cast<std::size_t>(n) * c * ho * wo);
  for (int p = 0; p < n * c; ++p)
    for (int y = 0; y < ho; ++y)
      for (int xo = 0; xo < wo; ++xo)
        out[(static_cast<std::size_t>(p) * ho + y) * wo + xo] =
            x.data()[(static_cast<std::size_t>(p) * h + y / factor) * w + xo / factor];
  return make_result({n, c, ho, wo}, std::move(out), {x}, [=](Node& self) {
    auto* g = pgrad(self, 0);
    for (int p = 0; p < n * c; ++p)
      for (int y = 0; y < ho; ++y)
        for (int xo = 0; xo < wo; ++xo)
          (*g)[(static_cast<std::size_t>(p) * h + y / factor) * w + xo / factor] +=
              self.grad[(static_cast<std::size_t>(p) * ho + y) * wo + xo];
  });
}

Tensor upsample_bilinear(const Tensor& x, int out_h, int out_w) {
  require_rank(x, 4, "upsample_bilinear");
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  struct Tap {
    int i0, i1;
    double a;
  };
  auto taps = [](int in, int out) {
    std::vector<Tap> t(out);
    const double s = static_cast<double>(in) / out;
    for (int o = 0; o < out; ++o) {
      const double f = std::max((o + 0.5) * s - 0.5, 0.0);
      const int i0 = std::min(static_cast<int>(f), in - 1);
      t[o] = {i0, std::min(i0 + 1, in - 1), f - i0};
    }
    return t;
  };
  const auto ty = taps(h, out_h), tx = taps(w, out_w);
  std::vector<double> out(static_cast<std::size_t>(n) * c * out_h * out_w);
  for (int p = 0; p < n * c; ++p) {
    const double* src = x.data().data() + static_cast<std::size_t>(p) * h * w;
    double* dst = out.data() + static_cast<std::size_t>(p) * out_h * out_w;
    for (int y = 0; y < out_h; ++y)
      for (int xo = 0; xo < out_w; ++xo) {
        const auto& a = ty[y];
        const auto& b = tx[xo];
        dst[y * out_w + xo] = (1 - a.a) * ((1 - b.a) * src[a.i0 * w + b.i0] + b.a * src[a.i0 * w + b.i1]) +
                              a.a * ((1 - b.a) * src[a.i1 * w + b.i0] + b.a * src[a.i1 * w + b.i1]);
      }
  }
  return make_result({n, c, out_h, out_w}, std::move(out), {x}, [=](Node& self) {
    auto* g = pgrad(self, 0);
    for (int p = 0; p < n * c; ++p) {
      double* dst = g->data() + static_cast<std::size_t>(p) * h * w;
      const double* src = self.grad.data() + static_cast<std::size_t>(p) * out_h * out_w;
      for (int y = 0; y < out_h; ++y)
        for (int xo = 0; xo < out_w; ++xo) {
          const auto& a = ty[y];
          const auto& b = tx[xo];
          const double gv = src[y * out_w + xo];
          dst[a.i0 * w + b.i0] += gv * (1 - a.a) * (1 - b.a);
          dst[a.i0 * w + b.i1] += gv * (1 - a.a) * b.a;
          dst[a.i1 * w + b.i0] += gv * a.a * (1 - b.a);
          dst[a.i1 * w + b.i1] += gv * a.a * b.a;
        }
    }
  });
}

Tensor avg_pool(const Tensor& x, int k) {
  require_rank(x, 4, "avg_pool");
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  const int ho = h / k, wo = w / k;
  if (ho == 0 || wo == 0) throw ShapeMismatch("avg_pool: window larger than input");
  const double inv = 1.0 / (k * k);
  std::vector<double> out(static_cast<std::size_t>(n) * c * ho * wo, 0.0);
  for (int p = 0; p < n * c; ++p)
    for (int y = 0; y < ho * k; ++y)
      for (int xi = 0; xi < wo * k; ++xi)
        out[(static_cast<std::size_t>(p) * ho + y / k) * wo + xi / k] +=
            inv * x.data()[(static_cast<std::size_t>(p) * h + y) * w + xi];
  return make_result({n, c, ho, wo}, std::move(out), {x}, [=](Node& self) {
    auto* g = pgrad(self, 0);
    for (int p = 0; p < n * c; ++p)
      for (int y = 0; y < ho * k; ++y)
        for (int xi = 0; xi < wo * k; ++xi)
          (*g)[(static_cast<std::size_t>(p) * h + y) * w + xi] +=
              inv * self.grad[(static_cast<std::size_t>(p) * ho + y / k) * wo + xi / k];
  });
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) {
  require_rank(w, 2, "linear weight");
  const int kdim = w.dim(1), m = w.dim(0);
  if (x.shape().back() != kdim) {
    throw ShapeMismatch("linear: input " + shape_string(x.shape()) + " vs weight " +
                        shape_string(w.shape()));
  }
  const std::size_t rows = x.numel() / kdim;
  // Rank >= 3 inputs are multiplied one leading-index block at a time so each
  // batch item sees the same GEMM shape.
  const int blocks = x.ndim() >= 3 ? x.dim(0) : 1;
  const std::size_t block_rows = rows / blocks;
  std::vector<double> out(rows * m);
  const CMapR wmat(w.data().data(), m, kdim);
  for (int bl = 0; bl < blocks; ++bl) {
    MapR dst(out.data() + bl * block_rows * m, block_rows, m);
    dst.noalias() = CMapR(x.data().data() + bl * block_rows * kdim, block_rows, kdim) * wmat.transpose();
  }
  if (b.defined()) {
    for (std::size_t r = 0; r < rows; ++r)
      for (int j = 0; j < m; ++j) out[r * m + j] += b.data()[j];
  }
  Shape shape = x.shape();
  shape.back() = m;
  std::vector<Tensor> parents{x, w};
  if (b.defined()) parents.push_back(b);
  const bool has_bias = b.defined();
  return make_result(std::move(shape), std::move(out), parents, [=](Node& self) {
    auto* gx = pgrad(self, 0);
    auto* gw = pgrad(self, 1);
    const CMapR wm(pval(self, 1).data(), m, kdim);
    for (int bl = 0; bl < blocks; ++bl) {
      const CMapR g(self.grad.data() + bl * block_rows * m, block_rows, m);
      if (gx) MapR(gx->data() + bl * block_rows * kdim, block_rows, kdim).noalias() += g * wm;
      if (gw) {
        MapR(gw->data(), m, kdim).noalias() +=
            g.transpose() * CMapR(pval(self, 0).data() + bl * block_rows * kdim, block_rows, kdim);
      }
    }
    if (has_bias) {
      if (auto* gb = pgrad(self, 2)) {
        for (std::size_t r = 0; r < rows; ++r)
          for (int j = 0; j < m; ++j) (*gb)[j] += self.grad[r * m + j];
      }
    }
  });
}

Tensor bmm(const Tensor& a, const Tensor& b, bool transpose_b) {
  require_rank(a, 3, "bmm");
  require_rank(b, 3, "bmm");
  const int batch = a.dim(0), m = a.dim(1), k = a.dim(2);
  const int n = transpose_b ? b.dim(1) : b.dim(2);
  if (b.dim(0) != batch || (transpose_b ? b.dim(2) : b.dim(1)) != k) {
    throw ShapeMismatch("bmm: " + shape_string(a.shape()) + " x " + shape_string(b.shape()));
  }
  const std::size_t bsz = static_cast<std::size_t>(b.dim(1)) * b.dim(2);
  std::vector<double> out(static_cast<std::size_t>(batch) * m * n);
  for (int i = 0; i < batch; ++i) {
    const CMapR am(a.data().data() + static_cast<std::size_t>(i) * m * k, m, k);
    MapR om(out.data() + static_cast<std::size_t>(i) * m * n, m, n);
    if (transpose_b) {
      om.noalias() = am * CMapR(b.data().data() + i * bsz, n, k).transpose();
    } else {
      om.noalias() = am * CMapR(b.data().data() + i * bsz, k, n);
    }
  }
  return make_result({batch, m, n}, std::move(out), {a, b}, [=](Node& self) {
    auto* ga = pgrad(self, 0);
    auto* gb = pgrad(self, 1);
    const auto& av = pval(self, 0);
    const auto& bv = pval(self, 1);
    for (int i = 0; i < batch; ++i) {
      const CMapR g(self.grad.data() + static_cast<std::size_t>(i) * m * n, m, n);
      const CMapR am(av.data() + static_cast<std::size_t>(i) * m * k, m, k);
      if (transpose_b) {
        const CMapR bm(bv.data() + i * bsz, n, k);
        if (ga) MapR(ga->data() + static_cast<std::size_t>(i) * m * k, m, k).noalias() += g * bm;
        if (gb) MapR(gb->data() + i * bsz, n, k).noalias() += g.transpose() * am;
      } else {
        const CMapR bm(bv.data() + i * bsz, k, n);
        if (ga) MapR(ga->data() + static_cast<std::size_t>(i) * m * k, m, k).noalias() += g * bm.transpose();
        if (gb) MapR(gb->data() + i * bsz, k, n).noalias() += am.transpose() * g;
      }
    }
  });
}

Tensor softmax_lastdim(const Tensor& x) {
  const int d = x.shape().back();
  const std::size_t rows = x.numel() / d;
  std::vector<double> out(x.numel());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* src = x.data().data() + r * d;
    double* dst = out.data() + r * d;
    const double mx = *std::max_element(src, src + d);
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += (dst[i] = std::exp(src[i] - mx));
    for (int i = 0; i < d; ++i) dst[i] /= s;
  }
  return make_result(x.shape(), std::move(out), {x}, [d, rows](Node& self) {
    auto* g = pgrad(self, 0);
    for (std::size_t r = 0; r < rows; ++r) {
      const double* y = self.value.data() + r * d;
      const double* gy = self.grad.data() + r * d;
      double dot = 0.0;
      for (int i = 0; i < d; ++i) dot += y[i] * gy[i];
      for (int i = 0; i < d; ++i) (*g)[r * d + i] += y[i] * (gy[i] - dot);
    }
  });
}

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps) {
  const int d = x.shape().back();
  if (gamma.shape() != Shape{d} || beta.shape() != Shape{d}) throw ShapeMismatch("layer_norm: affine shape");
  const std::size_t rows = x.numel() / d;
  auto xhat = std::make_shared<std::vector<double>>(x.numel());
  auto inv_std = std::make_shared<std::vector<double>>(rows);
  std::vector<double> out(x.numel());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* src = x.data().data() + r * d;
    double mu = 0.0;
    for (int i = 0; i < d; ++i) mu += src[i];
    mu /= d;
    double var = 0.0;
    for (int i = 0; i < d; ++i) var += (src[i] - mu) * (src[i] - mu);
    var /= d;
    const double is = 1.0 / std::sqrt(var + eps);
    (*inv_std)[r] = is;
    for (int i = 0; i < d; ++i) {
      const double xh = (src[i] - mu) * is;
      (*xhat)[r * d + i] = xh;
      out[r * d + i] = xh * gamma.data()[i] + beta.data()[i];
    }
  }
  return make_result(x.shape(), std::move(out), {x, gamma, beta}, [=](Node& self) {
    auto* gx = pgrad(self, 0);
    auto* gg = pgrad(self, 1);
    auto* gbt = pgrad(self, 2);
    const auto& gam = pval(self, 1);
    for (std::size_t r = 0; r < rows; ++r) {
      const double* gy = self.grad.data() + r * d;
      const double* xh = xhat->data() + r * d;
      double s1 = 0.0, s2 = 0.0;
      for (int i = 0; i < d; ++i) {
        const double gxh = gy[i] * gam[i];
        s1 += gxh;
        s2 += gxh * xh[i];
        if (gg) (*gg)[i] += gy[i] * xh[i];
        if (gbt) (*gbt)[i] += gy[i];
      }
      if (gx) {
        for (int i = 0; i < d; ++i) {
          const double gxh = gy[i] * gam[i];
          (*gx)[r * d + i] += (*inv_std)[r] * (gxh - s1 / d - xh[i] * s2 / d);
        }
      }
    }
  });
}

Tensor bce_mean(const Tensor& p, const Tensor& target, double eps) {
  require_same(p, target, "bce_mean");
  const auto pv = p.data(), yv = target.data();
  const double n = static_cast<double>(pv.size());
  double s = 0.0;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    if (yv[i] != 0.0 && yv[i] != 1.0) throw InvalidInput("bce: target values must be 0 or 1");
    const double q = std::clamp(pv[i], eps, 1.0 - eps);
    s -= yv[i] == 1.0 ? std::log(q) : std::log(1.0 - q);
  }
  return make_result({1}, {s / n}, {p, target}, [eps, n](Node& self) {
    auto* g = pgrad(self, 0);
    if (!g) return;
    const auto& pvv = pval(self, 0);
    const auto& yvv = pval(self, 1);
    for (std::size_t i = 0; i < pvv.size(); ++i) {
      if (pvv[i] < eps || pvv[i] > 1.0 - eps) continue;
      const double d = yvv[i] == 1.0 ? -1.0 / pvv[i] : 1.0 / (1.0 - pvv[i]);
      (*g)[i] += self.grad[0] * d / n;
    }
  });
}

Tensor l1_mean(const Tensor& a, const Tensor& b) {
  require_same(a, b, "l1_mean");
  const double n = static_cast<double>(a.numel());
  double s = 0.0;
  for (std::size_t i = 0; i < a.numel(); ++i) s += std::abs(a.data()[i] - b.data()[i]);
  return make_result({1}, {s / n}, {a, b}, [n](Node& self) {
    const auto& av = pval(self, 0);
    const auto& bv = pval(self, 1);
    auto* ga = pgrad(self, 0);
    auto* gb = pgrad(self, 1);
    for (std::size_t i = 0; i < av.size(); ++i) {
      const double d = av[i] - bv[i];
      const double sg = d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
      if (ga) (*ga)[i] += self.grad[0] * sg / n;
      if (gb) (*gb)[i] -= self.grad[0] * sg / n;
    }
  });
}

Tensor weighted_mse(const Tensor& a, const Tensor& b, const std::vector<double>& w) {
  require_same(a, b, "weighted_mse");
  if (w.size() != a.numel()) throw ShapeMismatch("weighted_mse: weight count");
  double wsum = 0.0, s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    s += w[i] * d * d;
    wsum += w[i];
  }
  const double norm = wsum > 0.0 ? 1.0 / wsum : 0.0;
  return make_result({1}, {s * norm}, {a, b}, [w, norm](Node& self) {
    const auto& av = pval(self, 0);
    const auto& bv = pval(self, 1);
    auto* ga = pgrad(self, 0);
    auto* gb = pgrad(self, 1);
    for (std::size_t i = 0; i < av.size(); ++i) {
      const double d = 2.0 * w[i] * (av[i] - bv[i]) * norm * self.grad[0];
      if (ga) (*ga)[i] += d;
      if (gb) (*gb)[i] -= d;
    }
  });
}

}  // namespace hdr::nn
