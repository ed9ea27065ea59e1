// SPDX-License-Identifier: Apache-2.0
#include "radnet/train/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace radnet::train {

LossBreakdown& LossBreakdown::operator+=(const LossBreakdown& o) {
    bce += o.bce;
    dice += o.dice;
    seg_loss += o.seg_loss;
    mse_x += o.mse_x;
    mse_y += o.mse_y;
    total += o.total;
    return *this;
}

LossBreakdown LossBreakdown::scaled(double s) const {
    return {bce * s, dice * s, seg_loss * s, mse_x * s, mse_y * s, total * s};
}

namespace {

template <class T>
double seg_loss_impl(std::span<const T> p, std::span<const T> g, std::span<T> grad,
                     double grad_scale, double* bce_out, double* dice_out, bool logits) {
    if (p.size() != g.size() || p.empty()) throw std::invalid_argument("seg_loss: shape mismatch");
    if (!grad.empty() && grad.size() != p.size())
        throw std::invalid_argument("seg_loss: gradient buffer size mismatch");
    const double n = static_cast<double>(p.size());

    double bce = 0.0, inter = 0.0, pp = 0.0, gg = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pi = p[i], gi = g[i];
        const double pc = std::clamp(pi, kBceClamp, 1.0 - kBceClamp);
        bce -= gi * std::log(pc) + (1.0 - gi) * std::log(1.0 - pc);
        inter += pi * gi;
        pp += pi * pi;
        gg += gi * gi;
    }
    bce /= n;
    const double denom = pp + gg + kDiceEps;
    const double dice = 2.0 * inter / denom;

    if (!grad.empty()) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double pi = p[i], gi = g[i];
            const double d_dice = 2.0 * gi / denom - 4.0 * inter * pi / (denom * denom);
            if (logits) {
                // BCE folded through the sigmoid: exact and free of the clamp.
                grad[i] = static_cast<T>(grad_scale * ((pi - gi) / n - d_dice * pi * (1.0 - pi)));
            } else {
                double d_bce = 0.0;
                if (pi > kBceClamp && pi < 1.0 - kBceClamp) d_bce = (pi - gi) / (pi * (1.0 - pi) * n);
                grad[i] = static_cast<T>(grad_scale * (d_bce - d_dice));
            }
        }
    }
    if (bce_out) *bce_out = bce;
    if (dice_out) *dice_out = dice;
    return bce - dice;
}

}  // namespace

template <class T>
double seg_loss(std::span<const T> p, std::span<const T> g, std::span<T> grad, double grad_scale,
                double* bce_out, double* dice_out) {
    return seg_loss_impl(p, g, grad, grad_scale, bce_out, dice_out, false);
}

template <class T>
double masked_mse(std::span<const T> c, std::span<const T> cg, std::span<const T> mask,
                  std::span<T> grad, double grad_scale) {
    if (c.size() != cg.size() || c.size() != mask.size())
        throw std::invalid_argument("masked_mse: shape mismatch");
    if (!grad.empty() && grad.size() != c.size())
        throw std::invalid_argument("masked_mse: gradient buffer size mismatch");
    double count = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (mask[i] == T(0)) continue;
        const double d = static_cast<double>(c[i]) - cg[i];
        sum += mask[i] * d * d;
        count += mask[i];
    }
    const double denom = std::max(1.0, count);
    if (!grad.empty())
        for (std::size_t i = 0; i < c.size(); ++i)
            grad[i] = static_cast<T>(grad_scale * 2.0 * mask[i] *
                                     (static_cast<double>(c[i]) - cg[i]) / denom);
    return sum / denom;
}

namespace {

template <class T>
void check_batch(const nn::UNetOutputs<T>& out, const TargetBatch<T>& t) {
    const auto s = out.presence.shape();
    if (s[1] != 1 || out.coord_x.shape() != s || out.coord_y.shape() != s ||
        t.presence.shape() != s || t.coord_x.shape() != s || t.coord_y.shape() != s)
        throw std::invalid_argument("total_loss: output/target shape mismatch");
}

template <class T>
std::span<const T> plane(const nn::Tensor4<T>& t, int b) {
    return {t.channel(b, 0), t.plane()};
}

template <class T>
std::span<T> plane(nn::Tensor4<T>& t, int b) {
    return {t.channel(b, 0), t.plane()};
}

template <class T>
LossBreakdown sample_loss(const nn::UNetOutputs<T>& out, const TargetBatch<T>& t, int b,
                          const LossWeights& w, nn::HeadGrads<T>* grads, double scale,
                          bool logits) {
    LossBreakdown l;
    std::span<T> gp, gx, gy;
    if (grads) {
        gp = plane(grads->presence, b);
        gx = plane(grads->coord_x, b);
        gy = plane(grads->coord_y, b);
    }
    l.seg_loss = seg_loss_impl<T>(plane(out.presence, b), plane(t.presence, b), gp,
                                  scale * w.seg, &l.bce, &l.dice, logits);
    l.mse_x = masked_mse<T>(plane(out.coord_x, b), plane(t.coord_x, b), plane(t.presence, b), gx,
                            scale * w.coord_x);
    l.mse_y = masked_mse<T>(plane(out.coord_y, b), plane(t.coord_y, b), plane(t.presence, b), gy,
                            scale * w.coord_y);
    l.total = w.seg * l.seg_loss + w.coord_x * l.mse_x + w.coord_y * l.mse_y;
    if (grads && logits) {
        const auto cx = plane(out.coord_x, b);
        const auto cy = plane(out.coord_y, b);
        for (std::size_t i = 0; i < gx.size(); ++i) {
            gx[i] *= cx[i] * (T(1) - cx[i]);
            gy[i] *= cy[i] * (T(1) - cy[i]);
        }
    }
    return l;
}

}  // namespace

template <class T>
LossBreakdown total_loss(const nn::UNetOutputs<T>& out, const TargetBatch<T>& targets,
                         const LossWeights& weights, nn::HeadGrads<T>* grads, GradSpace space) {
    check_batch(out, targets);
    const int B = out.presence.n;
    if (B == 0) throw std::invalid_argument("total_loss: empty batch");
    const double scale = 1.0 / B;
    if (grads) {
        const auto s = out.presence.shape();
        grads->presence = nn::Tensor4<T>(s[0], s[1], s[2], s[3]);
        grads->coord_x = nn::Tensor4<T>(s[0], s[1], s[2], s[3]);
        grads->coord_y = nn::Tensor4<T>(s[0], s[1], s[2], s[3]);
    }
    LossBreakdown sum;
    for (int b = 0; b < B; ++b)
        sum += sample_loss(out, targets, b, weights, grads, scale, space == GradSpace::Logits);

    return sum.scaled(scale);
}

template <class T>
std::vector<LossBreakdown> per_sample_loss(const nn::UNetOutputs<T>& out,
                                           const TargetBatch<T>& targets,
                                           const LossWeights& weights) {
    check_batch(out, targets);
    std::vector<LossBreakdown> v;
    for (int b = 0; b < out.presence.n; ++b)
        v.push_back(sample_loss<T>(out, targets, b, weights, nullptr, 1.0, false));
    return v;
}

#define RADNET_INSTANTIATE_LOSS(T)                                                                 \
    template double seg_loss(std::span<const T>, std::span<const T>, std::span<T>, double,         \
                             double*, double*);                                                    \
    template double masked_mse(std::span<const T>, std::span<const T>, std::span<const T>,         \
                               std::span<T>, double);                                              \
    template LossBreakdown total_loss(const nn::UNetOutputs<T>&, const TargetBatch<T>&,            \
                                      const LossWeights&, nn::HeadGrads<T>*, GradSpace);           \
    template std::vector<LossBreakdown> per_sample_loss(const nn::UNetOutputs<T>&,                 \
                                                        const TargetBatch<T>&, const LossWeights&);

RADNET_INSTANTIATE_LOSS(float)
RADNET_INSTANTIATE_LOSS(double)

#undef RADNET_INSTANTIATE_LOSS

}  // namespace radnet::train
