// SPDX-License-Identifier: Apache-2.0
#include "radnet/detect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "radnet/preprocess.hpp"

namespace radnet {

using nlohmann::json;

std::pair<double, double> cell_to_range_velocity(const RadarConfig& config, double k, double m) {
    const double range = k * kSpeedOfLight / (2.0 * config.bandwidth);
    const double velocity = (m - config.chirps_per_frame / 2.0) * config.wavelength() /
                            (2.0 * config.chirps_per_frame * config.chirp_duration);
    return {range, velocity};
}

Cell peak_cell(std::span<const std::complex<double>> spectrum, int range_bins, int doppler_bins) {
    if (spectrum.size() != static_cast<std::size_t>(range_bins) * doppler_bins || spectrum.empty())
        throw std::invalid_argument("peak_cell: size mismatch");
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        const double a = std::abs(spectrum[i]);
        if (a > best_mag) {
            best_mag = a;
            best = i;
        }
    }
    return {static_cast<int>(best / doppler_bins), static_cast<int>(best % doppler_bins)};
}

std::vector<Detection> extract_detections(std::span<const float> presence,
                                          std::span<const float> coord_x,
                                          std::span<const float> coord_y, int range_bins,
                                          int doppler_bins, const DetectParams& params,
                                          const RadarConfig& config) {
    const std::size_t cells = static_cast<std::size_t>(range_bins) * doppler_bins;
    if (presence.size() != cells || coord_x.size() != cells || coord_y.size() != cells)
        throw std::invalid_argument("extract_detections: map sizes differ");
    const auto tau = static_cast<float>(params.threshold);

    std::vector<int> label(cells, -1);
    std::vector<std::vector<Cell>> comps;
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < cells; ++start) {
        if (!(presence[start] > tau) || label[start] >= 0) continue;
        const int id = static_cast<int>(comps.size());
        comps.emplace_back();
        label[start] = id;
        stack.push_back(start);
        while (!stack.empty()) {
            const auto i = stack.back();
            stack.pop_back();
            const int k = static_cast<int>(i / doppler_bins);
            const int m = static_cast<int>(i % doppler_bins);
            comps[id].push_back({k, m});
            const int nk[4] = {k - 1, k + 1, k, k};
            const int nm[4] = {m, m, m - 1, m + 1};
            for (int d = 0; d < 4; ++d) {
                if (nk[d] < 0 || nk[d] >= range_bins || nm[d] < 0 || nm[d] >= doppler_bins) continue;
                const auto j = static_cast<std::size_t>(nk[d]) * doppler_bins + nm[d];
                if (presence[j] > tau && label[j] < 0) {
                    label[j] = id;
                    stack.push_back(j);
                }
            }
        }
    }
    if (comps.empty()) return {};

    for (auto& c : comps)
        std::sort(c.begin(), c.end(), [](Cell a, Cell b) { return a.k != b.k ? a.k < b.k : a.m < b.m; });
    auto box_key = [](const std::vector<Cell>& c) {
        int km = c.front().k, mm = c.front().m;
        for (auto x : c) {
            km = std::min(km, x.k);
            mm = std::min(mm, x.m);
        }
        return std::pair{km, mm};
    };
    const auto& best = *std::min_element(comps.begin(), comps.end(), [&](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return box_key(a) < box_key(b);
    });
    if (static_cast<int>(best.size()) < params.min_cells) return {};

    Detection d;
    d.region = best;
    d.k_min = d.k_max = best.front().k;
    d.m_min = d.m_max = best.front().m;
    double wsum = 0.0, xs = 0.0, ys = 0.0, ks = 0.0, ms = 0.0;
    for (auto c : best) {
        d.k_min = std::min(d.k_min, c.k);
        d.k_max = std::max(d.k_max, c.k);
        d.m_min = std::min(d.m_min, c.m);
        d.m_max = std::max(d.m_max, c.m);
        const auto i = static_cast<std::size_t>(c.k) * doppler_bins + c.m;
        const double w = presence[i];
        wsum += w;
        xs += w * coord_x[i];
        ys += w * coord_y[i];
        ks += w * c.k;
        ms += w * c.m;
    }
    d.confidence = wsum / static_cast<double>(best.size());
    d.x_est = xs / wsum;
    d.y_est = ys / wsum;
    d.k_centroid = ks / wsum;
    d.m_centroid = ms / wsum;
    std::tie(d.range_est, d.velocity_est) = cell_to_range_velocity(config, d.k_centroid, d.m_centroid);
    return {d};
}

EvalReport evaluate(const std::vector<std::vector<Detection>>& detections,
                    const std::vector<FrameTruth>& truth, int range_bins, int doppler_bins,
                    const CameraModel& camera,
                    const EvalOptions& options) {
    if (detections.size() != truth.size())
        throw std::invalid_argument("evaluate: detections and ground truth differ in length");
    EvalReport r;
    r.frames = static_cast<int>(truth.size());
    double iou_sum = 0.0, ex = 0.0, ey = 0.0, er = 0.0, ev = 0.0, ea = 0.0, ee = 0.0;

    for (std::size_t f = 0; f < truth.size(); ++f) {
        const auto& gt = truth[f];
        FrameOutcome o;
        o.truth_present = gt.present;
        o.detected = !detections[f].empty();
        const Detection* det = o.detected ? &detections[f].front() : nullptr;
        if (gt.present && det) {
            const auto disk = make_targets(gt, range_bins, doppler_bins, options.disk_radius);
            std::size_t inter = 0;
            for (auto c : det->region)
                if (disk.presence[disk.index(c.k, c.m)] > 0.5f) ++inter;
            const std::size_t uni = det->region.size() + disk.mask_cells() - inter;
            o.iou = uni ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
            o.true_positive = o.iou >= options.iou_threshold;
        }
        if (o.true_positive) {
            ++r.true_positives;
            iou_sum += o.iou;
            ex += (det->x_est - gt.x_im) * (det->x_est - gt.x_im);
            ey += (det->y_est - gt.y_im) * (det->y_est - gt.y_im);
            er += std::abs(det->range_est - gt.object.range);
            ev += std::abs(det->velocity_est - gt.object.radial_velocity);
            const auto est = backproject(camera, det->x_est, det->y_est);
            const auto ref = backproject(camera, gt.x_im, gt.y_im);
            ea += std::abs(est.azimuth - ref.azimuth);
            ee += std::abs(est.elevation - ref.elevation);
        } else {
            if (o.detected) ++r.false_positives;
            if (gt.present) ++r.false_negatives;
            if (o.detected && gt.present) ++r.mislocated;
            if (!o.detected && !gt.present) ++r.true_negatives;
        }
        r.per_frame.push_back(o);
    }
    const int tp = r.true_positives;
    if (tp + r.false_positives > 0) r.precision = static_cast<double>(tp) / (tp + r.false_positives);
    if (tp + r.false_negatives > 0) r.recall = static_cast<double>(tp) / (tp + r.false_negatives);
    if (tp > 0) {
        r.mean_iou = iou_sum / tp;
        r.mse_x = ex / tp;
        r.mse_y = ey / tp;
        r.mean_range_error = er / tp;
        r.mean_velocity_error = ev / tp;
        r.mean_azimuth_error = ea / tp;
        r.mean_elevation_error = ee / tp;
    }
    return r;
}

json detection_json(const Detection& d) {
    json region = json::array();
    for (auto c : d.region) region.push_back({c.k, c.m});
    return json{{"box", {{"k_min", d.k_min}, {"k_max", d.k_max}, {"m_min", d.m_min}, {"m_max", d.m_max}}},
                {"cells", std::move(region)},
                {"confidence", d.confidence},
                {"k_centroid", d.k_centroid},
                {"m_centroid", d.m_centroid},
                {"range", d.range_est},
                {"velocity", d.velocity_est},
                {"x_im", d.x_est},
                {"y_im", d.y_est}};
}

json report_json(const EvalReport& r) {
    return json{{"frames", r.frames},
                {"true_positives", r.true_positives},
                {"false_positives", r.false_positives},
                {"false_negatives", r.false_negatives},
                {"true_negatives", r.true_negatives},
                {"mislocated", r.mislocated},
                {"precision", r.precision},
                {"recall", r.recall},
                {"mean_iou", r.mean_iou},
                {"mse_x", r.mse_x},
                {"mse_y", r.mse_y},
                {"mean_range_error_m", r.mean_range_error},
                {"mean_velocity_error_mps", r.mean_velocity_error},
                {"mean_azimuth_error_rad", r.mean_azimuth_error},
                {"mean_elevation_error_rad", r.mean_elevation_error}};
}

}  // namespace radnet
