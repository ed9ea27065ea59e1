// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "radnet/scene.hpp"

namespace radnet {

struct Cell {
    int k = 0;
    int m = 0;
    bool operator==(const Cell&) const = default;
};

struct Detection {
    std::vector<Cell> region;  // row-major order
    int k_min = 0, k_max = 0, m_min = 0, m_max = 0;
    double confidence = 0.0;   // mean presence over the region
    double k_centroid = 0.0;   // presence-weighted
    double m_centroid = 0.0;
    double range_est = 0.0;    // m
    double velocity_est = 0.0; // m/s
    double x_est = 0.0;
    double y_est = 0.0;
};

struct DetectParams {
    double threshold = 0.5;  // tau
    int min_cells = 1;
};

/// Maps over a K x M grid, row-major (k, m). Returns the largest 4-connected
/// component of cells with presence > tau, or nothing. Equal sizes resolve to
/// the smaller k_min, then the smaller m_min.
std::vector<Detection> extract_detections(std::span<const float> presence,
                                          std::span<const float> coord_x,
                                          std::span<const float> coord_y, int range_bins,
                                          int doppler_bins, const DetectParams& params,
                                          const RadarConfig& config);

/// R = k c / (2B); v = (m - M/2) lambda / (2 M T_c). Accepts fractional bins.
std::pair<double, double> cell_to_range_velocity(const RadarConfig& config, double k, double m);

/// Row-major argmax of |z| over one K x M spectrum (first index wins ties).
Cell peak_cell(std::span<const std::complex<double>> spectrum, int range_bins, int doppler_bins);

struct FrameOutcome {
    bool truth_present = false;
    bool detected = false;
    bool true_positive = false;
    double iou = 0.0;
};

struct EvalOptions {
    double iou_threshold = 0.1;
    int disk_radius = 1;
};

struct EvalReport {
    int frames = 0;
    int true_positives = 0;
    int false_positives = 0;
    int false_negatives = 0;
    int true_negatives = 0;
    int mislocated = 0;  // frames counted as both a false positive and a false negative
    double precision = 1.0;
    double recall = 1.0;
    double mean_iou = 0.0;
    double mse_x = 0.0;
    double mse_y = 0.0;
    double mean_range_error = 0.0;     // m
    double mean_velocity_error = 0.0;  // m/s
    double mean_azimuth_error = 0.0;   // rad
    double mean_elevation_error = 0.0; // rad
    std::vector<FrameOutcome> per_frame;
};

/// A detection is a true positive iff the frame has an object and the region's
/// IoU with the ground-truth disk reaches the threshold. Precision / recall
/// with an empty denominator are reported as 1. Error statistics average over
/// true positives.
EvalReport evaluate(const std::vector<std::vector<Detection>>& detections,
                    const std::vector<FrameTruth>& truth, int range_bins, int doppler_bins,
                    const CameraModel& camera,
                    const EvalOptions& options = {});

nlohmann::json detection_json(const Detection& d);
nlohmann::json report_json(const EvalReport& r);

}  // namespace radnet
