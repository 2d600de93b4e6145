#ifndef LFIQA_METRICS_HPP
#define LFIQA_METRICS_HPP

#include <string>
#include <vector>

#include "lfiqa/image.hpp"

namespace lfiqa {

enum class Direction {
    SimilarityHigherBetter,
    DistortionLowerBetter,
};

/// Closed real interval.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Identity of a metric: label, score direction, and native output range.
struct MetricKind {
    std::string label;
    Direction direction = Direction::SimilarityHigherBetter;
    Interval native_range{0.0, 1.0};

    static MetricKind ssim();
    static MetricKind ms_ssim();
    static MetricKind gmsd();
    static MetricKind ingested(std::string label, Direction direction, Interval native_range);
};

/// One metric's raw output for one image pair.
struct MetricScore {
    MetricKind kind;
    double value = 0.0;
    std::string reference_id;
    std::string distorted_id;
};

/// Direction-normalized score in [0, 1], 1 = metric-identical pair.
struct SimilarityScore {
    double value = 0.0;
    MetricKind source_kind;
};

/// SSIM window and stabilizer constants (defaults follow the original
/// reference implementation: 11x11 Gaussian, sigma 1.5, K1/K2, L = 255).
struct SsimParams {
    int window_size = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 255.0;
    bool auto_downsample = true; // f = max(1, round(min(H,W)/256)) mean pooling
};

struct SsimResult {
    double value = 0.0;                // arithmetic mean of window_map
    std::vector<double> window_map;    // per-window SSIM, row-major over the valid region
    int map_width = 0;
    int map_height = 0;
    int downsample_factor = 1;         // 1 = no downsampling applied
};

struct MsSsimResult {
    double value = 0.0;
    int scales_used = 0;               // < 5 signals the reduced-scale fallback
};

/// Gaussian-weighted single-scale SSIM over the valid region (no padding).
SsimResult ssim(const LumaImage& ref, const LumaImage& dist, const SsimParams& params = {});

/// Multi-scale SSIM: contrast*structure at dyadic scales plus luminance at
/// the coarsest scale, exponent-weighted. Falls back to fewer scales with
/// renormalized exponents when the images are too small for all five.
MsSsimResult ms_ssim(const LumaImage& ref, const LumaImage& dist, const SsimParams& params = {});

/// Gradient magnitude similarity deviation: population standard deviation of
/// the Prewitt gradient-similarity map after 2x2 mean downsampling. Lower is
/// better; identical images score 0.
double gmsd(const LumaImage& ref, const LumaImage& dist);

/// Maps a raw metric value to a similarity in [0, 1] with 1 = identical.
/// Similarity metrics are scaled by the upper bound of their native range
/// and clamped; distortion metrics map to 1 - clamp(value / upper, 0, 1).
SimilarityScore normalize_direction(const MetricKind& kind, double raw_value);
SimilarityScore normalize_direction(const MetricScore& score);

} // namespace lfiqa

#endif
