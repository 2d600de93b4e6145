#include "lfiqa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace lfiqa {

namespace {

// Internal working buffer. Unlike LumaImage it may hold products and other
// intermediate values outside [0, 255].
struct Grid {
    int w = 0;
    int h = 0;
    std::vector<double> v;

    Grid() = default;
    Grid(int width, int height) : w(width), h(height), v(size_t(width) * height) {}
    double at(int x, int y) const { return v[size_t(y) * w + x]; }
    double& at(int x, int y) { return v[size_t(y) * w + x]; }
};

Grid to_grid(const LumaImage& img) {
    Grid g(img.width, img.height);
    g.v = img.data;
    return g;
}

Grid block_mean_downsample(const Grid& in, int f) {
    Grid out(in.w / f, in.h / f);
    const double inv = 1.0 / (double(f) * f);
#pragma omp parallel for
    for (int y = 0; y < out.h; ++y) {
        for (int x = 0; x < out.w; ++x) {
            double sum = 0.0;
            for (int dy = 0; dy < f; ++dy)
                for (int dx = 0; dx < f; ++dx)
                    sum += in.at(x * f + dx, y * f + dy);
            out.at(x, y) = sum * inv;
        }
    }
    return out;
}

std::vector<double> gaussian_taps(int size, double sigma) {
    std::vector<double> taps(size);
    const double mid = (size - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        double d = i - mid;
        taps[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
        sum += taps[i];
    }
    for (double& t : taps)
        t /= sum;
    return taps;
}

// Valid-region separable convolution (output shrinks by taps.size()-1).
Grid convolve_valid(const Grid& in, const std::vector<double>& taps) {
    const int k = static_cast<int>(taps.size());
    Grid horz(in.w - k + 1, in.h);
#pragma omp parallel for
    for (int y = 0; y < horz.h; ++y) {
        for (int x = 0; x < horz.w; ++x) {
            double sum = 0.0;
            for (int i = 0; i < k; ++i)
                sum += taps[i] * in.at(x + i, y);
            horz.at(x, y) = sum;
        }
    }
    Grid out(horz.w, in.h - k + 1);
#pragma omp parallel for
    for (int y = 0; y < out.h; ++y) {
        for (int x = 0; x < out.w; ++x) {
            double sum = 0.0;
            for (int i = 0; i < k; ++i)
                sum += taps[i] * horz.at(x, y + i);
            out.at(x, y) = sum;
        }
    }
    return out;
}

Grid multiply(const Grid& a, const Grid& b) {
    Grid out(a.w, a.h);
    const int64_t n = static_cast<int64_t>(out.v.size());
#pragma omp parallel for
    for (int64_t i = 0; i < n; ++i)
        out.v[i] = a.v[i] * b.v[i];
    return out;
}

// Gaussian-weighted local means, variances and covariance over the valid
// region: sigma = E[xy] - E[x]E[y] form.
struct LocalStats {
    Grid mx, my, sxx, syy, sxy;
};

LocalStats local_stats(const Grid& x, const Grid& y, const std::vector<double>& taps) {
    LocalStats s;
    s.mx = convolve_valid(x, taps);
    s.my = convolve_valid(y, taps);
    s.sxx = convolve_valid(multiply(x, x), taps);
    s.syy = convolve_valid(multiply(y, y), taps);
    s.sxy = convolve_valid(multiply(x, y), taps);
    const int64_t n = static_cast<int64_t>(s.mx.v.size());
#pragma omp parallel for
    for (int64_t i = 0; i < n; ++i) {
        s.sxx.v[i] -= s.mx.v[i] * s.mx.v[i];
        s.syy.v[i] -= s.my.v[i] * s.my.v[i];
        s.sxy.v[i] -= s.mx.v[i] * s.my.v[i];
    }
    return s;
}

// Serial summation keeps scores independent of thread count.
double mean_of(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v)
        sum += x;
    return sum / double(v.size());
}

void require_same_dims(const LumaImage& a, const LumaImage& b, const char* op) {
    if (a.width != b.width || a.height != b.height)
        throw Error(std::string(op) + ": dimension mismatch (" + std::to_string(a.width) + "x" +
                    std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                    std::to_string(b.height) + ")");
}

void validate_ssim_params(const SsimParams& p) {
    if (p.window_size < 1 || p.window_size % 2 == 0)
        throw Error("ssim: window size must be odd and positive");
    if (!(p.sigma > 0.0) || !(p.k1 > 0.0) || !(p.k2 > 0.0) || !(p.dynamic_range > 0.0))
        throw Error("ssim: sigma, k1, k2 and dynamic range must be positive");
}

constexpr double kMsSsimWeights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

} // namespace

MetricKind MetricKind::ssim() {
    return {"ssim", Direction::SimilarityHigherBetter, {-1.0, 1.0}};
}
MetricKind MetricKind::ms_ssim() {
    return {"ms-ssim", Direction::SimilarityHigherBetter, {0.0, 1.0}};
}
MetricKind MetricKind::gmsd() {
    return {"gmsd", Direction::DistortionLowerBetter, {0.0, 1.0}};
}
MetricKind MetricKind::ingested(std::string label, Direction direction, Interval native_range) {
    if (!(native_range.lo <= native_range.hi))
        throw Error("metric '" + label + "': empty native range");
    return {std::move(label), direction, native_range};
}

SsimResult ssim(const LumaImage& ref, const LumaImage& dist, const SsimParams& params) {
    require_same_dims(ref, dist, "ssim");
    validate_ssim_params(params);

    Grid x = to_grid(ref);
    Grid y = to_grid(dist);

    int f = 1;
    if (params.auto_downsample)
        f = std::max(1, static_cast<int>(std::lround(std::min(x.h, x.w) / 256.0)));
    if (f > 1) {
        if (x.w / f < 1 || x.h / f < 1)
            throw Error("ssim: image too small to downsample");
        x = block_mean_downsample(x, f);
        y = block_mean_downsample(y, f);
    }
    if (x.w < params.window_size || x.h < params.window_size)
        throw Error("ssim: image smaller than window (" + std::to_string(x.w) + "x" +
                    std::to_string(x.h) + " after downsampling, window " +
                    std::to_string(params.window_size) + ")");

    const double L = params.dynamic_range;
    const double c1 = (params.k1 * L) * (params.k1 * L);
    const double c2 = (params.k2 * L) * (params.k2 * L);
    const auto taps = gaussian_taps(params.window_size, params.sigma);
    LocalStats s = local_stats(x, y, taps);

    SsimResult result;
    result.map_width = s.mx.w;
    result.map_height = s.mx.h;
    result.downsample_factor = f;
    result.window_map.resize(s.mx.v.size());
    const int64_t n = static_cast<int64_t>(s.mx.v.size());
#pragma omp parallel for
    for (int64_t i = 0; i < n; ++i) {
        double mx = s.mx.v[i], my = s.my.v[i];
        result.window_map[i] = ((2.0 * mx * my + c1) * (2.0 * s.sxy.v[i] + c2)) /
                               ((mx * mx + my * my + c1) * (s.sxx.v[i] + s.syy.v[i] + c2));
    }
    result.value = mean_of(result.window_map);
    return result;
}

MsSsimResult ms_ssim(const LumaImage& ref, const LumaImage& dist, const SsimParams& params) {
    require_same_dims(ref, dist, "ms-ssim");
    validate_ssim_params(params);

    Grid x = to_grid(ref);
    Grid y = to_grid(dist);

    // Largest scale count (up to 5) for which every pyramid level still
    // accommodates the window; dimensions halve (floor) between levels.
    int scales = 0;
    {
        int h = x.h, w = x.w;
        while (scales < 5 && std::min(h, w) >= params.window_size) {
            ++scales;
            h /= 2;
            w /= 2;
        }
    }
    if (scales == 0)
        throw Error("ms-ssim: image smaller than window (" + std::to_string(x.w) + "x" +
                    std::to_string(x.h) + ")");

    // Exponents are used verbatim at the full 5 scales; the reduced-scale
    // fallback renormalizes them to sum 1.
    double weights[5];
    for (int i = 0; i < scales; ++i)
        weights[i] = kMsSsimWeights[i];
    if (scales < 5) {
        double wsum = 0.0;
        for (int i = 0; i < scales; ++i)
            wsum += kMsSsimWeights[i];
        for (int i = 0; i < scales; ++i)
            weights[i] /= wsum;
    }

    const double L = params.dynamic_range;
    const double c1 = (params.k1 * L) * (params.k1 * L);
    const double c2 = (params.k2 * L) * (params.k2 * L);
    const auto taps = gaussian_taps(params.window_size, params.sigma);

    double value = 1.0;
    for (int scale = 0; scale < scales; ++scale) {
        LocalStats s = local_stats(x, y, taps);
        std::vector<double> cs_map(s.mx.v.size());
        const int64_t n = static_cast<int64_t>(cs_map.size());
#pragma omp parallel for
        for (int64_t i = 0; i < n; ++i)
            cs_map[i] = (2.0 * s.sxy.v[i] + c2) / (s.sxx.v[i] + s.syy.v[i] + c2);
        double mean_cs = mean_of(cs_map);
        value *= std::pow(std::max(mean_cs, 0.0), weights[scale]);

        if (scale == scales - 1) {
            std::vector<double> l_map(s.mx.v.size());
#pragma omp parallel for
            for (int64_t i = 0; i < n; ++i) {
                double mx = s.mx.v[i], my = s.my.v[i];
                l_map[i] = (2.0 * mx * my + c1) / (mx * mx + my * my + c1);
            }
            value *= std::pow(std::max(mean_of(l_map), 0.0), weights[scale]);
        } else {
            x = block_mean_downsample(x, 2);
            y = block_mean_downsample(y, 2);
        }
    }
    return {value, scales};
}

double gmsd(const LumaImage& ref, const LumaImage& dist) {
    require_same_dims(ref, dist, "gmsd");
    if (ref.width < 6 || ref.height < 6)
        throw Error("gmsd: image too small (need at least 6x6 for a valid gradient window "
                    "after 2x2 downsampling)");

    Grid x = block_mean_downsample(to_grid(ref), 2);
    Grid y = block_mean_downsample(to_grid(dist), 2);

    // Prewitt 3x3, valid region only; c = 170 for the 255 dynamic range.
    constexpr double c = 170.0;
    const int mw = x.w - 2, mh = x.h - 2;
    std::vector<double> gms(size_t(mw) * mh);
#pragma omp parallel for
    for (int j = 0; j < mh; ++j) {
        for (int i = 0; i < mw; ++i) {
            double gx_r = 0.0, gy_r = 0.0, gx_d = 0.0, gy_d = 0.0;
            for (int t = 0; t < 3; ++t) {
                gx_r += (x.at(i, j + t) - x.at(i + 2, j + t)) / 3.0;
                gy_r += (x.at(i + t, j) - x.at(i + t, j + 2)) / 3.0;
                gx_d += (y.at(i, j + t) - y.at(i + 2, j + t)) / 3.0;
                gy_d += (y.at(i + t, j) - y.at(i + t, j + 2)) / 3.0;
            }
            double gr = std::sqrt(gx_r * gx_r + gy_r * gy_r);
            double gd = std::sqrt(gx_d * gx_d + gy_d * gy_d);
            gms[size_t(j) * mw + i] = (2.0 * gr * gd + c) / (gr * gr + gd * gd + c);
        }
    }

    double mean = mean_of(gms);
    double var = 0.0;
    for (double v : gms) {
        double d = v - mean;
        var += d * d;
    }
    return std::sqrt(var / double(gms.size())); // population deviation
}

SimilarityScore normalize_direction(const MetricKind& kind, double raw_value) {
    const double hi = kind.native_range.hi;
    if (!(hi > 0.0))
        throw Error("metric '" + kind.label + "': native range upper bound must be positive");
    double s;
    if (kind.direction == Direction::SimilarityHigherBetter)
        s = std::clamp(raw_value / hi, 0.0, 1.0);
    else
        s = 1.0 - std::clamp(raw_value / hi, 0.0, 1.0);
    return {s, kind};
}

SimilarityScore normalize_direction(const MetricScore& score) {
    return normalize_direction(score.kind, score.value);
}

} // namespace lfiqa
