#ifndef LFIQA_IMAGE_HPP
#define LFIQA_IMAGE_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lfiqa {

/// Error type thrown by all library operations.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Single-channel floating-point image plane, row-major, samples in [0, 255].
struct LumaImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return data.size(); }
};

/// Builds a LumaImage and enforces its invariants (positive dimensions,
/// data length = width*height, samples within [0, 255]).
LumaImage make_luma_image(int width, int height, std::vector<double> samples);

/// BT.601 full-range luma from real-valued RGB in [0, 255].
double luma_from_rgb(double r, double g, double b);

} // namespace lfiqa

#endif
