#include "lfiqa/image.hpp"

#include <algorithm>

namespace lfiqa {

LumaImage make_luma_image(int width, int height, std::vector<double> samples) {
    if (width < 1 || height < 1)
        throw Error("zero-dimension image (" + std::to_string(width) + "x" +
                    std::to_string(height) + ")");
    if (samples.size() != static_cast<size_t>(width) * static_cast<size_t>(height))
        throw Error("sample count does not match dimensions");
    for (double v : samples)
        if (!(v >= 0.0 && v <= 255.0))
            throw Error("luma sample outside [0, 255]");
    return LumaImage{width, height, std::move(samples)};
}

double luma_from_rgb(double r, double g, double b) {
    if (r == g && g == b)
        return std::clamp(r, 0.0, 255.0); // gray passes through untouched
    double y = 0.299 * r + 0.587 * g + 0.114 * b;
    return std::clamp(y, 0.0, 255.0);
}

} // namespace lfiqa
