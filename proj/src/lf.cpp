#include "lfiqa/lf.hpp"

#include <algorithm>
#include <cmath>

namespace lfiqa {

double lf_value(double s, LfVariant variant) {
    if (!(s >= 0.0 && s <= 1.0))
        throw Error("lf: input " + std::to_string(s) + " outside [0, 1]");
    switch (variant) {
    case LfVariant::Eq1:
        return 1.0 - std::sqrt(1.0 - s);
    case LfVariant::Eq2:
        return 1.0 - std::sqrt(1.0 - s * s);
    case LfVariant::Eq3:
        return 1.0 - std::cbrt(1.0 - s * s);
    }
    throw Error("lf: unknown variant");
}

LfScore lf_map(const SimilarityScore& s, LfVariant variant) {
    return {lf_value(s.value, variant), variant, LfMode::Final, s.source_kind};
}

LfScore lf_per_window(std::span<const double> window_map, LfVariant variant,
                      const MetricKind& source_kind) {
    if (window_map.empty())
        throw Error("lf: empty window map");
    double sum = 0.0;
    for (double w : window_map)
        sum += lf_value(std::clamp(w, 0.0, 1.0), variant);
    return {sum / double(window_map.size()), variant, LfMode::PerWindow, source_kind};
}

std::string_view to_string(LfVariant variant) {
    switch (variant) {
    case LfVariant::Eq1:
        return "eq1";
    case LfVariant::Eq2:
        return "eq2";
    case LfVariant::Eq3:
        return "eq3";
    }
    return "?";
}

std::optional<LfVariant> parse_lf_variant(std::string_view name) {
    if (name == "eq1")
        return LfVariant::Eq1;
    if (name == "eq2")
        return LfVariant::Eq2;
    if (name == "eq3")
        return LfVariant::Eq3;
    return std::nullopt;
}

} // namespace lfiqa
