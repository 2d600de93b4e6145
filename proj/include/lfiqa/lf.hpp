#ifndef LFIQA_LF_HPP
#define LFIQA_LF_HPP

#include <optional>
#include <span>
#include <string_view>

#include "lfiqa/metrics.hpp"

namespace lfiqa {

/// The logistic-function mapping family over similarity scores in [0, 1]:
///   eq1: 1 - (1 - s)^(1/2)
///   eq2: 1 - (1 - s^2)^(1/2)
///   eq3: 1 - (1 - s^2)^(1/3)
/// eq1 is the default everywhere.
enum class LfVariant { Eq1, Eq2, Eq3 };

enum class LfMode { Final, PerWindow };

struct LfScore {
    double value = 0.0;
    LfVariant variant = LfVariant::Eq1;
    LfMode mode = LfMode::Final;
    MetricKind source_kind;
};

/// Raw mapping formula. The argument must already lie in [0, 1]; anything
/// else throws, so the square root never sees a negative operand.
double lf_value(double s, LfVariant variant);

/// Maps a direction-normalized final score.
LfScore lf_map(const SimilarityScore& s, LfVariant variant);

/// Per-window mode: each window value is clamped to [0, 1], mapped, then
/// mean-pooled. Not equivalent to lf_map of the pooled score (the mapping
/// is nonlinear); for eq1 it is never smaller.
LfScore lf_per_window(std::span<const double> window_map, LfVariant variant,
                      const MetricKind& source_kind);

std::string_view to_string(LfVariant variant);
std::optional<LfVariant> parse_lf_variant(std::string_view name); // "eq1" | "eq2" | "eq3"

} // namespace lfiqa

#endif
