#ifndef LFIQA_SCORE_SET_HPP
#define LFIQA_SCORE_SET_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "lfiqa/metrics.hpp"

namespace lfiqa {

/// Precomputed per-image scores for a metric that is not computed natively
/// (VMAF, FSIM, VSI, ...). Immutable after ingestion.
struct ScoreSet {
    std::string metric_label;
    Direction direction = Direction::SimilarityHigherBetter;
    Interval native_range{0.0, 1.0};
    std::map<std::string, double> entries; // distorted_id -> raw score

    std::optional<double> find(const std::string& distorted_id) const;
    MetricKind kind() const { return MetricKind::ingested(metric_label, direction, native_range); }
};

/// Reads a CSV with header "distorted_id,score". Scores outside the native
/// range and duplicate ids are rejected with the offending row number.
ScoreSet ingest_scores(const std::filesystem::path& path, std::string metric_label,
                       Direction direction, Interval native_range);
ScoreSet ingest_scores_text(std::string_view text, std::string metric_label,
                            Direction direction, Interval native_range,
                            const std::string& origin = "<string>");

} // namespace lfiqa

#endif
