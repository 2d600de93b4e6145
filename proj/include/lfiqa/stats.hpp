#ifndef LFIQA_STATS_HPP
#define LFIQA_STATS_HPP

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lfiqa/dataset.hpp"
#include "lfiqa/lf.hpp"
#include "lfiqa/metrics.hpp"

namespace lfiqa {

/// Sample Pearson correlation. Requires equal lengths >= 2 and non-constant
/// series.
double plcc(std::span<const double> xs, std::span<const double> ys);

enum class QualityLabel { Bad, Middle, Good };

/// MOS boundaries of the three quality groups. Half-open intervals with the
/// upper edge belonging to the lower group; records below bad_low still land
/// in "bad" and are counted as warnings.
struct QualityBounds {
    double bad_low = 0.242;
    double bad_high = 3.94;   // bad:    mos <= bad_high
    double middle_high = 5.25; // middle: bad_high < mos <= middle_high
                               // good:   mos > middle_high
};

struct QualityGroup {
    QualityLabel label = QualityLabel::Bad;
    double mos_low = 0.0;  // exclusive
    double mos_high = 0.0; // inclusive
    std::vector<DatasetRecord> members;
};

struct GroupedRecords {
    QualityGroup bad;
    QualityGroup middle;
    QualityGroup good;
    int below_range_count = 0; // records with mos < bounds.bad_low (kept in bad)
    const QualityGroup& for_target(double target_mos) const;
};

GroupedRecords group_by_quality(const DatasetManifest& manifest,
                                std::optional<QualityBounds> bounds = std::nullopt);

struct ProbeMember {
    DatasetRecord record;
    double similarity = 0.0;
    double lf = 0.0;
};

/// A fixed-quality probe sample: the n group members nearest to target_mos.
struct ProbeSet {
    double target_mos = 0.0;
    int n = 0;
    std::vector<ProbeMember> members;
    double mean_mos = 0.0;
    double mean_raw = 0.0;
    double mean_lf = 0.0;
};

/// Per-record similarity lookup; returns nullopt when a record cannot be
/// scored (e.g. missing ingested entry), in which case the next-nearest
/// record is taken instead.
using SimilarityLookup = std::function<std::optional<double>(const DatasetRecord&)>;

/// Picks the n records of `group` nearest to target_mos (ties broken by
/// ascending distorted_id), scores them, and computes the three averages.
ProbeSet select_probe_set(const QualityGroup& group, double target_mos, int n,
                          const SimilarityLookup& similarity, LfVariant variant);

/// Same, but with an explicit membership list (reproduces a published table
/// exactly). Every listed id must be present in the group and scorable.
ProbeSet select_probe_set_explicit(const QualityGroup& group, double target_mos,
                                   std::span<const std::string> distorted_ids,
                                   const SimilarityLookup& similarity, LfVariant variant);

/// |mean_a - mean_b| / scale_range; the paper's precision measure.
double discrimination_resolution(double mean_a, double mean_b, double scale_range);

/// A metric source for report building: label/direction plus a raw-score
/// function over records (nullopt = record not scorable by this metric).
struct Scorer {
    MetricKind kind;
    std::function<std::optional<double>(const DatasetRecord&)> raw_score;
};

struct ReportRow {
    std::string metric_label;
    double plcc_raw = 0.0;
    double plcc_lf = 0.0;
    int n_pairs = 0;
    int skipped = 0; // records this metric could not score
};

struct EvaluationReport {
    std::string dataset_label;
    LfVariant lf_variant = LfVariant::Eq1;
    std::vector<ReportRow> rows;
    std::vector<std::string> notes; // per-metric failures (too few pairs, constant series)
};

/// Per-metric PLCC of MOS against the normalized raw score and against its
/// LF mapping. Metrics that cannot produce a defined correlation are dropped
/// to notes instead of failing the report.
EvaluationReport build_evaluation_report(const DatasetManifest& manifest,
                                         const std::vector<Scorer>& scorers, LfVariant variant,
                                         const std::string& dataset_label = "");

/// CSV: "metric,plcc_raw,plcc_lf,n_pairs", 6 decimals.
std::string format_report_csv(const EvaluationReport& report);

struct PrecisionRow {
    std::string pair; // "good-middle" | "middle-bad"
    double mos_resolution = 0.0;
    double raw_resolution = 0.0;
    double lf_resolution = 0.0;
};

struct PrecisionReport {
    std::vector<ProbeSet> probes; // ordered by descending target (good, middle, bad)
    std::vector<PrecisionRow> rows;
    int below_range_count = 0;
};

/// Probe sets at the given MOS targets plus discrimination resolutions for
/// adjacent target pairs. MOS resolutions use the dataset scale; score and
/// LF resolutions use scale 1.
PrecisionReport build_precision_report(const DatasetManifest& manifest,
                                       std::span<const double> targets, int n,
                                       const SimilarityLookup& similarity, LfVariant variant,
                                       const std::map<double, std::vector<std::string>>*
                                           explicit_probes = nullptr);

/// CSV: "pair,mos_resolution,raw_resolution,lf_resolution", 6 decimals.
std::string format_precision_csv(const PrecisionReport& report);

struct ScatterRow {
    std::string distorted_id;
    double objective_score = 0.0;
    double mos = 0.0;
};

/// Scatter data for one metric: (id, score, mos) per scorable record, sorted
/// by distorted_id. With a variant, scores are LF-mapped.
std::vector<ScatterRow> scatter_rows(const DatasetManifest& manifest, const Scorer& scorer,
                                     std::optional<LfVariant> variant);

/// CSV: "distorted_id,objective_score,mos", 6 decimals.
std::string format_scatter_csv(std::span<const ScatterRow> rows);

/// Minimal SVG point plot with axis labels.
std::string render_scatter_svg(std::span<const ScatterRow> rows, const std::string& x_label,
                               const std::string& y_label, double mos_scale_max);

} // namespace lfiqa

#endif
