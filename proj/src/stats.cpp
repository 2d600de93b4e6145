#include "lfiqa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace lfiqa {

namespace {

std::string fmt6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

const char* label_name(QualityLabel label) {
    switch (label) {
    case QualityLabel::Bad:
        return "bad";
    case QualityLabel::Middle:
        return "middle";
    case QualityLabel::Good:
        return "good";
    }
    return "?";
}

} // namespace

double plcc(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw Error("plcc: length mismatch (" + std::to_string(xs.size()) + " vs " +
                    std::to_string(ys.size()) + ")");
    const size_t n = xs.size();
    if (n < 2)
        throw Error("plcc: need at least 2 points");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double dx = xs[i] - mx, dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw Error("plcc: constant series, correlation undefined");
    return sxy / std::sqrt(sxx * syy);
}

const QualityGroup& GroupedRecords::for_target(double target_mos) const {
    if (target_mos > good.mos_low)
        return good;
    if (target_mos > middle.mos_low)
        return middle;
    return bad;
}

GroupedRecords group_by_quality(const DatasetManifest& manifest,
                                std::optional<QualityBounds> bounds_opt) {
    if (manifest.records.empty())
        throw Error("group_by_quality: empty manifest");
    QualityBounds b = bounds_opt.value_or(QualityBounds{});

    GroupedRecords g;
    g.bad = {QualityLabel::Bad, b.bad_low, b.bad_high, {}};
    g.middle = {QualityLabel::Middle, b.bad_high, b.middle_high, {}};
    g.good = {QualityLabel::Good, b.middle_high, manifest.mos_scale_max, {}};
    for (const auto& rec : manifest.records) {
        if (rec.mos > b.middle_high) {
            g.good.members.push_back(rec);
        } else if (rec.mos > b.bad_high) {
            g.middle.members.push_back(rec);
        } else {
            if (rec.mos < b.bad_low)
                ++g.below_range_count; // kept in bad
            g.bad.members.push_back(rec);
        }
    }
    return g;
}

namespace {

ProbeSet finalize_probe_set(double target_mos, std::vector<ProbeMember> members) {
    ProbeSet set;
    set.target_mos = target_mos;
    set.n = static_cast<int>(members.size());
    double sm = 0.0, sr = 0.0, sl = 0.0;
    for (const auto& m : members) {
        sm += m.record.mos;
        sr += m.similarity;
        sl += m.lf;
    }
    set.mean_mos = sm / double(set.n);
    set.mean_raw = sr / double(set.n);
    set.mean_lf = sl / double(set.n);
    set.members = std::move(members);
    return set;
}

} // namespace

ProbeSet select_probe_set(const QualityGroup& group, double target_mos, int n,
                          const SimilarityLookup& similarity, LfVariant variant) {
    if (n < 1)
        throw Error("select_probe_set: n must be at least 1");

    std::vector<const DatasetRecord*> order;
    order.reserve(group.members.size());
    for (const auto& rec : group.members)
        order.push_back(&rec);
    std::sort(order.begin(), order.end(), [target_mos](const auto* a, const auto* b) {
        double da = std::abs(a->mos - target_mos), db = std::abs(b->mos - target_mos);
        if (da != db)
            return da < db;
        return a->distorted_id < b->distorted_id;
    });

    std::vector<ProbeMember> members;
    for (const auto* rec : order) {
        if (static_cast<int>(members.size()) == n)
            break;
        auto sim = similarity(*rec);
        if (!sim)
            continue; // unscorable, take the next-nearest instead
        members.push_back({*rec, *sim, lf_value(*sim, variant)});
    }
    if (static_cast<int>(members.size()) < n)
        throw Error("select_probe_set: group '" + std::string(label_name(group.label)) +
                    "' has only " + std::to_string(members.size()) + " scorable members, need " +
                    std::to_string(n));
    return finalize_probe_set(target_mos, std::move(members));
}

ProbeSet select_probe_set_explicit(const QualityGroup& group, double target_mos,
                                   std::span<const std::string> distorted_ids,
                                   const SimilarityLookup& similarity, LfVariant variant) {
    if (distorted_ids.empty())
        throw Error("select_probe_set: empty probe list");
    std::vector<ProbeMember> members;
    for (const auto& id : distorted_ids) {
        auto it = std::find_if(group.members.begin(), group.members.end(),
                               [&id](const DatasetRecord& r) { return r.distorted_id == id; });
        if (it == group.members.end())
            throw Error("select_probe_set: '" + id + "' is not in the " +
                        label_name(group.label) + " group");
        auto sim = similarity(*it);
        if (!sim)
            throw Error("select_probe_set: '" + id + "' has no score");
        members.push_back({*it, *sim, lf_value(*sim, variant)});
    }
    return finalize_probe_set(target_mos, std::move(members));
}

double discrimination_resolution(double mean_a, double mean_b, double scale_range) {
    if (!(scale_range > 0.0))
        throw Error("discrimination_resolution: scale range must be positive");
    return std::abs(mean_a - mean_b) / scale_range;
}

EvaluationReport build_evaluation_report(const DatasetManifest& manifest,
                                         const std::vector<Scorer>& scorers, LfVariant variant,
                                         const std::string& dataset_label) {
    if (scorers.empty())
        throw Error("build_evaluation_report: no metrics selected");

    // Deterministic aggregation order regardless of manifest or scoring order.
    std::vector<const DatasetRecord*> records;
    records.reserve(manifest.records.size());
    for (const auto& rec : manifest.records)
        records.push_back(&rec);
    std::sort(records.begin(), records.end(),
              [](const auto* a, const auto* b) { return a->distorted_id < b->distorted_id; });

    EvaluationReport report;
    report.dataset_label = dataset_label;
    report.lf_variant = variant;
    for (const auto& scorer : scorers) {
        std::vector<double> mos, raw, lf;
        int skipped = 0;
        for (const auto* rec : records) {
            auto value = scorer.raw_score(*rec);
            if (!value) {
                ++skipped;
                continue;
            }
            double sim = normalize_direction(scorer.kind, *value).value;
            mos.push_back(rec->mos);
            raw.push_back(sim);
            lf.push_back(lf_value(sim, variant));
        }
        if (mos.size() < 2) {
            report.notes.push_back("metric '" + scorer.kind.label + "': only " +
                                   std::to_string(mos.size()) + " scorable records, skipped");
            continue;
        }
        try {
            ReportRow row;
            row.metric_label = scorer.kind.label;
            row.plcc_raw = plcc(mos, raw);
            row.plcc_lf = plcc(mos, lf);
            row.n_pairs = static_cast<int>(mos.size());
            row.skipped = skipped;
            report.rows.push_back(std::move(row));
        } catch (const Error& e) {
            report.notes.push_back("metric '" + scorer.kind.label + "': " + e.what());
        }
    }
    return report;
}

std::string format_report_csv(const EvaluationReport& report) {
    std::string out = "metric,plcc_raw,plcc_lf,n_pairs\n";
    for (const auto& row : report.rows) {
        out += row.metric_label;
        out += ',';
        out += fmt6(row.plcc_raw);
        out += ',';
        out += fmt6(row.plcc_lf);
        out += ',';
        out += std::to_string(row.n_pairs);
        out += '\n';
    }
    return out;
}

PrecisionReport build_precision_report(const DatasetManifest& manifest,
                                       std::span<const double> targets, int n,
                                       const SimilarityLookup& similarity, LfVariant variant,
                                       const std::map<double, std::vector<std::string>>*
                                           explicit_probes) {
    if (targets.size() < 2)
        throw Error("build_precision_report: need at least two targets");

    GroupedRecords grouped = group_by_quality(manifest);

    std::vector<double> order(targets.begin(), targets.end());
    std::sort(order.begin(), order.end(), std::greater<>()); // good first

    PrecisionReport report;
    report.below_range_count = grouped.below_range_count;
    for (double target : order) {
        const QualityGroup& group = grouped.for_target(target);
        if (explicit_probes) {
            auto it = explicit_probes->find(target);
            if (it == explicit_probes->end())
                throw Error("build_precision_report: probe list has no entries for target " +
                            fmt6(target));
            report.probes.push_back(
                select_probe_set_explicit(group, target, it->second, similarity, variant));
        } else {
            report.probes.push_back(select_probe_set(group, target, n, similarity, variant));
        }
    }

    for (size_t i = 0; i + 1 < report.probes.size(); ++i) {
        const ProbeSet& a = report.probes[i];
        const ProbeSet& b = report.probes[i + 1];
        PrecisionRow row;
        row.pair = std::string(label_name(grouped.for_target(a.target_mos).label)) + "-" +
                   label_name(grouped.for_target(b.target_mos).label);
        row.mos_resolution =
            discrimination_resolution(a.mean_mos, b.mean_mos, manifest.mos_scale_max);
        row.raw_resolution = discrimination_resolution(a.mean_raw, b.mean_raw, 1.0);
        row.lf_resolution = discrimination_resolution(a.mean_lf, b.mean_lf, 1.0);
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string format_precision_csv(const PrecisionReport& report) {
    std::string out = "pair,mos_resolution,raw_resolution,lf_resolution\n";
    for (const auto& row : report.rows) {
        out += row.pair;
        out += ',';
        out += fmt6(row.mos_resolution);
        out += ',';
        out += fmt6(row.raw_resolution);
        out += ',';
        out += fmt6(row.lf_resolution);
        out += '\n';
    }
    return out;
}

std::vector<ScatterRow> scatter_rows(const DatasetManifest& manifest, const Scorer& scorer,
                                     std::optional<LfVariant> variant) {
    std::vector<const DatasetRecord*> records;
    records.reserve(manifest.records.size());
    for (const auto& rec : manifest.records)
        records.push_back(&rec);
    std::sort(records.begin(), records.end(),
              [](const auto* a, const auto* b) { return a->distorted_id < b->distorted_id; });

    std::vector<ScatterRow> rows;
    for (const auto* rec : records) {
        auto value = scorer.raw_score(*rec);
        if (!value)
            continue;
        double sim = normalize_direction(scorer.kind, *value).value;
        rows.push_back({rec->distorted_id, variant ? lf_value(sim, *variant) : sim, rec->mos});
    }
    return rows;
}

std::string format_scatter_csv(std::span<const ScatterRow> rows) {
    std::string out = "distorted_id,objective_score,mos\n";
    for (const auto& row : rows) {
        out += row.distorted_id;
        out += ',';
        out += fmt6(row.objective_score);
        out += ',';
        out += fmt6(row.mos);
        out += '\n';
    }
    return out;
}

std::string render_scatter_svg(std::span<const ScatterRow> rows, const std::string& x_label,
                               const std::string& y_label, double mos_scale_max) {
    const int width = 640, height = 480, margin = 56;
    const double plot_w = width - 2 * margin, plot_h = height - 2 * margin;
    auto px = [&](double score) { return margin + score * plot_w; }; // score in [0,1]
    auto py = [&](double mos) { return height - margin - (mos / mos_scale_max) * plot_h; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", margin,
                  height - margin, width - margin, height - margin);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n", margin,
                  margin, margin, height - margin);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\" font-size=\"14\">%s</text>\n",
                  width / 2, height - 12, x_label.c_str());
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"16\" y=\"%d\" text-anchor=\"middle\" font-size=\"14\" "
                  "transform=\"rotate(-90 16 %d)\">%s</text>\n",
                  height / 2, height / 2, y_label.c_str());
    svg += buf;
    // tick labels at the axis ends
    std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" font-size=\"11\">0</text>\n", margin,
                  height - margin + 16);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%d\" text-anchor=\"end\" font-size=\"11\">1</text>\n",
                  width - margin, height - margin + 16);
    svg += buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" text-anchor=\"end\" "
                  "font-size=\"11\">%g</text>\n", margin - 6, margin + 4, mos_scale_max);
    svg += buf;
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2\" fill=\"steelblue\"/>\n",
                      px(std::clamp(row.objective_score, 0.0, 1.0)),
                      py(std::clamp(row.mos, 0.0, mos_scale_max)));
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace lfiqa
