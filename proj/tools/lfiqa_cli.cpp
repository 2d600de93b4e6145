#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lfiqa/dataset.hpp"
#include "lfiqa/harness.hpp"
#include "lfiqa/image_io.hpp"
#include "lfiqa/lf.hpp"
#include "lfiqa/metrics.hpp"
#include "lfiqa/score_set.hpp"
#include "lfiqa/stats.hpp"

namespace {

using namespace lfiqa;

struct IngestSpec {
    std::string label;
    Direction direction;
    Interval range;
    std::filesystem::path path;
};

struct RunConfig {
    std::filesystem::path manifest_path;
    std::string format = "tid-mos-names";
    double mos_scale = 0.0; // 0 = unset
    std::filesystem::path image_root;
    std::vector<std::string> metrics;
    std::vector<IngestSpec> ingests;
    std::string lf = "eq1";
    std::string lf_mode = "final";
    std::vector<double> targets = {6.0, 4.0, 2.0};
    int probe_n = 10;
    std::filesystem::path probe_list;
    std::filesystem::path out_path;
    std::filesystem::path out_dir;
    std::string dataset_label;
    bool no_downsample = false;
    bool svg = false;
};

std::string fmt6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

IngestSpec parse_ingest_spec(const std::string& text) {
    // label:direction:min:max:path  (path may itself contain ':')
    std::vector<std::string> head;
    size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        size_t colon = text.find(':', pos);
        if (colon == std::string::npos)
            throw Error("bad --ingest spec '" + text + "' (expected label:direction:min:max:path)");
        head.push_back(text.substr(pos, colon - pos));
        pos = colon + 1;
    }
    IngestSpec spec;
    spec.label = head[0];
    if (head[1] == "higher")
        spec.direction = Direction::SimilarityHigherBetter;
    else if (head[1] == "lower")
        spec.direction = Direction::DistortionLowerBetter;
    else
        throw Error("bad --ingest direction '" + head[1] + "' (expected higher or lower)");
    try {
        spec.range = {std::stod(head[2]), std::stod(head[3])};
    } catch (const std::exception&) {
        throw Error("bad --ingest range in '" + text + "'");
    }
    spec.path = text.substr(pos);
    if (spec.label.empty() || spec.path.empty())
        throw Error("bad --ingest spec '" + text + "'");
    return spec;
}

ManifestFormat parse_format(const std::string& name) {
    if (name == "tid-mos-names")
        return ManifestFormat::TidMosNames;
    if (name == "generic-csv")
        return ManifestFormat::GenericCsv;
    throw Error("unknown manifest format '" + name + "'");
}

DatasetManifest load_manifest(const RunConfig& cfg) {
    ManifestFormat format = parse_format(cfg.format);
    double scale = cfg.mos_scale;
    if (scale <= 0.0) {
        if (format == ManifestFormat::GenericCsv)
            throw Error("--mos-scale is required with generic-csv manifests");
        scale = 8.0; // TID scale
    }
    DatasetManifest manifest = parse_manifest(cfg.manifest_path, format, scale);
    if (!cfg.image_root.empty())
        manifest.root_path = cfg.image_root;
    return manifest;
}

std::vector<Scorer> build_scorers(const RunConfig& cfg, const DatasetManifest& manifest) {
    std::vector<Scorer> scorers;
    SsimParams params;
    params.auto_downsample = !cfg.no_downsample;
    auto store = std::make_shared<ImageStore>(manifest.root_path);
    for (const auto& name : cfg.metrics) {
        if (!is_native_metric(name))
            throw Error("unknown metric '" + name + "' (natives: ssim, ms-ssim, gmsd; use "
                        "--ingest for precomputed scores)");
        scorers.push_back(make_native_scorer(name, store, params));
    }
    for (const auto& spec : cfg.ingests)
        scorers.push_back(make_ingested_scorer(
            ingest_scores(spec.path, spec.label, spec.direction, spec.range)));
    if (scorers.empty())
        throw Error("no metrics selected (pass --metrics and/or --ingest)");
    return scorers;
}

LfVariant require_variant(const std::string& name) {
    auto v = parse_lf_variant(name);
    if (!v)
        throw Error("unknown LF variant '" + name + "' (expected eq1, eq2 or eq3)");
    return *v;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    out << content;
    if (!out.flush())
        throw Error("cannot write " + path.string());
}

// Probe-list file: "<target_mos> <distorted_id>" per nonempty line.
std::map<double, std::vector<std::string>> read_probe_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open probe list: " + path.string());
    std::map<double, std::vector<std::string>> probes;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty())
            continue;
        size_t sp = line.find(' ');
        if (sp == std::string::npos)
            throw Error(path.string() + ": malformed probe line " + std::to_string(line_no));
        try {
            probes[std::stod(line.substr(0, sp))].push_back(line.substr(sp + 1));
        } catch (const std::exception&) {
            throw Error(path.string() + ": malformed probe line " + std::to_string(line_no));
        }
    }
    return probes;
}

int run_score(const RunConfig& cfg, const std::filesystem::path& ref_path,
              const std::filesystem::path& dist_path, const std::string& metric) {
    LumaImage ref = load_image(ref_path);
    LumaImage dist = load_image(dist_path);

    SsimParams params;
    params.auto_downsample = !cfg.no_downsample;

    MetricKind kind = native_metric_kind(metric);
    double raw = 0.0;
    std::vector<double> window_map;
    if (metric == "ssim") {
        SsimResult r = ssim(ref, dist, params);
        raw = r.value;
        window_map = std::move(r.window_map);
    } else if (metric == "ms-ssim") {
        MsSsimResult r = ms_ssim(ref, dist, params);
        raw = r.value;
        if (r.scales_used < 5)
            std::cerr << "note: ms-ssim fell back to " << r.scales_used << " scales\n";
    } else {
        raw = gmsd(ref, dist);
    }

    SimilarityScore sim = normalize_direction(kind, raw);
    std::string line = "metric=" + kind.label + " raw=" + fmt6(raw) +
                       " similarity=" + fmt6(sim.value);
    if (cfg.lf != "none") {
        LfVariant variant = require_variant(cfg.lf);
        double lf;
        if (cfg.lf_mode == "per-window") {
            if (metric != "ssim")
                throw Error("--lf-mode per-window is only available for ssim");
            lf = lf_per_window(window_map, variant, kind).value;
        } else if (cfg.lf_mode == "final") {
            lf = lf_map(sim, variant).value;
        } else {
            throw Error("unknown --lf-mode '" + cfg.lf_mode + "'");
        }
        line += " lf=" + fmt6(lf);
    }
    std::cout << line << "\n";
    return 0;
}

int run_evaluate(const RunConfig& cfg) {
    DatasetManifest manifest = load_manifest(cfg);
    std::vector<Scorer> scorers = build_scorers(cfg, manifest);
    LfVariant variant = require_variant(cfg.lf);

    std::string label = cfg.dataset_label.empty() ? cfg.manifest_path.stem().string()
                                                  : cfg.dataset_label;
    EvaluationReport report = build_evaluation_report(manifest, scorers, variant, label);
    for (const auto& note : report.notes)
        std::cerr << "note: " << note << "\n";
    for (const auto& row : report.rows)
        if (row.skipped > 0)
            std::cerr << "note: metric '" << row.metric_label << "': skipped " << row.skipped
                      << " unscorable records\n";
    if (report.rows.empty())
        throw Error("no metric produced a defined correlation");
    write_file(cfg.out_path, format_report_csv(report));
    std::cout << "wrote " << cfg.out_path.string() << " (" << report.rows.size()
              << " metrics, lf=" << to_string(variant) << ")\n";
    return 0;
}

int run_precision(const RunConfig& cfg, const std::string& metric) {
    DatasetManifest manifest = load_manifest(cfg);
    LfVariant variant = require_variant(cfg.lf);

    RunConfig metric_cfg = cfg;
    metric_cfg.metrics.clear();
    metric_cfg.ingests.clear();
    if (is_native_metric(metric)) {
        metric_cfg.metrics.push_back(metric);
    } else {
        for (const auto& spec : cfg.ingests)
            if (spec.label == metric)
                metric_cfg.ingests.push_back(spec);
        if (metric_cfg.ingests.empty())
            throw Error("metric '" + metric + "' is not native and no matching --ingest given");
    }
    Scorer scorer = build_scorers(metric_cfg, manifest).front();
    SimilarityLookup lookup = [&scorer](const DatasetRecord& rec) -> std::optional<double> {
        auto value = scorer.raw_score(rec);
        if (!value)
            return std::nullopt;
        return normalize_direction(scorer.kind, *value).value;
    };

    std::optional<std::map<double, std::vector<std::string>>> probes;
    std::vector<double> targets = cfg.targets;
    if (!cfg.probe_list.empty()) {
        probes = read_probe_list(cfg.probe_list);
        targets.clear();
        for (const auto& [target, ids] : *probes)
            targets.push_back(target);
    }
    if (cfg.probe_list.empty() && cfg.probe_n < 1)
        throw Error("--n must be at least 1");

    PrecisionReport report = build_precision_report(manifest, targets, cfg.probe_n, lookup,
                                                    variant, probes ? &*probes : nullptr);
    if (report.below_range_count > 0)
        std::cerr << "note: " << report.below_range_count
                  << " records below the bad-quality lower bound (kept in bad)\n";

    for (const auto& probe : report.probes) {
        std::cout << "# target " << fmt6(probe.target_mos) << " (n=" << probe.n
                  << "): mean mos=" << fmt6(probe.mean_mos) << " raw=" << fmt6(probe.mean_raw)
                  << " lf=" << fmt6(probe.mean_lf) << "\n";
        for (const auto& m : probe.members)
            std::cout << m.record.distorted_id << " " << fmt6(m.record.mos) << " "
                      << fmt6(m.similarity) << " " << fmt6(m.lf) << "\n";
    }
    for (const auto& row : report.rows)
        std::cout << row.pair << ": mos=" << fmt6(row.mos_resolution)
                  << " raw=" << fmt6(row.raw_resolution) << " lf=" << fmt6(row.lf_resolution)
                  << "\n";

    write_file(cfg.out_path, format_precision_csv(report));
    std::cout << "wrote " << cfg.out_path.string() << "\n";
    return 0;
}

int run_scatter(const RunConfig& cfg) {
    DatasetManifest manifest = load_manifest(cfg);
    std::vector<Scorer> scorers = build_scorers(cfg, manifest);
    std::optional<LfVariant> variant;
    if (cfg.lf != "none")
        variant = require_variant(cfg.lf);

    std::filesystem::create_directories(cfg.out_dir);
    int written = 0;
    for (const auto& scorer : scorers) {
        auto raw = scatter_rows(manifest, scorer, std::nullopt);
        if (raw.empty())
            throw Error("metric '" + scorer.kind.label + "': no scorable records");
        auto emit = [&](const std::vector<ScatterRow>& rows, const std::string& suffix,
                        const std::string& axis) {
            std::filesystem::path base = cfg.out_dir / ("scatter_" + scorer.kind.label + "_" +
                                                        suffix);
            write_file(base.string() + ".csv", format_scatter_csv(rows));
            ++written;
            if (cfg.svg)
                write_file(base.string() + ".svg",
                           render_scatter_svg(rows, axis, "MOS", manifest.mos_scale_max));
        };
        emit(raw, "raw", scorer.kind.label + " similarity");
        if (variant)
            emit(scatter_rows(manifest, scorer, variant), "lf",
                 "LF-" + scorer.kind.label + " (" + std::string(to_string(*variant)) + ")");
    }
    std::cout << "wrote " << written << " scatter files to " << cfg.out_dir.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Full-reference image-quality metrics with logistic-function score remapping"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::filesystem::path ref_path, dist_path;
    std::string metric;
    std::string metrics_csv;

    auto add_manifest_opts = [&cfg](CLI::App* cmd, bool need_out) {
        cmd->add_option("--manifest", cfg.manifest_path, "dataset manifest file")->required();
        cmd->add_option("--format", cfg.format, "manifest format: tid-mos-names | generic-csv");
        cmd->add_option("--mos-scale", cfg.mos_scale,
                        "MOS scale maximum (default 8 for tid-mos-names)");
        cmd->add_option("--images", cfg.image_root, "image root directory");
        cmd->add_option("--lf", cfg.lf, "LF variant: eq1 | eq2 | eq3");
        if (need_out)
            cmd->add_option("--out", cfg.out_path, "output CSV path")->required();
    };
    auto add_metric_opts = [&cfg, &metrics_csv](CLI::App* cmd) {
        cmd->add_option("--metrics", metrics_csv, "comma-separated native metrics");
        cmd->add_option_function<std::vector<std::string>>(
            "--ingest",
            [&cfg](const std::vector<std::string>& specs) {
                for (const auto& s : specs)
                    cfg.ingests.push_back(parse_ingest_spec(s));
            },
            "precomputed scores as label:direction:min:max:path");
        cmd->add_flag("--no-downsample", cfg.no_downsample, "disable SSIM auto-downsampling");
    };

    CLI::App* score = app.add_subcommand("score", "score one image pair");
    score->add_option("reference", ref_path, "reference image (BMP/PNG)")->required();
    score->add_option("distorted", dist_path, "distorted image (BMP/PNG)")->required();
    score->add_option("--metric", metric, "ssim | ms-ssim | gmsd")->required();
    score->add_option("--lf", cfg.lf, "LF variant: eq1 | eq2 | eq3 | none");
    score->add_option("--lf-mode", cfg.lf_mode, "final | per-window (ssim only)");
    score->add_flag("--no-downsample", cfg.no_downsample, "disable SSIM auto-downsampling");

    CLI::App* evaluate = app.add_subcommand("evaluate", "per-metric PLCC report over a dataset");
    add_manifest_opts(evaluate, true);
    add_metric_opts(evaluate);
    evaluate->add_option("--dataset-label", cfg.dataset_label, "label recorded in the report");

    CLI::App* precision = app.add_subcommand("precision",
                                             "quality-group discrimination resolutions");
    add_manifest_opts(precision, true);
    add_metric_opts(precision);
    precision->add_option("--metric", metric, "metric to probe (native or ingested label)")
        ->required();
    precision->add_option("--targets", cfg.targets, "probe target MOS values")
        ->delimiter(',');
    precision->add_option("--n", cfg.probe_n, "probe images per target");
    precision->add_option("--probe-list", cfg.probe_list,
                          "explicit probes: '<target> <distorted_id>' per line");

    CLI::App* scatter = app.add_subcommand("scatter", "per-metric scatter data export");
    add_manifest_opts(scatter, false);
    add_metric_opts(scatter);
    scatter->add_option("--out-dir", cfg.out_dir, "output directory")->required();
    scatter->add_flag("--svg", cfg.svg, "also render SVG point plots");

    CLI11_PARSE(app, argc, argv);

    if (!metrics_csv.empty()) {
        size_t start = 0;
        while (start <= metrics_csv.size()) {
            size_t comma = metrics_csv.find(',', start);
            if (comma == std::string::npos)
                comma = metrics_csv.size();
            if (comma > start)
                cfg.metrics.push_back(metrics_csv.substr(start, comma - start));
            start = comma + 1;
        }
    }

    try {
        if (score->parsed())
            return run_score(cfg, ref_path, dist_path, metric);
        if (evaluate->parsed())
            return run_evaluate(cfg);
        if (precision->parsed())
            return run_precision(cfg, metric);
        if (scatter->parsed())
            return run_scatter(cfg);
    } catch (const lfiqa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
