#include "lfiqa/dataset.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "lfiqa/image.hpp" // Error

namespace lfiqa {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view s, const std::string& origin, int line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(origin + ": malformed number '" + std::string(s) + "' at line " +
                    std::to_string(line_no));
    return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    size_t start = 0;
    for (size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return fields;
}

void check_record(const DatasetRecord& rec, std::set<std::string>& seen,
                  const std::string& origin, int line_no) {
    if (rec.reference_id.empty() || rec.distorted_id.empty())
        throw Error(origin + ": empty image id at line " + std::to_string(line_no));
    if (!(rec.mos >= 0.0 && rec.mos <= rec.mos_scale_max))
        throw Error(origin + ": mos " + std::to_string(rec.mos) + " outside [0, " +
                    std::to_string(rec.mos_scale_max) + "] at line " + std::to_string(line_no));
    if (!seen.insert(rec.distorted_id).second)
        throw Error(origin + ": duplicate distorted_id '" + rec.distorted_id + "' at line " +
                    std::to_string(line_no));
}

} // namespace

std::string tid_reference_id(std::string_view distorted_filename) {
    size_t us = distorted_filename.find('_');
    if (us != std::string_view::npos)
        return std::string(distorted_filename.substr(0, us));
    size_t dot = distorted_filename.rfind('.');
    return std::string(distorted_filename.substr(0, dot));
}

DatasetManifest parse_manifest_text(std::string_view text, ManifestFormat format,
                                    double mos_scale_max, const std::string& origin) {
    if (!(mos_scale_max > 0.0))
        throw Error(origin + ": mos_scale_max must be positive");

    DatasetManifest manifest;
    manifest.mos_scale_max = mos_scale_max;
    std::set<std::string> seen;

    std::istringstream in{std::string(text)};
    std::string raw_line;
    int line_no = 0;
    bool header_done = false;
    bool has_tag_column = false;
    while (std::getline(in, raw_line)) {
        ++line_no;
        std::string_view line = trim(raw_line);
        if (line.empty())
            continue;

        if (format == ManifestFormat::TidMosNames) {
            size_t sp = line.find_first_of(" \t");
            if (sp == std::string_view::npos)
                throw Error(origin + ": malformed line " + std::to_string(line_no) +
                            " (expected '<mos> <filename>')");
            DatasetRecord rec;
            rec.mos = parse_double(trim(line.substr(0, sp)), origin, line_no);
            rec.distorted_id = std::string(trim(line.substr(sp + 1)));
            rec.reference_id = tid_reference_id(rec.distorted_id);
            rec.mos_scale_max = mos_scale_max;
            check_record(rec, seen, origin, line_no);
            manifest.records.push_back(std::move(rec));
        } else {
            auto fields = split_csv(line);
            if (!header_done) {
                if (fields.size() < 3 || fields[0] != "reference_id" ||
                    fields[1] != "distorted_id" || fields[2] != "mos")
                    throw Error(origin + ": bad CSV header at line " + std::to_string(line_no) +
                                " (expected 'reference_id,distorted_id,mos[,distortion_tag]')");
                has_tag_column = fields.size() >= 4 && fields[3] == "distortion_tag";
                header_done = true;
                continue;
            }
            if (fields.size() != (has_tag_column ? 4u : 3u))
                throw Error(origin + ": malformed line " + std::to_string(line_no) +
                            " (wrong field count)");
            DatasetRecord rec;
            rec.reference_id = std::string(fields[0]);
            rec.distorted_id = std::string(fields[1]);
            rec.mos = parse_double(fields[2], origin, line_no);
            if (has_tag_column)
                rec.distortion_tag = std::string(fields[3]);
            rec.mos_scale_max = mos_scale_max;
            check_record(rec, seen, origin, line_no);
            manifest.records.push_back(std::move(rec));
        }
    }
    if (format == ManifestFormat::GenericCsv && !header_done && line_no > 0)
        throw Error(origin + ": missing CSV header");
    return manifest;
}

DatasetManifest parse_manifest(const std::filesystem::path& path, ManifestFormat format,
                               double mos_scale_max) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open manifest: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    DatasetManifest manifest = parse_manifest_text(buf.str(), format, mos_scale_max, path.string());
    manifest.root_path = path.parent_path();
    return manifest;
}

std::string serialize_manifest(const DatasetManifest& manifest, ManifestFormat format) {
    std::string out;
    char buf[64];
    bool any_tag = false;
    for (const auto& rec : manifest.records)
        any_tag = any_tag || !rec.distortion_tag.empty();

    if (format == ManifestFormat::GenericCsv)
        out += any_tag ? "reference_id,distorted_id,mos,distortion_tag\n"
                       : "reference_id,distorted_id,mos\n";
    for (const auto& rec : manifest.records) {
        // %.17g keeps the round-trip lossless
        std::snprintf(buf, sizeof buf, "%.17g", rec.mos);
        if (format == ManifestFormat::TidMosNames) {
            out += buf;
            out += ' ';
            out += rec.distorted_id;
        } else {
            out += rec.reference_id;
            out += ',';
            out += rec.distorted_id;
            out += ',';
            out += buf;
            if (any_tag) {
                out += ',';
                out += rec.distortion_tag;
            }
        }
        out += '\n';
    }
    return out;
}

} // namespace lfiqa
