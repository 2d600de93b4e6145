#include "lfiqa/harness.hpp"

#include <algorithm>
#include <array>

#include "lfiqa/image_io.hpp"

namespace lfiqa {

namespace {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}
std::string to_upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    return s;
}

} // namespace

std::optional<std::filesystem::path> ImageStore::resolve(const std::string& id) const {
    static const std::array<const char*, 5> exts = {"", ".bmp", ".BMP", ".png", ".PNG"};
    static const std::array<const char*, 3> subdirs = {"", "reference_images",
                                                       "distorted_images"};
    const std::string variants[3] = {id, to_lower(id), to_upper(id)};
    for (const char* sub : subdirs) {
        std::filesystem::path dir = *sub ? root_ / sub : root_;
        for (const auto& name : variants) {
            for (const char* ext : exts) {
                std::filesystem::path candidate = dir / (name + ext);
                std::error_code ec;
                if (std::filesystem::is_regular_file(candidate, ec))
                    return candidate;
            }
        }
    }
    return std::nullopt;
}

std::shared_ptr<const LumaImage> ImageStore::load_reference(const std::string& id) const {
    auto it = reference_cache_.find(id);
    if (it != reference_cache_.end())
        return it->second;
    auto path = resolve(id);
    if (!path)
        return nullptr;
    auto img = std::make_shared<const LumaImage>(load_image(*path));
    reference_cache_.emplace(id, img);
    return img;
}

LumaImage ImageStore::load_distorted(const std::string& id) const {
    auto path = resolve(id);
    if (!path)
        throw Error("cannot find image for id '" + id + "'");
    return load_image(*path);
}

bool is_native_metric(const std::string& name) {
    return name == "ssim" || name == "ms-ssim" || name == "gmsd";
}

MetricKind native_metric_kind(const std::string& name) {
    if (name == "ssim")
        return MetricKind::ssim();
    if (name == "ms-ssim")
        return MetricKind::ms_ssim();
    if (name == "gmsd")
        return MetricKind::gmsd();
    throw Error("unknown native metric '" + name + "' (expected ssim, ms-ssim or gmsd)");
}

Scorer make_native_scorer(const std::string& name, std::shared_ptr<ImageStore> store,
                          const SsimParams& params) {
    MetricKind kind = native_metric_kind(name);
    auto compute = [name, store, params](const DatasetRecord& rec) -> std::optional<double> {
        auto ref = store->load_reference(rec.reference_id);
        auto dist_path = store->resolve(rec.distorted_id);
        if (!ref || !dist_path)
            return std::nullopt;
        LumaImage dist = load_image(*dist_path);
        if (name == "ssim")
            return ssim(*ref, dist, params).value;
        if (name == "ms-ssim")
            return ms_ssim(*ref, dist, params).value;
        return gmsd(*ref, dist);
    };
    return {std::move(kind), std::move(compute)};
}

Scorer make_ingested_scorer(ScoreSet scores) {
    MetricKind kind = scores.kind();
    auto set = std::make_shared<const ScoreSet>(std::move(scores));
    auto lookup = [set](const DatasetRecord& rec) { return set->find(rec.distorted_id); };
    return {std::move(kind), std::move(lookup)};
}

} // namespace lfiqa
