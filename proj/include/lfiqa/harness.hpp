#ifndef LFIQA_HARNESS_HPP
#define LFIQA_HARNESS_HPP

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "lfiqa/dataset.hpp"
#include "lfiqa/image.hpp"
#include "lfiqa/metrics.hpp"
#include "lfiqa/score_set.hpp"
#include "lfiqa/stats.hpp"

namespace lfiqa {

/// Resolves dataset image ids to files under a root directory and caches
/// decoded reference planes (each reference is shared by many distorted
/// images). Lookup tries the id verbatim, with .bmp/.png extensions, case
/// variants, and the TID-style reference_images/ and distorted_images/
/// subdirectories.
class ImageStore {
public:
    explicit ImageStore(std::filesystem::path root) : root_(std::move(root)) {}

    std::optional<std::filesystem::path> resolve(const std::string& id) const;

    /// Decoded image; references are cached, distorted images are not.
    std::shared_ptr<const LumaImage> load_reference(const std::string& id) const;
    LumaImage load_distorted(const std::string& id) const;

private:
    std::filesystem::path root_;
    mutable std::map<std::string, std::shared_ptr<const LumaImage>> reference_cache_;
};

/// Names accepted for native metrics: "ssim", "ms-ssim", "gmsd".
bool is_native_metric(const std::string& name);
MetricKind native_metric_kind(const std::string& name);

/// Scorer computing a native metric over the manifest's images. The store
/// must outlive the scorer.
Scorer make_native_scorer(const std::string& name, std::shared_ptr<ImageStore> store,
                          const SsimParams& params = {});

/// Scorer backed by an ingested score set.
Scorer make_ingested_scorer(ScoreSet scores);

} // namespace lfiqa

#endif
