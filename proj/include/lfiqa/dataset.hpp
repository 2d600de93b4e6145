#ifndef LFIQA_DATASET_HPP
#define LFIQA_DATASET_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lfiqa {

/// One distorted image of a subjective-test dataset.
struct DatasetRecord {
    std::string reference_id;
    std::string distorted_id;
    double mos = 0.0;
    double mos_scale_max = 0.0;
    std::string distortion_tag; // empty when absent
};

struct DatasetManifest {
    std::vector<DatasetRecord> records;
    std::filesystem::path root_path; // image directory, may be empty
    double mos_scale_max = 0.0;
};

enum class ManifestFormat {
    TidMosNames, // "<mos> <distorted_filename>" per line (TID2013 mos_with_names.txt)
    GenericCsv,  // header "reference_id,distorted_id,mos[,distortion_tag]"
};

/// Reference id from a TID-style distorted filename: the substring before
/// the first underscore ("i03_08_1.bmp" -> "i03"). Without an underscore
/// the filename stem is returned.
std::string tid_reference_id(std::string_view distorted_filename);

DatasetManifest parse_manifest(const std::filesystem::path& path, ManifestFormat format,
                               double mos_scale_max);
DatasetManifest parse_manifest_text(std::string_view text, ManifestFormat format,
                                    double mos_scale_max, const std::string& origin = "<string>");

/// Inverse of parse_manifest_text for the same format; parse(serialize(m))
/// reproduces m record for record.
std::string serialize_manifest(const DatasetManifest& manifest, ManifestFormat format);

} // namespace lfiqa

#endif
