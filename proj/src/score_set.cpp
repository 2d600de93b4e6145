#include "lfiqa/score_set.hpp"

#include <charconv>
#include <fstream>
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

} // namespace

std::optional<double> ScoreSet::find(const std::string& distorted_id) const {
    auto it = entries.find(distorted_id);
    if (it == entries.end())
        return std::nullopt;
    return it->second;
}

ScoreSet ingest_scores_text(std::string_view text, std::string metric_label, Direction direction,
                            Interval native_range, const std::string& origin) {
    if (!(native_range.lo <= native_range.hi))
        throw Error(origin + ": empty native range for metric '" + metric_label + "'");

    ScoreSet set;
    set.metric_label = std::move(metric_label);
    set.direction = direction;
    set.native_range = native_range;

    std::istringstream in{std::string(text)};
    std::string raw_line;
    int line_no = 0;
    bool header_done = false;
    while (std::getline(in, raw_line)) {
        ++line_no;
        std::string_view line = trim(raw_line);
        if (line.empty())
            continue;
        if (!header_done) {
            size_t comma = line.find(',');
            if (comma == std::string_view::npos || trim(line.substr(0, comma)) != "distorted_id" ||
                trim(line.substr(comma + 1)) != "score")
                throw Error(origin + ": bad header at line " + std::to_string(line_no) +
                            " (expected 'distorted_id,score')");
            header_done = true;
            continue;
        }
        size_t comma = line.rfind(',');
        if (comma == std::string_view::npos)
            throw Error(origin + ": malformed row at line " + std::to_string(line_no));
        std::string id(trim(line.substr(0, comma)));
        std::string_view score_text = trim(line.substr(comma + 1));
        double score = 0.0;
        auto [ptr, ec] = std::from_chars(score_text.data(), score_text.data() + score_text.size(),
                                         score);
        if (ec != std::errc() || ptr != score_text.data() + score_text.size() || id.empty())
            throw Error(origin + ": malformed row at line " + std::to_string(line_no));
        if (!set.native_range.contains(score))
            throw Error(origin + ": score " + std::to_string(score) + " outside native range at "
                        "line " + std::to_string(line_no));
        if (!set.entries.emplace(std::move(id), score).second)
            throw Error(origin + ": duplicate distorted_id at line " + std::to_string(line_no));
    }
    return set;
}

ScoreSet ingest_scores(const std::filesystem::path& path, std::string metric_label,
                       Direction direction, Interval native_range) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open score file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return ingest_scores_text(buf.str(), std::move(metric_label), direction, native_range,
                              path.string());
}

} // namespace lfiqa
