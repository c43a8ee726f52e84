#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vidmetrics/captions.hpp"
#include "vidmetrics/model.hpp"
#include "vidmetrics/vsum.hpp"

namespace vidmetrics::io {

/// Fixed six decimals; infinities print as "inf" / "-inf".
std::string format_real(double x);

std::string read_file(const std::filesystem::path& path);

// Ranked runs: `topic item rank score run_tag` per line, '#' comments.
RankedRun parse_run(std::string_view text, std::string_view source = "<run>",
                    Task task = Task::retrieval, int depth_limit = kDefaultDepthLimit);
RankedRun parse_run_file(const std::filesystem::path& path, Task task = Task::retrieval,
                         int depth_limit = kDefaultDepthLimit);
std::string write_run(const RankedRun& run);

// Pools: `topic stratum_id sampling_rate item [judgment]`, judgment 1 or 0,
// omitted for unjudged items.
JudgmentPool parse_pool(std::string_view text, std::string_view source = "<pool>");
std::string write_pool(const JudgmentPool& pool);

// Activity instances: one JSON object per line with activity, video,
// beginFrame, endFrame and (system only) presenceConf.
ActivityInstanceSet parse_instances(std::string_view text, std::string_view source = "<instances>");
std::string write_instances(const ActivityInstanceSet& instances);

// Videos: `video n_frames frame_rate`.
std::vector<VideoMeta> parse_videos(std::string_view text, std::string_view source = "<videos>");

struct Candidate {
    VideoId video;
    double confidence = 0.0;
    std::string sentence;
};

// `video TAB confidence TAB sentence`
std::vector<Candidate> parse_candidates(std::string_view text,
                                        std::string_view source = "<candidates>");
// `video TAB sentence`
std::map<VideoId, std::vector<std::string>> parse_references(
    std::string_view text, std::string_view source = "<references>");

// `worker_id,system_id,video_id,raw`, optional header line.
std::vector<captions::DaRating> parse_da_ratings(std::string_view text,
                                                 std::string_view source = "<ratings>");

// `team,run,query,tempo,contextuality,redundancy,q1,...,q5`, optional header line.
std::vector<vsum::AssessmentRecord> parse_vsum(std::string_view text,
                                               std::string_view source = "<vsum>");

struct ScoreRow {
    std::string run_tag;
    std::string topic;
    std::string measure;
    double value = 0.0;
};

// `run_tag,topic,measure,value`, optional header line.
std::vector<ScoreRow> parse_scores(std::string_view text, std::string_view source = "<scores>");
std::string write_scores(const std::vector<ScoreRow>& rows);

// `key value` pairs, whitespace separated (matching truth and fake-sentence files).
std::vector<std::pair<std::string, std::string>> parse_pairs(std::string_view text,
                                                             std::string_view source);

/// Lines with '\r' removed; blank lines and '#' comments skipped. Keeps 1-based numbers.
std::vector<std::pair<size_t, std::string>> content_lines(std::string_view text);

}  // namespace vidmetrics::io
