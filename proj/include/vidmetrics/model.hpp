#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vidmetrics {

enum class ErrorKind {
    // validation of inputs
    InvalidToken,
    DuplicateItem,
    NonContiguousRanks,
    DepthExceeded,
    UnknownVideo,
    FrameOutOfRange,
    BadConfidence,
    BadStratum,
    ItemInMultipleStrata,
    // scoring preconditions
    EmptyRunSet,
    NoRelevant,
    NoJudgedRelevant,
    EmptyScores,
    EmptyInput,
    NonPositiveRank,
    RankAboveSetSize,
    DifferentVideo,
    NoReferenceInstances,
    ZeroNonReferenceDuration,
    EmptyCurve,
    NoActivities,
    NoReferences,
    EmptyCorpus,
    ZeroVariance,
    LikertOutOfRange,
    EmptyGroup,
    LengthMismatch,
    TooFewTopics,
    NoCommonTopics,
    InvalidArgument,
    // input handling
    ParseError,
    ConfigError,
    IoError,
    // broken internal invariant
    Internal,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Opaque identifiers are non-empty tokens without whitespace.
bool is_token(std::string_view s) noexcept;
void require_token(std::string_view s, std::string_view what);

using TopicId = std::string;
using VideoId = std::string;
using ItemId = std::string;

enum class Task { retrieval, matching };

struct RankedEntry {
    ItemId item;
    int rank = 0;
    double score = 0.0;

    bool operator==(const RankedEntry&) const = default;
};

using RankedList = std::vector<RankedEntry>;

struct RankedRun {
    std::string run_tag;
    Task task = Task::retrieval;
    std::map<TopicId, RankedList> topics;

    bool operator==(const RankedRun&) const = default;
};

inline constexpr int kDefaultDepthLimit = 1000;

/// Sorts every topic by rank and checks ranks are 1..n, items distinct and
/// n <= depth_limit. Throws Error on the first violation.
RankedRun validate_run(RankedRun run, int depth_limit = kDefaultDepthLimit);

enum class Relevance { nonrelevant, relevant };

struct Stratum {
    int id = 0;
    double rate = 1.0;
    std::set<ItemId> members;

    bool operator==(const Stratum&) const = default;
};

struct TopicPool {
    std::vector<Stratum> strata;  // ascending id
    std::map<ItemId, Relevance> judgments;

    bool operator==(const TopicPool&) const = default;
};

struct JudgmentPool {
    std::map<TopicId, TopicPool> topics;

    bool operator==(const JudgmentPool&) const = default;
};

/// Strata disjoint, rates in (0,1], every judged item a member of exactly one stratum.
JudgmentPool validate_pool(JudgmentPool pool);

/// Relevant items per topic according to the pool's judgments.
std::map<TopicId, std::set<ItemId>> relevant_sets(const JudgmentPool& pool);

struct ActivityInstance {
    std::string activity;
    VideoId video;
    int64_t begin_frame = 0;  // inclusive
    int64_t end_frame = 0;    // inclusive
    std::optional<double> presence_conf;

    int64_t length() const noexcept { return end_frame - begin_frame + 1; }
    bool operator==(const ActivityInstance&) const = default;
};

using ActivityInstanceSet = std::vector<ActivityInstance>;

struct VideoMeta {
    VideoId video;
    int64_t n_frames = 1;
    double frame_rate = 30.0;

    double minutes() const noexcept { return static_cast<double>(n_frames) / frame_rate / 60.0; }
    bool operator==(const VideoMeta&) const = default;
};

using VideoIndex = std::map<VideoId, VideoMeta>;

VideoIndex index_videos(std::span<const VideoMeta> metas);

enum class InstanceRole { reference, system };

/// Checks spans against video lengths and the confidence rule for the role.
/// Returns the set in canonical order (video, activity, begin, end, confidence).
ActivityInstanceSet validate_instances(ActivityInstanceSet instances, const VideoIndex& videos,
                                       InstanceRole role);

bool canonical_less(const ActivityInstance& a, const ActivityInstance& b);

}  // namespace vidmetrics
