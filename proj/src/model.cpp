#include "vidmetrics/model.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

namespace vidmetrics {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidToken: return "InvalidToken";
    case ErrorKind::DuplicateItem: return "DuplicateItem";
    case ErrorKind::NonContiguousRanks: return "NonContiguousRanks";
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::UnknownVideo: return "UnknownVideo";
    case ErrorKind::FrameOutOfRange: return "FrameOutOfRange";
    case ErrorKind::BadConfidence: return "BadConfidence";
    case ErrorKind::BadStratum: return "BadStratum";
    case ErrorKind::ItemInMultipleStrata: return "ItemInMultipleStrata";
    case ErrorKind::EmptyRunSet: return "EmptyRunSet";
    case ErrorKind::NoRelevant: return "NoRelevant";
    case ErrorKind::NoJudgedRelevant: return "NoJudgedRelevant";
    case ErrorKind::EmptyScores: return "EmptyScores";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NonPositiveRank: return "NonPositiveRank";
    case ErrorKind::RankAboveSetSize: return "RankAboveSetSize";
    case ErrorKind::DifferentVideo: return "DifferentVideo";
    case ErrorKind::NoReferenceInstances: return "NoReferenceInstances";
    case ErrorKind::ZeroNonReferenceDuration: return "ZeroNonReferenceDuration";
    case ErrorKind::EmptyCurve: return "EmptyCurve";
    case ErrorKind::NoActivities: return "NoActivities";
    case ErrorKind::NoReferences: return "NoReferences";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::LikertOutOfRange: return "LikertOutOfRange";
    case ErrorKind::EmptyGroup: return "EmptyGroup";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::TooFewTopics: return "TooFewTopics";
    case ErrorKind::NoCommonTopics: return "NoCommonTopics";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::Internal: return "Internal";
    }
    return "Unknown";
}

bool is_token(std::string_view s) noexcept {
    if (s.empty())
        return false;
    return std::none_of(s.begin(), s.end(),
                        [](unsigned char c) { return std::isspace(c) != 0 || c == '\0'; });
}

void require_token(std::string_view s, std::string_view what) {
    if (!is_token(s))
        throw Error(ErrorKind::InvalidToken,
                    std::string(what) + " is not a valid token: '" + std::string(s) + "'");
}

RankedRun validate_run(RankedRun run, int depth_limit) {
    require_token(run.run_tag, "run tag");
    for (auto& [topic, entries] : run.topics) {
        require_token(topic, "topic id");
        std::stable_sort(entries.begin(), entries.end(),
                         [](const RankedEntry& a, const RankedEntry& b) { return a.rank < b.rank; });
        if (static_cast<int64_t>(entries.size()) > depth_limit)
            throw Error(ErrorKind::DepthExceeded, "topic " + topic + ": " +
                                                      std::to_string(entries.size()) +
                                                      " entries exceed depth limit " +
                                                      std::to_string(depth_limit));
        std::set<std::string_view> seen;
        for (size_t i = 0; i < entries.size(); ++i) {
            const auto& e = entries[i];
            require_token(e.item, "item id");
            if (e.rank != static_cast<int>(i) + 1)
                throw Error(ErrorKind::NonContiguousRanks,
                            "topic " + topic + ": expected rank " + std::to_string(i + 1) +
                                ", found " + std::to_string(e.rank));
            if (!seen.insert(e.item).second)
                throw Error(ErrorKind::DuplicateItem,
                            "topic " + topic + ": duplicate item " + e.item);
        }
    }
    return run;
}

JudgmentPool validate_pool(JudgmentPool pool) {
    for (auto& [topic, tp] : pool.topics) {
        require_token(topic, "topic id");
        std::sort(tp.strata.begin(), tp.strata.end(),
                  [](const Stratum& a, const Stratum& b) { return a.id < b.id; });
        std::map<std::string_view, int> owner;
        for (size_t i = 0; i < tp.strata.size(); ++i) {
            const auto& s = tp.strata[i];
            if (i > 0 && tp.strata[i - 1].id == s.id)
                throw Error(ErrorKind::BadStratum,
                            "topic " + topic + ": stratum id repeated: " + std::to_string(s.id));
            if (!(s.rate > 0.0 && s.rate <= 1.0))
                throw Error(ErrorKind::BadStratum, "topic " + topic + ": stratum " +
                                                       std::to_string(s.id) +
                                                       " sampling rate outside (0,1]");
            for (const auto& item : s.members) {
                require_token(item, "item id");
                if (!owner.emplace(item, s.id).second)
                    throw Error(ErrorKind::ItemInMultipleStrata,
                                "topic " + topic + ": item " + item + " in strata " +
                                    std::to_string(owner[item]) + " and " + std::to_string(s.id));
            }
        }
        for (const auto& [item, rel] : tp.judgments) {
            if (!owner.contains(item))
                throw Error(ErrorKind::BadStratum,
                            "topic " + topic + ": judged item " + item + " is in no stratum");
        }
    }
    return pool;
}

std::map<TopicId, std::set<ItemId>> relevant_sets(const JudgmentPool& pool) {
    std::map<TopicId, std::set<ItemId>> out;
    for (const auto& [topic, tp] : pool.topics) {
        auto& rel = out[topic];
        for (const auto& [item, j] : tp.judgments)
            if (j == Relevance::relevant)
                rel.insert(item);
    }
    return out;
}

VideoIndex index_videos(std::span<const VideoMeta> metas) {
    VideoIndex index;
    for (const auto& m : metas) {
        require_token(m.video, "video id");
        if (m.n_frames < 1)
            throw Error(ErrorKind::InvalidArgument, "video " + m.video + ": n_frames must be >= 1");
        if (!(m.frame_rate > 0.0))
            throw Error(ErrorKind::InvalidArgument, "video " + m.video + ": frame_rate must be > 0");
        if (!index.emplace(m.video, m).second)
            throw Error(ErrorKind::InvalidArgument, "video " + m.video + " listed twice");
    }
    return index;
}

bool canonical_less(const ActivityInstance& a, const ActivityInstance& b) {
    const double ca = a.presence_conf.value_or(-1.0);
    const double cb = b.presence_conf.value_or(-1.0);
    return std::tie(a.video, a.begin_frame, a.end_frame, a.activity, ca) <
           std::tie(b.video, b.begin_frame, b.end_frame, b.activity, cb);
}

ActivityInstanceSet validate_instances(ActivityInstanceSet instances, const VideoIndex& videos,
                                       InstanceRole role) {
    for (const auto& inst : instances) {
        require_token(inst.activity, "activity");
        require_token(inst.video, "video id");
        auto it = videos.find(inst.video);
        if (it == videos.end())
            throw Error(ErrorKind::UnknownVideo, "unknown video " + inst.video);
        const auto span = "[" + std::to_string(inst.begin_frame) + "," +
                          std::to_string(inst.end_frame) + "]";
        if (inst.begin_frame < 0 || inst.end_frame < inst.begin_frame ||
            inst.end_frame > it->second.n_frames - 1)
            throw Error(ErrorKind::FrameOutOfRange,
                        "instance " + span + " outside video " + inst.video + " of " +
                            std::to_string(it->second.n_frames) + " frames");
        if (role == InstanceRole::reference) {
            if (inst.presence_conf)
                throw Error(ErrorKind::BadConfidence,
                            "reference instance " + span + " carries a confidence");
        } else {
            if (!inst.presence_conf)
                throw Error(ErrorKind::BadConfidence,
                            "system instance " + span + " lacks a confidence");
            const double c = *inst.presence_conf;
            if (!(c >= 0.0 && c <= 1.0))
                throw Error(ErrorKind::BadConfidence,
                            "system instance " + span + " confidence outside [0,1]");
        }
    }
    std::sort(instances.begin(), instances.end(), canonical_less);
    return instances;
}

}  // namespace vidmetrics
