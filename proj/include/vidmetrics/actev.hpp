#pragma once

#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vidmetrics/model.hpp"

namespace vidmetrics::actev {

inline constexpr double kDefaultDelta = 0.2;
inline constexpr double kDefaultTfaLimit = 0.2;
inline constexpr double kDefaultFaPoint = 0.15;
inline constexpr double kSentinelThreshold = std::numeric_limits<double>::infinity();

/// Inclusive-frame intersection over union; 0 when disjoint.
double temporal_iou(const ActivityInstance& a, const ActivityInstance& b);

struct AlignmentResult {
    std::vector<std::pair<size_t, size_t>> pairs;  // (ref index, sys index), ascending ref index
    std::vector<size_t> missed;                    // ref indices
    std::vector<size_t> false_alarms;              // sys indices

    bool operator==(const AlignmentResult&) const = default;
};

/// One-to-one alignment over the gated graph (same video, IoU >= delta and
/// positive overlap). Pair count is maximized first, then total IoU. The solver
/// sees references ordered by begin frame and system instances by descending
/// confidence, so remaining ties resolve the same way for any input order.
/// Indices refer to the input spans.
AlignmentResult align(std::span<const ActivityInstance> ref, std::span<const ActivityInstance> sys,
                      double delta = kDefaultDelta);

struct Confusion {
    int64_t n_cd = 0;
    int64_t n_md = 0;
    int64_t n_fa = 0;
};

/// Counts after aligning only the system instances with confidence >= threshold.
Confusion confusion_at_threshold(std::span<const ActivityInstance> ref,
                                 std::span<const ActivityInstance> sys, double threshold,
                                 double delta = kDefaultDelta);

double pmiss(int64_t n_md, int64_t n_true);
double rfa(int64_t n_fa, double total_minutes);

/// Sum over all indexed videos of n_frames / frame_rate / 60.
double total_minutes(const VideoIndex& videos);

/// Time-based false alarm: sum over frames of max(0, S'_i - R'_i) divided by
/// the frames no reference instance covers, pooled over every indexed video.
double tfa(std::span<const ActivityInstance> ref, std::span<const ActivityInstance> sys,
           const VideoIndex& videos);

enum class FaAxis { tfa, rfa };

struct DetPoint {
    double threshold = 0.0;
    double tfa = 0.0;
    double rfa = 0.0;
    double pmiss = 1.0;

    bool operator==(const DetPoint&) const = default;
};

struct DetCurve {
    std::string activity;
    FaAxis axis = FaAxis::tfa;
    std::vector<DetPoint> points;  // ascending fa on `axis`, lower envelope

    double fa(const DetPoint& p) const { return axis == FaAxis::tfa ? p.tfa : p.rfa; }
};

/// Operating points at every distinct confidence plus the +inf sentinel, reduced
/// to the lower envelope on the chosen axis.
DetCurve det_curve(std::span<const ActivityInstance> ref, std::span<const ActivityInstance> sys,
                   const VideoIndex& videos, double delta, FaAxis axis);

/// Envelope miss probability at false-alarm value x (step semantics).
double pmiss_at_fa(const DetCurve& curve, double x);

/// (1/a) * integral over [0,a] of the step envelope, clamped to [0,1].
double naudc(const DetCurve& curve, double a = kDefaultTfaLimit);

struct ActivityScore {
    std::string activity;
    double naudc = 1.0;
    double pmiss_at_tfa = 1.0;
    double pmiss_at_rfa = 1.0;
};

struct AggregateScore {
    double mean_naudc = 0.0;
    double mean_pmiss_at_tfa = 0.0;
    double mean_pmiss_at_rfa = 0.0;
    size_t activities = 0;
};

AggregateScore aggregate(std::span<const ActivityScore> scores);

struct ScoringOptions {
    double delta = kDefaultDelta;
    double tfa_limit = kDefaultTfaLimit;
    double fa_point = kDefaultFaPoint;
};

struct ActivityResult {
    ActivityScore score;
    DetCurve tfa_curve;
    DetCurve rfa_curve;
};

struct EvaluationReport {
    std::vector<ActivityResult> activities;  // sorted by activity name
    std::vector<std::string> excluded;       // activities without reference instances
    AggregateScore aggregate;
};

/// Per-activity scoring over validated reference and system sets. Activities
/// with no reference instances are excluded and listed.
EvaluationReport evaluate(std::span<const ActivityInstance> ref,
                          std::span<const ActivityInstance> sys, const VideoIndex& videos,
                          const ScoringOptions& options = {});

}  // namespace vidmetrics::actev
