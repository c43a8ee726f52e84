#include "vidmetrics/actev.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include "vidmetrics/assignment.hpp"

namespace vidmetrics::actev {

double temporal_iou(const ActivityInstance& a, const ActivityInstance& b) {
    if (a.video != b.video)
        throw Error(ErrorKind::DifferentVideo,
                    "instances on different videos: " + a.video + " vs " + b.video);
    const int64_t lo = std::max(a.begin_frame, b.begin_frame);
    const int64_t hi = std::min(a.end_frame, b.end_frame);
    if (hi < lo)
        return 0.0;
    const int64_t inter = hi - lo + 1;
    const int64_t uni = a.length() + b.length() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

AlignmentResult align(std::span<const ActivityInstance> ref, std::span<const ActivityInstance> sys,
                      double delta) {
    // References by (video, begin, end); system instances by descending confidence.
    std::vector<size_t> ref_order(ref.size()), sys_order(sys.size());
    std::iota(ref_order.begin(), ref_order.end(), size_t{0});
    std::iota(sys_order.begin(), sys_order.end(), size_t{0});
    std::stable_sort(ref_order.begin(), ref_order.end(), [&](size_t a, size_t b) {
        return std::tie(ref[a].video, ref[a].begin_frame, ref[a].end_frame) <
               std::tie(ref[b].video, ref[b].begin_frame, ref[b].end_frame);
    });
    std::stable_sort(sys_order.begin(), sys_order.end(), [&](size_t a, size_t b) {
        const double ca = sys[a].presence_conf.value_or(0.0);
        const double cb = sys[b].presence_conf.value_or(0.0);
        if (ca != cb)
            return ca > cb;
        return std::tie(sys[a].video, sys[a].begin_frame, sys[a].end_frame) <
               std::tie(sys[b].video, sys[b].begin_frame, sys[b].end_frame);
    });

    // Independent subproblem per video.
    std::map<VideoId, std::pair<std::vector<size_t>, std::vector<size_t>>> by_video;
    for (size_t r : ref_order)
        by_video[ref[r].video].first.push_back(r);
    for (size_t s : sys_order)
        by_video[sys[s].video].second.push_back(s);

    AlignmentResult out;
    std::vector<char> ref_used(ref.size(), 0), sys_used(sys.size(), 0);
    for (const auto& [video, group] : by_video) {
        const auto& [rs, ss] = group;
        if (rs.empty() || ss.empty())
            continue;
        const int n = static_cast<int>(rs.size());
        const int m = static_cast<int>(ss.size());
        // Any matching has total IoU <= min(n, m) < bonus, so pair count dominates.
        const double bonus = static_cast<double>(std::min(n, m)) + 1.0;
        WeightMatrix w(n, m);
        bool any_edge = false;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m; ++j) {
                const double iou = temporal_iou(ref[rs[i]], sys[ss[j]]);
                if (iou > 0.0 && iou >= delta) {
                    w.at(i, j) = bonus + iou;
                    any_edge = true;
                }
            }
        }
        if (!any_edge)
            continue;
        const auto assignment = max_weight_assignment(w);
        for (int i = 0; i < n; ++i) {
            const int j = assignment[i];
            if (j >= 0 && w.at(i, j) > 0.0) {
                out.pairs.emplace_back(rs[i], ss[j]);
                ref_used[rs[i]] = 1;
                sys_used[ss[j]] = 1;
            }
        }
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    for (size_t r = 0; r < ref.size(); ++r)
        if (!ref_used[r])
            out.missed.push_back(r);
    for (size_t s = 0; s < sys.size(); ++s)
        if (!sys_used[s])
            out.false_alarms.push_back(s);
    return out;
}

namespace {

std::vector<ActivityInstance> at_threshold(std::span<const ActivityInstance> sys, double threshold) {
    std::vector<ActivityInstance> kept;
    for (const auto& s : sys)
        if (s.presence_conf.value_or(0.0) >= threshold)
            kept.push_back(s);
    return kept;
}

}  // namespace

Confusion confusion_at_threshold(std::span<const ActivityInstance> ref,
                                 std::span<const ActivityInstance> sys, double threshold,
                                 double delta) {
    const auto kept = at_threshold(sys, threshold);
    const auto a = align(ref, kept, delta);
    return Confusion{static_cast<int64_t>(a.pairs.size()), static_cast<int64_t>(a.missed.size()),
                     static_cast<int64_t>(a.false_alarms.size())};
}

double pmiss(int64_t n_md, int64_t n_true) {
    if (n_true < 1)
        throw Error(ErrorKind::NoReferenceInstances, "no reference instances");
    return static_cast<double>(n_md) / static_cast<double>(n_true);
}

double rfa(int64_t n_fa, double total_minutes) {
    if (!(total_minutes > 0.0))
        throw Error(ErrorKind::InvalidArgument, "total video duration must be positive");
    return static_cast<double>(n_fa) / total_minutes;
}

double total_minutes(const VideoIndex& videos) {
    double sum = 0.0;
    for (const auto& [id, meta] : videos)
        sum += meta.minutes();
    return sum;
}

double tfa(std::span<const ActivityInstance> ref, std::span<const ActivityInstance> sys,
           const VideoIndex& videos) {
    // Sweep over span boundaries per video: +1 at begin, -1 after end.
    struct Event {
        int64_t frame;
        int ref_delta;
        int sys_delta;
    };
    std::map<VideoId, std::vector<Event>> events;
    auto add = [&](const ActivityInstance& inst, bool is_ref) {
        if (!videos.contains(inst.video))
            throw Error(ErrorKind::UnknownVideo, "unknown video " + inst.video);
        auto& ev = events[inst.video];
        ev.push_back({inst.begin_frame, is_ref ? 1 : 0, is_ref ? 0 : 1});
        ev.push_back({inst.end_frame + 1, is_ref ? -1 : 0, is_ref ? 0 : -1});
    };
    for (const auto& r : ref)
        add(r, true);
    for (const auto& s : sys)
        add(s, false);

    int64_t total_frames = 0;
    for (const auto& [id, meta] : videos)
        total_frames += meta.n_frames;

    int64_t ref_covered = 0;
    int64_t false_time = 0;
    for (auto& [video, ev] : events) {
        std::sort(ev.begin(), ev.end(),
                  [](const Event& a, const Event& b) { return a.frame < b.frame; });
        int64_t r = 0, s = 0;
        for (size_t i = 0; i < ev.size();) {
            const int64_t frame = ev[i].frame;
            while (i < ev.size() && ev[i].frame == frame) {
                r += ev[i].ref_delta;
                s += ev[i].sys_delta;
                ++i;
            }
            if (i == ev.size())
                break;
            const int64_t width = ev[i].frame - frame;
            if (r > 0)
                ref_covered += width;
            if (s > r)
                false_time += (s - r) * width;
        }
    }
    const int64_t nr = total_frames - ref_covered;
    if (nr <= 0)
        throw Error(ErrorKind::ZeroNonReferenceDuration,
                    "reference instances cover every frame; Tfa undefined");
    return static_cast<double>(false_time) / static_cast<double>(nr);
}

DetCurve det_curve(std::span<const ActivityInstance> ref, std::span<const ActivityInstance> sys,
                   const VideoIndex& videos, double delta, FaAxis axis) {
    const auto n_true = static_cast<int64_t>(ref.size());
    if (n_true < 1)
        throw Error(ErrorKind::NoReferenceInstances, "no reference instances");
    const double minutes = total_minutes(videos);

    std::set<double, std::greater<>> thresholds;
    for (const auto& s : sys)
        thresholds.insert(s.presence_conf.value_or(0.0));

    DetCurve curve;
    if (!ref.empty())
        curve.activity = ref.front().activity;
    curve.axis = axis;
    const DetPoint sentinel{kSentinelThreshold, 0.0, 0.0, 1.0};

    std::vector<DetPoint> raw;
    for (double t : thresholds) {
        const auto kept = at_threshold(sys, t);
        const auto a = align(ref, kept, delta);
        DetPoint p;
        p.threshold = t;
        p.pmiss = pmiss(static_cast<int64_t>(a.missed.size()), n_true);
        p.rfa = rfa(static_cast<int64_t>(a.false_alarms.size()), minutes);
        p.tfa = tfa(ref, kept, videos);
        raw.push_back(p);
    }

    auto fa_of = [&](const DetPoint& p) { return axis == FaAxis::tfa ? p.tfa : p.rfa; };
    // fa ascending, then pmiss ascending so the first point per fa is the minimum
    std::stable_sort(raw.begin(), raw.end(), [&](const DetPoint& a, const DetPoint& b) {
        if (fa_of(a) != fa_of(b))
            return fa_of(a) < fa_of(b);
        return a.pmiss < b.pmiss;
    });

    curve.points.push_back(sentinel);
    double best = sentinel.pmiss;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (i > 0 && fa_of(raw[i]) == fa_of(raw[i - 1]))
            continue;
        if (raw[i].pmiss < best) {
            curve.points.push_back(raw[i]);
            best = raw[i].pmiss;
        }
    }
    return curve;
}

double pmiss_at_fa(const DetCurve& curve, double x) {
    if (curve.points.empty())
        throw Error(ErrorKind::EmptyCurve, "DET curve has no points");
    double value = 1.0;
    for (const auto& p : curve.points) {
        if (curve.fa(p) > x)
            break;
        value = p.pmiss;
    }
    return value;
}

double naudc(const DetCurve& curve, double a) {
    if (curve.points.empty())
        throw Error(ErrorKind::EmptyCurve, "DET curve has no points");
    if (!(a > 0.0))
        throw Error(ErrorKind::InvalidArgument, "nAUDC limit must be positive");
    const auto& pts = curve.points;
    double area = 0.0;
    // before the first point the miss probability is 1
    const double first = std::min(curve.fa(pts.front()), a);
    area += first;
    for (size_t i = 0; i < pts.size(); ++i) {
        const double lo = curve.fa(pts[i]);
        if (lo >= a)
            break;
        const double hi = i + 1 < pts.size() ? std::min(curve.fa(pts[i + 1]), a) : a;
        area += pts[i].pmiss * (hi - lo);
    }
    return std::clamp(area / a, 0.0, 1.0);
}

AggregateScore aggregate(std::span<const ActivityScore> scores) {
    if (scores.empty())
        throw Error(ErrorKind::NoActivities, "no scored activities to aggregate");
    AggregateScore agg;
    for (const auto& s : scores) {
        agg.mean_naudc += s.naudc;
        agg.mean_pmiss_at_tfa += s.pmiss_at_tfa;
        agg.mean_pmiss_at_rfa += s.pmiss_at_rfa;
    }
    const auto n = static_cast<double>(scores.size());
    agg.mean_naudc /= n;
    agg.mean_pmiss_at_tfa /= n;
    agg.mean_pmiss_at_rfa /= n;
    agg.activities = scores.size();
    return agg;
}

EvaluationReport evaluate(std::span<const ActivityInstance> ref,
                          std::span<const ActivityInstance> sys, const VideoIndex& videos,
                          const ScoringOptions& options) {
    std::map<std::string, std::pair<std::vector<ActivityInstance>, std::vector<ActivityInstance>>>
        by_activity;
    for (const auto& r : ref)
        by_activity[r.activity].first.push_back(r);
    for (const auto& s : sys)
        by_activity[s.activity].second.push_back(s);

    EvaluationReport report;
    std::vector<ActivityScore> scores;
    for (const auto& [activity, group] : by_activity) {
        const auto& [r, s] = group;
        if (r.empty()) {
            report.excluded.push_back(activity);
            continue;
        }
        ActivityResult result;
        result.tfa_curve = det_curve(r, s, videos, options.delta, FaAxis::tfa);
        result.rfa_curve = det_curve(r, s, videos, options.delta, FaAxis::rfa);
        result.tfa_curve.activity = result.rfa_curve.activity = activity;
        result.score.activity = activity;
        result.score.naudc = naudc(result.tfa_curve, options.tfa_limit);
        result.score.pmiss_at_tfa = pmiss_at_fa(result.tfa_curve, options.fa_point);
        result.score.pmiss_at_rfa = pmiss_at_fa(result.rfa_curve, options.fa_point);
        scores.push_back(result.score);
        report.activities.push_back(std::move(result));
    }
    report.aggregate = aggregate(scores);
    return report;
}

}  // namespace vidmetrics::actev
