#include "vidmetrics/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "vidmetrics/actev.hpp"
#include "vidmetrics/captions.hpp"
#include "vidmetrics/config.hpp"
#include "vidmetrics/det_export.hpp"
#include "vidmetrics/digest.hpp"
#include "vidmetrics/formats.hpp"
#include "vidmetrics/output_dir.hpp"
#include "vidmetrics/pooling.hpp"
#include "vidmetrics/retrieval.hpp"
#include "vidmetrics/significance.hpp"
#include "vidmetrics/vsum.hpp"

#ifndef VIDMETRICS_VERSION
#define VIDMETRICS_VERSION "dev"
#endif

namespace vidmetrics {

namespace {

namespace fs = std::filesystem;
using io::format_real;
using io::ScoreRow;

struct CommonOptions {
    std::string out;
    std::string config;
    std::vector<std::string> sets;
    std::optional<uint64_t> seed;
};

/// Per-invocation state: resolved config, inputs read so far, and arguments
/// for the manifest.
class Session {
public:
    Session(std::string command, std::vector<std::string> arguments)
        : command_(std::move(command)), arguments_(std::move(arguments)) {}

    std::string read(const std::string& path) {
        auto text = io::read_file(path);
        inputs_[path] = io::sha256_hex(text);
        return text;
    }

    Config resolve_config(const CommonOptions& common) {
        Config cfg;
        if (const char* env = std::getenv("VIDMETRICS_SEED"); env && *env)
            set_config_value(cfg, "general", "seed", env);
        if (!common.config.empty())
            cfg = parse_config(read(common.config), cfg, common.config);
        for (const auto& s : common.sets) {
            const auto eq = s.find('=');
            const auto dot = s.find('.');
            if (eq == std::string::npos || dot == std::string::npos || dot > eq)
                throw Error(ErrorKind::ConfigError, "--set expects section.key=value, got '" + s + "'");
            set_config_value(cfg, s.substr(0, dot), s.substr(dot + 1, eq - dot - 1), s.substr(eq + 1));
        }
        if (common.seed)
            cfg.seed = *common.seed;
        return cfg;
    }

    void finish(io::OutputDir& dir, const Config& cfg) {
        const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_);
        nlohmann::ordered_json m;
        m["version"] = VIDMETRICS_VERSION;
        m["command"] = command_;
        m["arguments"] = arguments_;
        m["seed"] = cfg.seed;
        m["config"] = config_snapshot(cfg);
        m["inputs"] = nlohmann::ordered_json::object();
        for (const auto& [path, digest] : inputs_)
            m["inputs"][path] = digest;
        m["outputs"] = nlohmann::ordered_json::object();
        for (const auto& [name, digest] : dir.digests())
            m["outputs"][name] = digest;
        m["wall_time_s"] = elapsed.count();
        dir.write("manifest.json", m.dump(2) + "\n");
    }

private:
    std::string command_;
    std::vector<std::string> arguments_;
    std::map<std::string, std::string> inputs_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<RankedRun> read_runs(Session& s, const std::vector<std::string>& paths, int depth_limit,
                                 Task task = Task::retrieval) {
    std::vector<RankedRun> runs;
    std::set<std::string> tags;
    for (const auto& p : paths) {
        runs.push_back(io::parse_run(s.read(p), p, task, depth_limit));
        if (!tags.insert(runs.back().run_tag).second)
            throw Error(ErrorKind::ParseError, p + ": duplicate run tag " + runs.back().run_tag);
    }
    std::sort(runs.begin(), runs.end(),
              [](const RankedRun& a, const RankedRun& b) { return a.run_tag < b.run_tag; });
    return runs;
}

std::string join_excluded(const std::vector<std::array<std::string, 3>>& rows,
                          const std::string& header) {
    std::string out = header + "\n";
    for (const auto& r : rows)
        out += r[0] + ',' + r[1] + ',' + r[2] + '\n';
    return out;
}

// ---- pool ----------------------------------------------------------------

struct PoolArgs {
    std::vector<std::string> runs;
    std::string mode;
    std::string judged;
};

void cmd_pool(Session& s, const CommonOptions& common, const PoolArgs& a) {
    auto cfg = s.resolve_config(common);
    if (!a.mode.empty())
        set_config_value(cfg, "pooling", "mode", a.mode);
    cfg.pooling.seed = cfg.seed;
    validate_config(cfg);
    const auto runs = read_runs(s, a.runs, cfg.retrieval.depth_limit);
    const auto pool = build_pool(runs, cfg.pooling);

    std::optional<JudgmentPool> judged;
    if (!a.judged.empty())
        judged = io::parse_pool(s.read(a.judged), a.judged);

    io::OutputDir dir(common.out);
    dir.write("pool.txt", io::write_pool(pool));
    if (judged) {
        std::string csv =
            "topic,total_submitted,unique_submitted,pct_unique,number_judged,pct_unique_judged,"
            "number_relevant,pct_judged_relevant\n";
        for (const auto& r : pool_stats(runs, *judged))
            csv += r.topic + ',' + std::to_string(r.total_submitted) + ',' +
                   std::to_string(r.unique_submitted) + ',' + format_real(r.pct_unique) + ',' +
                   std::to_string(r.number_judged) + ',' + format_real(r.pct_unique_judged) + ',' +
                   std::to_string(r.number_relevant) + ',' + format_real(r.pct_judged_relevant) +
                   '\n';
        dir.write("pool_stats.csv", csv);
    }
    s.finish(dir, cfg);
}

// ---- score-retrieval -----------------------------------------------------

struct RetrievalArgs {
    std::string measure = "xinfap";
    std::vector<std::string> runs;
    std::string pool;
};

std::span<const RankedEntry> entries_for(const RankedRun& run, const TopicId& topic) {
    auto it = run.topics.find(topic);
    if (it == run.topics.end())
        return {};
    return it->second;
}

void cmd_score_retrieval(Session& s, const CommonOptions& common, const RetrievalArgs& a) {
    auto cfg = s.resolve_config(common);
    validate_config(cfg);
    const auto runs = read_runs(s, a.runs, cfg.retrieval.depth_limit);
    const auto pool = io::parse_pool(s.read(a.pool), a.pool);
    const auto relevant = relevant_sets(pool);

    std::vector<ScoreRow> rows;
    std::vector<std::array<std::string, 3>> excluded;
    std::set<TopicId> scored_topics;
    for (const auto& [topic, rel] : relevant) {
        if (rel.empty())
            excluded.push_back({"*", topic, "no judged relevant items"});
        else
            scored_topics.insert(topic);
    }
    if (scored_topics.empty())
        throw Error(ErrorKind::NoJudgedRelevant, "no topic in the pool has judged relevant items");

    if (a.measure == "novelty") {
        std::map<TopicId, std::set<ItemId>> rel_scored;
        for (const auto& t : scored_topics)
            rel_scored[t] = relevant.at(t);
        const auto weights = novelty_weights(runs, rel_scored);
        for (const auto& run : runs) {
            const auto sums = novelty_topic_sums(run, runs, weights, rel_scored);
            double total = 0.0;
            for (const auto& [topic, v] : sums) {
                rows.push_back({run.run_tag, topic, "novelty", v});
                total += v;
            }
            rows.push_back({run.run_tag, "ALL", "novelty", total / static_cast<double>(sums.size())});
        }
    } else {
        std::function<double(const RankedRun&, const TopicId&)> score;
        if (a.measure == "ap") {
            score = [&](const RankedRun& run, const TopicId& t) {
                return average_precision(entries_for(run, t), relevant.at(t));
            };
        } else if (a.measure == "xinfap") {
            score = [&](const RankedRun& run, const TopicId& t) {
                return extended_inferred_ap(entries_for(run, t), pool.topics.at(t),
                                            cfg.retrieval.epsilon);
            };
        } else if (a.measure == "recall") {
            score = [&](const RankedRun& run, const TopicId& t) {
                return estimated_recall(entries_for(run, t), pool.topics.at(t),
                                        cfg.retrieval.recall_depth);
            };
        } else {
            throw Error(ErrorKind::InvalidArgument, "unknown measure " + a.measure);
        }
        for (const auto& run : runs) {
            std::vector<TopicScore> scores;
            for (const auto& t : scored_topics) {
                scores.push_back({t, score(run, t)});
                rows.push_back({run.run_tag, t, a.measure, scores.back().value});
            }
            rows.push_back({run.run_tag, "ALL", a.measure, mean_over_topics(scores)});
        }
    }

    io::OutputDir dir(common.out);
    dir.write("scores.csv", io::write_scores(rows));
    dir.write("excluded_topics.csv", join_excluded(excluded, "run_tag,topic,reason"));
    s.finish(dir, cfg);
}

// ---- score-dsdi ----------------------------------------------------------

struct DsdiArgs {
    std::vector<std::string> runs;
    std::string pool;
    int64_t collection_size = 0;
};

void cmd_score_dsdi(Session& s, const CommonOptions& common, const DsdiArgs& a) {
    auto cfg = s.resolve_config(common);
    validate_config(cfg);
    const auto runs = read_runs(s, a.runs, cfg.retrieval.depth_limit);
    const auto pool = io::parse_pool(s.read(a.pool), a.pool);
    const auto relevant = relevant_sets(pool);

    std::vector<ScoreRow> rows;
    std::vector<std::array<std::string, 3>> excluded;
    for (const auto& [topic, rel] : relevant)
        if (rel.empty())
            excluded.push_back({"*", topic, "no judged relevant items"});

    for (const auto& run : runs) {
        std::vector<TopicScore> ap, prec, rec, f1;
        ConfusionCounts total;
        for (const auto& [topic, rel] : relevant) {
            if (rel.empty())
                continue;
            const auto entries = entries_for(run, topic);
            ConfusionCounts c;
            for (const auto& e : entries)
                (rel.contains(e.item) ? c.tp : c.fp) += 1;
            c.fn = static_cast<int64_t>(rel.size()) - c.tp;
            if (a.collection_size > 0) {
                c.tn = a.collection_size - c.tp - c.fp - c.fn;
                if (c.tn < 0)
                    throw Error(ErrorKind::InvalidArgument,
                                "collection size smaller than judged and retrieved items");
            }
            const auto f = f_measure(c);
            ap.push_back({topic, average_precision(entries, rel)});
            prec.push_back({topic, f.precision});
            rec.push_back({topic, f.recall});
            f1.push_back({topic, f.f1});
            for (auto [name, v] : {std::pair<const char*, double>{"ap", ap.back().value},
                                   {"precision", f.precision},
                                   {"recall", f.recall},
                                   {"f1", f.f1},
                                   {"tp", static_cast<double>(c.tp)},
                                   {"fp", static_cast<double>(c.fp)},
                                   {"fn", static_cast<double>(c.fn)},
                                   {"tn", static_cast<double>(c.tn)}})
                rows.push_back({run.run_tag, topic, name, v});
            total.tp += c.tp;
            total.fp += c.fp;
            total.fn += c.fn;
            total.tn += c.tn;
        }
        if (ap.empty())
            throw Error(ErrorKind::NoJudgedRelevant, "no topic has judged relevant items");
        rows.push_back({run.run_tag, "ALL", "map", mean_over_topics(ap)});
        rows.push_back({run.run_tag, "ALL", "precision", mean_over_topics(prec)});
        rows.push_back({run.run_tag, "ALL", "recall", mean_over_topics(rec)});
        rows.push_back({run.run_tag, "ALL", "f1", mean_over_topics(f1)});
        rows.push_back({run.run_tag, "ALL", "f1_pooled", f_measure(total).f1});
    }

    io::OutputDir dir(common.out);
    dir.write("scores.csv", io::write_scores(rows));
    dir.write("excluded_topics.csv", join_excluded(excluded, "run_tag,topic,reason"));
    s.finish(dir, cfg);
}

// ---- actev ---------------------------------------------------------------

struct ActevArgs {
    std::string ref;
    std::string sys;
    std::string videos;
    std::string axis = "tfa";
};

struct ActevInputs {
    ActivityInstanceSet ref;
    ActivityInstanceSet sys;
    VideoIndex videos;
};

ActevInputs read_actev(Session& s, const ActevArgs& a) {
    ActevInputs in;
    const auto metas = io::parse_videos(s.read(a.videos), a.videos);
    in.videos = index_videos(metas);
    in.ref = validate_instances(io::parse_instances(s.read(a.ref), a.ref), in.videos,
                                InstanceRole::reference);
    in.sys = validate_instances(io::parse_instances(s.read(a.sys), a.sys), in.videos,
                                InstanceRole::system);
    return in;
}

void cmd_score_actev(Session& s, const CommonOptions& common, const ActevArgs& a) {
    auto cfg = s.resolve_config(common);
    validate_config(cfg);
    const auto in = read_actev(s, a);
    const auto report = actev::evaluate(in.ref, in.sys, in.videos, cfg.actev);

    std::string csv = "activity,naudc,pmiss_at_tfa,pmiss_at_rfa\n";
    for (const auto& r : report.activities)
        csv += r.score.activity + ',' + format_real(r.score.naudc) + ',' +
               format_real(r.score.pmiss_at_tfa) + ',' + format_real(r.score.pmiss_at_rfa) + '\n';
    csv += "ALL," + format_real(report.aggregate.mean_naudc) + ',' +
           format_real(report.aggregate.mean_pmiss_at_tfa) + ',' +
           format_real(report.aggregate.mean_pmiss_at_rfa) + '\n';
    std::string excluded = "activity,reason\n";
    for (const auto& e : report.excluded)
        excluded += e + ",no reference instances\n";

    io::OutputDir dir(common.out);
    dir.write("activity_scores.csv", csv);
    dir.write("excluded_activities.csv", excluded);
    s.finish(dir, cfg);
}

void cmd_det_export(Session& s, const CommonOptions& common, const ActevArgs& a) {
    auto cfg = s.resolve_config(common);
    validate_config(cfg);
    if (a.axis != "tfa" && a.axis != "rfa")
        throw Error(ErrorKind::InvalidArgument, "--axis must be tfa or rfa");
    const auto in = read_actev(s, a);
    const auto report = actev::evaluate(in.ref, in.sys, in.videos, cfg.actev);

    io::OutputDir dir(common.out);
    std::set<std::string> names;
    for (const auto& r : report.activities) {
        const auto& curve = a.axis == "tfa" ? r.tfa_curve : r.rfa_curve;
        const auto base = "det_" + io::sanitize_name(r.score.activity);
        if (!names.insert(base).second)
            throw Error(ErrorKind::InvalidArgument,
                        "activities collide after name sanitizing: " + base);
        dir.write(base + ".csv", io::det_csv(curve));
        const double fa_max = a.axis == "tfa" ? cfg.actev.tfa_limit : 2.0 * cfg.actev.fa_point;
        dir.write(base + ".svg", io::det_svg(std::span(&curve, 1), fa_max));
    }
    s.finish(dir, cfg);
}

// ---- captions ------------------------------------------------------------

struct CaptionArgs {
    std::string measure = "bleu";
    std::string candidates;
    std::string references;
    std::string ratings;
    std::string bleu_mode;
};

void cmd_score_captions(Session& s, const CommonOptions& common, const CaptionArgs& a) {
    auto cfg = s.resolve_config(common);
    if (!a.bleu_mode.empty())
        set_config_value(cfg, "captions", "bleu_mode", a.bleu_mode);
    validate_config(cfg);

    if (a.measure == "da") {
        if (a.ratings.empty())
            throw Error(ErrorKind::InvalidArgument, "--ratings is required for measure da");
        const auto ratings = io::parse_da_ratings(s.read(a.ratings), a.ratings);
        std::string csv = "system,raw_avg,z_avg,captions\n";
        for (const auto& [system, sc] : captions::da_aggregate(ratings))
            csv += system + ',' + format_real(sc.raw_avg) + ',' + format_real(sc.z_avg) + ',' +
                   std::to_string(sc.captions) + '\n';
        io::OutputDir dir(common.out);
        dir.write("da_scores.csv", csv);
        s.finish(dir, cfg);
        return;
    }
    if (a.candidates.empty() || a.references.empty())
        throw Error(ErrorKind::InvalidArgument, "--candidates and --references are required");

    std::map<VideoId, std::vector<captions::Tokens>> refs;
    for (const auto& [video, sentences] : io::parse_references(s.read(a.references), a.references))
        for (const auto& sentence : sentences)
            refs[video].push_back(captions::tokenize(sentence));

    // highest-confidence candidate per video, first one on ties
    std::map<VideoId, io::Candidate> best;
    for (auto& c : io::parse_candidates(s.read(a.candidates), a.candidates)) {
        if (!refs.contains(c.video))
            throw Error(ErrorKind::NoReferences, "candidate for video " + c.video +
                                                     " has no reference captions");
        auto it = best.find(c.video);
        if (it == best.end() || c.confidence > it->second.confidence)
            best[c.video] = std::move(c);
    }

    std::vector<captions::Segment> segments;
    for (const auto& [video, r] : refs) {
        auto it = best.find(video);
        segments.push_back(
            {it == best.end() ? captions::Tokens{} : captions::tokenize(it->second.sentence), r});
    }

    std::string csv = "video,measure,value\n";
    double sum = 0.0;
    size_t i = 0;
    std::optional<captions::CorpusProfile> corpus;
    if (a.measure != "bleu")
        corpus.emplace(refs);
    for (const auto& [video, r] : refs) {
        const auto& seg = segments[i++];
        double v;
        if (a.measure == "bleu")
            v = captions::bleu(seg.candidate, seg.references, cfg.captions.bleu_max_n,
                               cfg.captions.bleu_mode);
        else if (a.measure == "cider")
            v = captions::cider(seg.candidate, seg.references, *corpus, captions::CiderVariant::cider);
        else if (a.measure == "cider-d")
            v = captions::cider(seg.candidate, seg.references, *corpus,
                                captions::CiderVariant::cider_d);
        else
            throw Error(ErrorKind::InvalidArgument, "unknown measure " + a.measure);
        sum += v;
        csv += video + ',' + a.measure + ',' + format_real(v) + '\n';
    }
    double all = sum / static_cast<double>(segments.size());
    if (a.measure == "bleu" && cfg.captions.bleu_mode == captions::BleuMode::corpus)
        all = captions::corpus_bleu(segments, cfg.captions.bleu_max_n);
    csv += "ALL," + a.measure + ',' + format_real(all) + '\n';

    io::OutputDir dir(common.out);
    dir.write("caption_scores.csv", csv);
    s.finish(dir, cfg);
}

// ---- matching ------------------------------------------------------------

struct MatchingArgs {
    std::string run;
    std::string truth;
    std::string fake;
    int64_t set_size = 0;
    std::vector<int64_t> cutoffs{1, 10, 100};
};

void cmd_score_matching(Session& s, const CommonOptions& common, const MatchingArgs& a) {
    auto cfg = s.resolve_config(common);
    validate_config(cfg);
    if (a.set_size < 1)
        throw Error(ErrorKind::InvalidArgument, "--set-size must be positive");
    const auto run = io::parse_run(s.read(a.run), a.run, Task::matching,
                                   static_cast<int>(std::min<int64_t>(a.set_size, 1 << 30)));

    auto rank_of = [&](const std::string& video, const std::string& item, const std::string& what) {
        auto it = run.topics.find(video);
        if (it != run.topics.end())
            for (const auto& e : it->second)
                if (e.item == item)
                    return static_cast<int64_t>(e.rank);
        throw Error(ErrorKind::InvalidArgument,
                    what + " item " + item + " is not ranked for video " + video);
    };

    std::string ranks_csv = "video,truth_rank\n";
    std::vector<int64_t> ranks;
    for (const auto& [video, item] : io::parse_pairs(s.read(a.truth), a.truth)) {
        ranks.push_back(rank_of(video, item, "truth"));
        ranks_csv += video + ',' + std::to_string(ranks.back()) + '\n';
    }
    std::string csv = "measure,value\n";
    csv += "mean_inverted_rank," + format_real(mean_inverted_rank(ranks)) + '\n';
    if (!a.fake.empty()) {
        std::vector<int64_t> fake;
        for (const auto& [video, item] : io::parse_pairs(s.read(a.fake), a.fake))
            fake.push_back(rank_of(video, item, "fake"));
        const auto st = fake_sentence_stats(fake, a.set_size, a.cutoffs);
        csv += "fake_median_rank," + std::to_string(st.median) + '\n';
        for (const auto& [c, f] : st.fraction_at_cutoff)
            csv += "fake_fraction_at_" + std::to_string(c) + ',' + format_real(f) + '\n';
    }
    io::OutputDir dir(common.out);
    dir.write("matching.csv", csv);
    dir.write("truth_ranks.csv", ranks_csv);
    s.finish(dir, cfg);
}

// ---- vsum ----------------------------------------------------------------

struct VsumArgs {
    std::string in;
    std::string rounding;
};

void cmd_score_vsum(Session& s, const CommonOptions& common, const VsumArgs& a) {
    auto cfg = s.resolve_config(common);
    if (!a.rounding.empty())
        set_config_value(cfg, "vsum", "rounding", a.rounding);
    validate_config(cfg);
    const auto records = io::parse_vsum(s.read(a.in), a.in);
    if (records.empty())
        throw Error(ErrorKind::EmptyGroup, a.in + ": no assessment records");

    std::string csv = "team,run,query,tempo,contextuality,redundancy,q1,q2,q3,q4,q5,score\n";
    for (const auto& r : records) {
        csv += r.team + ',' + std::to_string(r.run) + ',' + r.query + ',' +
               std::to_string(r.tempo) + ',' + std::to_string(r.contextuality) + ',' +
               std::to_string(r.redundancy);
        for (bool q : r.answers)
            csv += q ? ",1" : ",0";
        csv += ',' + std::to_string(vsum::vsum_score(r, cfg.vsum_rounding)) + '\n';
    }
    io::OutputDir dir(common.out);
    dir.write("vsum_scores.csv", csv);
    for (auto [name, key] : {std::pair{"query", vsum::GroupBy::query},
                             std::pair{"run", vsum::GroupBy::run},
                             std::pair{"team", vsum::GroupBy::team}}) {
        std::string agg = std::string(name) + ",mean_score\n";
        for (const auto& [k, v] : vsum::vsum_aggregate(records, key, cfg.vsum_rounding))
            agg += k + ',' + format_real(v) + '\n';
        dir.write(std::string("vsum_by_") + name + ".csv", agg);
    }
    s.finish(dir, cfg);
}

// ---- sigtest -------------------------------------------------------------

struct SigArgs {
    std::string scores;
    std::string measure;
    std::optional<int64_t> iterations;
    std::optional<double> alpha;
};

void cmd_sigtest(Session& s, const CommonOptions& common, const SigArgs& a) {
    auto cfg = s.resolve_config(common);
    if (a.iterations)
        cfg.significance.iterations = *a.iterations;
    if (a.alpha)
        cfg.significance.alpha = *a.alpha;
    validate_config(cfg);

    significance::RunScores runs;
    std::set<std::string> measures;
    for (const auto& row : io::parse_scores(s.read(a.scores), a.scores)) {
        measures.insert(row.measure);
        if (row.topic == "ALL" || (!a.measure.empty() && row.measure != a.measure))
            continue;
        runs[row.run_tag][row.topic] = row.value;
    }
    if (a.measure.empty() && measures.size() > 1)
        throw Error(ErrorKind::InvalidArgument,
                    "scores file holds several measures; choose one with --measure");
    if (runs.size() < 2)
        throw Error(ErrorKind::InvalidArgument, "need at least two runs with per-topic scores");

    const auto m = significance::pairwise_matrix(runs, cfg.significance.alpha,
                                                 cfg.significance.iterations, cfg.seed);
    std::string pvals = "run", flags = "run";
    for (const auto& r : m.runs) {
        pvals += ',' + r;
        flags += ',' + r;
    }
    pvals += '\n';
    flags += '\n';
    std::string pairs = "run_a,run_b,observed,p_value,iterations,exhaustive,seed\n";
    for (size_t i = 0; i < m.runs.size(); ++i) {
        pvals += m.runs[i];
        flags += m.runs[i];
        for (size_t j = 0; j < m.runs.size(); ++j) {
            pvals += ',' + (i == j ? std::string("-") : format_real(m.results[i][j].p_value));
            flags += m.better[i][j] ? ",1" : ",0";
            if (j > i) {
                const auto& r = m.results[i][j];
                pairs += r.run_a + ',' + r.run_b + ',' + format_real(r.observed) + ',' +
                         format_real(r.p_value) + ',' + std::to_string(r.iterations) + ',' +
                         (r.exhaustive ? "1" : "0") + ',' + std::to_string(r.seed) + '\n';
            }
        }
        pvals += '\n';
        flags += '\n';
    }
    io::OutputDir dir(common.out);
    dir.write("sig_pvalues.csv", pvals);
    dir.write("sig_flags.csv", flags);
    dir.write("sig_pairs.csv", pairs);
    s.finish(dir, cfg);
}

void add_common(CLI::App* sub, CommonOptions& common) {
    sub->add_option("--out,-o", common.out, "Output directory")->required();
    sub->add_option("--config,-c", common.config, "Config file (INI-style sections)");
    sub->add_option("--set", common.sets, "Config override section.key=value (repeatable)");
    sub->add_option("--seed", common.seed, "Random seed");
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::IoError: return kExitIo;
    case ErrorKind::Internal: return kExitInternal;
    default: return kExitInvalidInput;
    }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Evaluation metrology for video retrieval, activity detection, captioning and "
                 "summarization benchmarks",
                 "vidmetrics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", VIDMETRICS_VERSION);

    CommonOptions common;
    std::function<void(Session&)> action;

    PoolArgs pool_args;
    auto* pool = app.add_subcommand("pool", "Build a judgment pool skeleton from runs");
    add_common(pool, common);
    pool->add_option("--runs", pool_args.runs, "Run files")->required();
    pool->add_option("--mode", pool_args.mode, "avs (two-tier sampling) or ins (rank strata)");
    pool->add_option("--judged", pool_args.judged, "Judged pool file; also writes pool_stats.csv");
    pool->callback([&] { action = [&](Session& s) { cmd_pool(s, common, pool_args); }; });

    RetrievalArgs ret_args;
    auto* ret = app.add_subcommand("score-retrieval", "Score ranked runs against a judged pool");
    add_common(ret, common);
    ret->add_option("--measure,-m", ret_args.measure, "ap | xinfap | novelty | recall")
        ->check(CLI::IsMember({"ap", "xinfap", "novelty", "recall"}));
    ret->add_option("--runs", ret_args.runs, "Run files")->required();
    ret->add_option("--pool", ret_args.pool, "Judged pool file")->required();
    ret->callback([&] { action = [&](Session& s) { cmd_score_retrieval(s, common, ret_args); }; });

    DsdiArgs dsdi_args;
    auto* dsdi = app.add_subcommand("score-dsdi", "MAP and F-measure for feature detection runs");
    add_common(dsdi, common);
    dsdi->add_option("--runs", dsdi_args.runs, "Run files")->required();
    dsdi->add_option("--pool", dsdi_args.pool, "Judged pool (qrels) file")->required();
    dsdi->add_option("--collection-size", dsdi_args.collection_size,
                     "Items per topic in the collection (for true negatives)");
    dsdi->callback([&] { action = [&](Session& s) { cmd_score_dsdi(s, common, dsdi_args); }; });

    ActevArgs actev_args;
    auto* act = app.add_subcommand("score-actev", "Activity detection scoring (nAUDC, Pmiss)");
    add_common(act, common);
    act->add_option("--ref", actev_args.ref, "Reference instances (JSON lines)")->required();
    act->add_option("--sys", actev_args.sys, "System instances (JSON lines)")->required();
    act->add_option("--videos", actev_args.videos, "Video list: video n_frames frame_rate")
        ->required();
    act->callback([&] { action = [&](Session& s) { cmd_score_actev(s, common, actev_args); }; });

    auto* det = app.add_subcommand("det-export", "Write per-activity DET curves as CSV and SVG");
    add_common(det, common);
    det->add_option("--ref", actev_args.ref, "Reference instances (JSON lines)")->required();
    det->add_option("--sys", actev_args.sys, "System instances (JSON lines)")->required();
    det->add_option("--videos", actev_args.videos, "Video list")->required();
    det->add_option("--axis", actev_args.axis, "False-alarm axis: tfa | rfa");
    det->callback([&] { action = [&](Session& s) { cmd_det_export(s, common, actev_args); }; });

    CaptionArgs cap_args;
    auto* cap = app.add_subcommand("score-captions", "Caption metrics and DA aggregation");
    add_common(cap, common);
    cap->add_option("--measure,-m", cap_args.measure, "bleu | cider | cider-d | da")
        ->check(CLI::IsMember({"bleu", "cider", "cider-d", "da"}));
    cap->add_option("--candidates", cap_args.candidates, "video<TAB>confidence<TAB>sentence");
    cap->add_option("--references", cap_args.references, "video<TAB>sentence");
    cap->add_option("--ratings", cap_args.ratings, "DA ratings CSV");
    cap->add_option("--bleu-mode", cap_args.bleu_mode, "sentence | corpus");
    cap->callback([&] { action = [&](Session& s) { cmd_score_captions(s, common, cap_args); }; });

    MatchingArgs match_args;
    auto* match = app.add_subcommand("score-matching", "Mean inverted rank and fake-sentence ranks");
    add_common(match, common);
    match->add_option("--run", match_args.run, "Matching run: video sentence rank score tag")
        ->required();
    match->add_option("--truth", match_args.truth, "video sentence pairs")->required();
    match->add_option("--fake", match_args.fake, "video fake-sentence pairs");
    match->add_option("--set-size", match_args.set_size, "Sentences ranked per video")->required();
    match->add_option("--cutoffs", match_args.cutoffs, "Rank cutoffs for fake-sentence fractions")
        ->delimiter(',');
    match->callback([&] { action = [&](Session& s) { cmd_score_matching(s, common, match_args); }; });

    VsumArgs vsum_args;
    auto* vs = app.add_subcommand("score-vsum", "Score video summary assessments");
    add_common(vs, common);
    vs->add_option("--in,-i", vsum_args.in, "Assessment CSV")->required();
    vs->add_option("--rounding", vsum_args.rounding, "final | per-question");
    vs->callback([&] { action = [&](Session& s) { cmd_score_vsum(s, common, vsum_args); }; });

    SigArgs sig_args;
    auto* sig = app.add_subcommand("sigtest", "Pairwise paired randomization tests");
    add_common(sig, common);
    sig->add_option("--scores", sig_args.scores, "Scores CSV run_tag,topic,measure,value")
        ->required();
    sig->add_option("--measure,-m", sig_args.measure, "Measure to compare");
    sig->add_option("--iterations", sig_args.iterations, "Random flips when topics > 20");
    sig->add_option("--alpha", sig_args.alpha, "Significance threshold");
    sig->callback([&] { action = [&](Session& s) { cmd_sigtest(s, common, sig_args); }; });

    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    if (argv.empty())
        argv.push_back("vidmetrics");
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalidInput;
    }

    std::string command;
    for (auto* sub : app.get_subcommands())
        command = sub->get_name();
    std::vector<std::string> recorded;
    for (size_t i = 2; i < args.size(); ++i) {
        if (args[i] == "--out" || args[i] == "-o") {
            ++i;  // the output location does not affect results
            continue;
        }
        if (args[i].rfind("--out=", 0) == 0)
            continue;
        recorded.push_back(args[i]);
    }

    try {
        Session session(command, recorded);
        action(session);
    } catch (const Error& e) {
        err << "vidmetrics " << command << ": " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "vidmetrics " << command << ": internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitOk;
}

}  // namespace vidmetrics
