#include "vidmetrics/formats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vidmetrics::io {

namespace {

[[noreturn]] void parse_fail(std::string_view source, size_t line, const std::string& msg) {
    throw Error(ErrorKind::ParseError,
                std::string(source) + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string tok;
    while (in >> tok)
        out.push_back(tok);
    return out;
}

std::vector<std::string> split_on(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& tok, std::string_view source, size_t line, const char* what) {
    T value{};
    const auto* first = tok.data();
    const auto* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        parse_fail(source, line, std::string("bad ") + what + " '" + tok + "'");
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value))
            parse_fail(source, line, std::string("non-finite ") + what + " '" + tok + "'");
    }
    return value;
}

bool is_header(const std::vector<std::string>& fields, std::string_view first) {
    return !fields.empty() && trim(fields[0]) == first;
}

void require_field_token(const std::string& tok, std::string_view source, size_t line,
                         const char* what) {
    if (!is_token(tok))
        parse_fail(source, line, std::string("bad ") + what + " '" + tok + "'");
}

}  // namespace

std::vector<std::pair<size_t, std::string>> content_lines(std::string_view text) {
    std::vector<std::pair<size_t, std::string>> out;
    size_t line_no = 0;
    size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        std::string line(text.substr(start, end - start));
        ++line_no;
        line.erase(std::remove(line.begin(), line.end(), '\r'), line.end());
        const auto first = line.find_first_not_of(" \t");
        if (first != std::string::npos && line[first] != '#')
            out.emplace_back(line_no, std::move(line));
        if (end == text.size())
            break;
        start = end + 1;
    }
    return out;
}

std::string format_real(double x) {
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (std::isnan(x))
        return "nan";
    char buf[64];
    // avoid "-0.000000"
    if (std::fabs(x) < 5e-7)
        x = 0.0;
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw Error(ErrorKind::IoError, "failed reading " + path.string());
    return ss.str();
}

RankedRun parse_run(std::string_view text, std::string_view source, Task task, int depth_limit) {
    RankedRun run;
    run.task = task;
    for (const auto& [no, line] : content_lines(text)) {
        const auto f = split_ws(line);
        if (f.size() != 5)
            parse_fail(source, no, "expected 5 fields 'topic item rank score run_tag', got " +
                                       std::to_string(f.size()));
        RankedEntry e;
        e.item = f[1];
        e.rank = parse_number<int>(f[2], source, no, "rank");
        if (e.rank < 1)
            parse_fail(source, no, "rank must be positive");
        e.score = parse_number<double>(f[3], source, no, "score");
        if (run.run_tag.empty())
            run.run_tag = f[4];
        else if (run.run_tag != f[4])
            parse_fail(source, no, "mixed run tags '" + run.run_tag + "' and '" + f[4] + "'");
        run.topics[f[0]].push_back(std::move(e));
    }
    if (run.run_tag.empty())
        throw Error(ErrorKind::ParseError, std::string(source) + ": run file has no entries");
    return validate_run(std::move(run), depth_limit);
}

RankedRun parse_run_file(const std::filesystem::path& path, Task task, int depth_limit) {
    return parse_run(read_file(path), path.string(), task, depth_limit);
}

std::string write_run(const RankedRun& run) {
    std::string out;
    for (const auto& [topic, entries] : run.topics)
        for (const auto& e : entries)
            out += topic + ' ' + e.item + ' ' + std::to_string(e.rank) + ' ' +
                   format_real(e.score) + ' ' + run.run_tag + '\n';
    return out;
}

JudgmentPool parse_pool(std::string_view text, std::string_view source) {
    JudgmentPool pool;
    for (const auto& [no, line] : content_lines(text)) {
        const auto f = split_ws(line);
        if (f.size() != 4 && f.size() != 5)
            parse_fail(source, no, "expected 'topic stratum_id sampling_rate item [judgment]'");
        require_field_token(f[0], source, no, "topic");
        const int id = parse_number<int>(f[1], source, no, "stratum id");
        const double rate = parse_number<double>(f[2], source, no, "sampling rate");
        auto& tp = pool.topics[f[0]];
        auto it = std::find_if(tp.strata.begin(), tp.strata.end(),
                               [&](const Stratum& s) { return s.id == id; });
        if (it == tp.strata.end()) {
            tp.strata.push_back(Stratum{id, rate, {}});
            it = tp.strata.end() - 1;
        } else if (it->rate != rate) {
            parse_fail(source, no, "stratum " + f[1] + " has conflicting sampling rates");
        }
        if (!it->members.insert(f[3]).second)
            parse_fail(source, no, "item " + f[3] + " listed twice in stratum " + f[1]);
        if (f.size() == 5) {
            if (f[4] != "0" && f[4] != "1")
                parse_fail(source, no, "judgment must be 0 or 1, got '" + f[4] + "'");
            tp.judgments[f[3]] = f[4] == "1" ? Relevance::relevant : Relevance::nonrelevant;
        }
    }
    try {
        return validate_pool(std::move(pool));
    } catch (const Error& e) {
        throw Error(e.kind(), std::string(source) + ": " + e.what());
    }
}

std::string write_pool(const JudgmentPool& pool) {
    std::string out;
    for (const auto& [topic, tp] : pool.topics) {
        for (const auto& s : tp.strata) {
            for (const auto& item : s.members) {
                out += topic + ' ' + std::to_string(s.id) + ' ' + format_real(s.rate) + ' ' + item;
                if (auto it = tp.judgments.find(item); it != tp.judgments.end())
                    out += it->second == Relevance::relevant ? " 1" : " 0";
                out += '\n';
            }
        }
    }
    return out;
}

ActivityInstanceSet parse_instances(std::string_view text, std::string_view source) {
    ActivityInstanceSet out;
    for (const auto& [no, line] : content_lines(text)) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            parse_fail(source, no, std::string("invalid JSON: ") + e.what());
        }
        if (!j.is_object())
            parse_fail(source, no, "expected a JSON object");
        try {
            ActivityInstance inst;
            inst.activity = j.at("activity").get<std::string>();
            inst.video = j.at("video").get<std::string>();
            inst.begin_frame = j.at("beginFrame").get<int64_t>();
            inst.end_frame = j.at("endFrame").get<int64_t>();
            if (j.contains("presenceConf"))
                inst.presence_conf = j.at("presenceConf").get<double>();
            for (const auto& [key, value] : j.items())
                if (key != "activity" && key != "video" && key != "beginFrame" &&
                    key != "endFrame" && key != "presenceConf")
                    parse_fail(source, no, "unknown field '" + key + "'");
            out.push_back(std::move(inst));
        } catch (const nlohmann::json::exception& e) {
            parse_fail(source, no, std::string("bad instance: ") + e.what());
        }
    }
    return out;
}

std::string write_instances(const ActivityInstanceSet& instances) {
    std::string out;
    for (const auto& inst : instances) {
        nlohmann::ordered_json j;
        j["activity"] = inst.activity;
        j["video"] = inst.video;
        j["beginFrame"] = inst.begin_frame;
        j["endFrame"] = inst.end_frame;
        std::string line = j.dump();
        if (inst.presence_conf) {
            line.pop_back();
            line += ",\"presenceConf\":" + format_real(*inst.presence_conf) + "}";
        }
        out += line + '\n';
    }
    return out;
}

std::vector<VideoMeta> parse_videos(std::string_view text, std::string_view source) {
    std::vector<VideoMeta> out;
    for (const auto& [no, line] : content_lines(text)) {
        const auto f = split_ws(line);
        if (f.size() != 3)
            parse_fail(source, no, "expected 'video n_frames frame_rate'");
        VideoMeta m;
        m.video = f[0];
        m.n_frames = parse_number<int64_t>(f[1], source, no, "n_frames");
        m.frame_rate = parse_number<double>(f[2], source, no, "frame_rate");
        if (m.n_frames < 1 || !(m.frame_rate > 0.0))
            parse_fail(source, no, "n_frames and frame_rate must be positive");
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<Candidate> parse_candidates(std::string_view text, std::string_view source) {
    std::vector<Candidate> out;
    for (const auto& [no, line] : content_lines(text)) {
        const auto f = split_on(line, '\t');
        if (f.size() != 3)
            parse_fail(source, no, "expected 'video<TAB>confidence<TAB>sentence'");
        Candidate c;
        c.video = trim(f[0]);
        require_field_token(c.video, source, no, "video id");
        c.confidence = parse_number<double>(trim(f[1]), source, no, "confidence");
        c.sentence = f[2];
        out.push_back(std::move(c));
    }
    return out;
}

std::map<VideoId, std::vector<std::string>> parse_references(std::string_view text,
                                                             std::string_view source) {
    std::map<VideoId, std::vector<std::string>> out;
    for (const auto& [no, line] : content_lines(text)) {
        const auto f = split_on(line, '\t');
        if (f.size() != 2)
            parse_fail(source, no, "expected 'video<TAB>sentence'");
        auto video = trim(f[0]);
        require_field_token(video, source, no, "video id");
        if (captions::tokenize(f[1]).empty())
            parse_fail(source, no, "empty reference caption");
        out[video].push_back(f[1]);
    }
    return out;
}

std::vector<captions::DaRating> parse_da_ratings(std::string_view text, std::string_view source) {
    std::vector<captions::DaRating> out;
    bool first = true;
    for (const auto& [no, line] : content_lines(text)) {
        auto f = split_on(line, ',');
        for (auto& x : f)
            x = trim(x);
        if (first && is_header(f, "worker_id")) {
            first = false;
            continue;
        }
        first = false;
        if (f.size() != 4)
            parse_fail(source, no, "expected 'worker_id,system_id,video_id,raw'");
        for (int k = 0; k < 3; ++k)
            require_field_token(f[k], source, no, "identifier");
        const int raw = parse_number<int>(f[3], source, no, "rating");
        if (raw < 0 || raw > 100)
            parse_fail(source, no, "rating outside 0..100");
        out.push_back({f[0], f[1], f[2], static_cast<double>(raw)});
    }
    return out;
}

std::vector<vsum::AssessmentRecord> parse_vsum(std::string_view text, std::string_view source) {
    std::vector<vsum::AssessmentRecord> out;
    bool first = true;
    for (const auto& [no, line] : content_lines(text)) {
        auto f = split_on(line, ',');
        for (auto& x : f)
            x = trim(x);
        if (first && is_header(f, "team")) {
            first = false;
            continue;
        }
        first = false;
        if (f.size() != 11)
            parse_fail(source, no,
                       "expected 'team,run,query,tempo,contextuality,redundancy,q1,q2,q3,q4,q5'");
        vsum::AssessmentRecord r;
        r.team = f[0];
        require_field_token(r.team, source, no, "team");
        r.run = parse_number<int>(f[1], source, no, "run");
        r.query = f[2];
        require_field_token(r.query, source, no, "query");
        r.tempo = parse_number<int>(f[3], source, no, "tempo");
        r.contextuality = parse_number<int>(f[4], source, no, "contextuality");
        r.redundancy = parse_number<int>(f[5], source, no, "redundancy");
        for (int q = 0; q < 5; ++q) {
            const auto& v = f[6 + q];
            if (v != "0" && v != "1")
                parse_fail(source, no, "question answers must be 0 or 1");
            r.answers[q] = v == "1";
        }
        try {
            vsum::validate(r);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string(source) + ":" + std::to_string(no) + ": " + e.what());
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ScoreRow> parse_scores(std::string_view text, std::string_view source) {
    std::vector<ScoreRow> out;
    bool first = true;
    for (const auto& [no, line] : content_lines(text)) {
        auto f = split_on(line, ',');
        for (auto& x : f)
            x = trim(x);
        if (first && is_header(f, "run_tag")) {
            first = false;
            continue;
        }
        first = false;
        if (f.size() != 4)
            parse_fail(source, no, "expected 'run_tag,topic,measure,value'");
        for (int k = 0; k < 3; ++k)
            require_field_token(f[k], source, no, "field");
        out.push_back({f[0], f[1], f[2], parse_number<double>(f[3], source, no, "value")});
    }
    return out;
}

std::string write_scores(const std::vector<ScoreRow>& rows) {
    std::string out = "run_tag,topic,measure,value\n";
    for (const auto& r : rows)
        out += r.run_tag + ',' + r.topic + ',' + r.measure + ',' + format_real(r.value) + '\n';
    return out;
}

std::vector<std::pair<std::string, std::string>> parse_pairs(std::string_view text,
                                                             std::string_view source) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [no, line] : content_lines(text)) {
        const auto f = split_ws(line);
        if (f.size() != 2)
            parse_fail(source, no, "expected two whitespace-separated fields");
        out.emplace_back(f[0], f[1]);
    }
    return out;
}

}  // namespace vidmetrics::io
