#include "vidmetrics/config.hpp"

#include <charconv>
#include <cmath>

#include "vidmetrics/formats.hpp"

namespace vidmetrics {

namespace {

[[noreturn]] void config_fail(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

template <typename T>
T number(std::string_view section, std::string_view key, std::string_view value) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        config_fail(std::string(section) + "." + std::string(key) + ": bad number '" +
                    std::string(value) + "'");
    return out;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

void set_config_value(Config& cfg, std::string_view section, std::string_view key,
                      std::string_view value) {
    auto unknown = [&] {
        config_fail("unknown config key '" + std::string(section) + "." + std::string(key) + "'");
    };
    if (section == "general") {
        if (key == "seed")
            cfg.seed = number<uint64_t>(section, key, value);
        else
            unknown();
    } else if (section == "pooling") {
        auto& p = cfg.pooling;
        if (key == "mode") {
            if (value == "avs")
                p.mode = PoolMode::avs_two_tier;
            else if (value == "ins")
                p.mode = PoolMode::rank_strata;
            else
                config_fail("pooling.mode must be avs or ins");
        } else if (key == "top_depth") {
            p.top_depth = number<int>(section, key, value);
        } else if (key == "top_rate") {
            p.top_rate = number<double>(section, key, value);
        } else if (key == "tail_depth") {
            p.tail_depth = number<int>(section, key, value);
        } else if (key == "tail_rate") {
            p.tail_rate = number<double>(section, key, value);
        } else if (key == "stratum_size") {
            p.stratum_size = number<int>(section, key, value);
        } else if (key == "max_depth") {
            p.max_depth = number<int>(section, key, value);
        } else if (key.starts_with("depth.") && key.size() > 6) {
            p.topic_depths[std::string(key.substr(6))] = number<int>(section, key, value);
        } else {
            unknown();
        }
    } else if (section == "retrieval") {
        auto& r = cfg.retrieval;
        if (key == "epsilon")
            r.epsilon = number<double>(section, key, value);
        else if (key == "depth_limit")
            r.depth_limit = number<int>(section, key, value);
        else if (key == "recall_depth")
            r.recall_depth = number<int>(section, key, value);
        else
            unknown();
    } else if (section == "actev") {
        auto& a = cfg.actev;
        if (key == "delta")
            a.delta = number<double>(section, key, value);
        else if (key == "tfa_limit")
            a.tfa_limit = number<double>(section, key, value);
        else if (key == "fa_point")
            a.fa_point = number<double>(section, key, value);
        else
            unknown();
    } else if (section == "significance") {
        auto& s = cfg.significance;
        if (key == "iterations")
            s.iterations = number<int64_t>(section, key, value);
        else if (key == "alpha")
            s.alpha = number<double>(section, key, value);
        else
            unknown();
    } else if (section == "captions") {
        auto& c = cfg.captions;
        if (key == "bleu_max_n") {
            c.bleu_max_n = number<int>(section, key, value);
        } else if (key == "bleu_mode") {
            if (value == "sentence")
                c.bleu_mode = captions::BleuMode::sentence;
            else if (value == "corpus")
                c.bleu_mode = captions::BleuMode::corpus;
            else
                config_fail("captions.bleu_mode must be sentence or corpus");
        } else {
            unknown();
        }
    } else if (section == "vsum") {
        if (key == "rounding") {
            if (value == "final")
                cfg.vsum_rounding = vsum::Rounding::final_sum;
            else if (value == "per-question")
                cfg.vsum_rounding = vsum::Rounding::per_question;
            else
                config_fail("vsum.rounding must be final or per-question");
        } else {
            unknown();
        }
    } else {
        config_fail("unknown config section '" + std::string(section) + "'");
    }
}

void validate_config(const Config& cfg) {
    try {
        validate_pool_spec(cfg.pooling);
    } catch (const Error& e) {
        config_fail(std::string("pooling: ") + e.what());
    }
    const auto& r = cfg.retrieval;
    if (!(r.epsilon > 0.0 && r.epsilon < 1.0))
        config_fail("retrieval.epsilon must be in (0,1)");
    if (r.depth_limit < 1 || r.recall_depth < 1)
        config_fail("retrieval depths must be positive");
    const auto& a = cfg.actev;
    if (!(a.delta > 0.0 && a.delta <= 1.0))
        config_fail("actev.delta must be in (0,1]");
    if (!(a.tfa_limit > 0.0) || !std::isfinite(a.tfa_limit))
        config_fail("actev.tfa_limit must be positive");
    if (!(a.fa_point >= 0.0) || !std::isfinite(a.fa_point))
        config_fail("actev.fa_point must be non-negative");
    if (cfg.significance.iterations < 1)
        config_fail("significance.iterations must be positive");
    if (!(cfg.significance.alpha > 0.0 && cfg.significance.alpha < 1.0))
        config_fail("significance.alpha must be in (0,1)");
    if (cfg.captions.bleu_max_n < 1 || cfg.captions.bleu_max_n > 4)
        config_fail("captions.bleu_max_n must be in 1..4");
}

Config parse_config(std::string_view text, Config base, std::string_view source) {
    std::string section;
    for (const auto& [no, raw] : io::content_lines(text)) {
        const auto line = trim(raw);
        const auto where = std::string(source) + ":" + std::to_string(no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']')
                config_fail(where + "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            config_fail(where + "expected 'key = value'");
        if (section.empty())
            config_fail(where + "key outside of a section");
        try {
            set_config_value(base, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const Error& e) {
            config_fail(where + e.what());
        }
    }
    validate_config(base);
    return base;
}

nlohmann::ordered_json config_snapshot(const Config& cfg) {
    nlohmann::ordered_json j;
    j["general"]["seed"] = cfg.seed;
    const auto& p = cfg.pooling;
    j["pooling"]["mode"] = p.mode == PoolMode::avs_two_tier ? "avs" : "ins";
    j["pooling"]["top_depth"] = p.top_depth;
    j["pooling"]["top_rate"] = io::format_real(p.top_rate);
    j["pooling"]["tail_depth"] = p.tail_depth;
    j["pooling"]["tail_rate"] = io::format_real(p.tail_rate);
    j["pooling"]["stratum_size"] = p.stratum_size;
    j["pooling"]["max_depth"] = p.max_depth;
    for (const auto& [topic, depth] : p.topic_depths)
        j["pooling"]["depth." + topic] = depth;
    j["retrieval"]["epsilon"] = cfg.retrieval.epsilon;
    j["retrieval"]["depth_limit"] = cfg.retrieval.depth_limit;
    j["retrieval"]["recall_depth"] = cfg.retrieval.recall_depth;
    j["actev"]["delta"] = io::format_real(cfg.actev.delta);
    j["actev"]["tfa_limit"] = io::format_real(cfg.actev.tfa_limit);
    j["actev"]["fa_point"] = io::format_real(cfg.actev.fa_point);
    j["significance"]["iterations"] = cfg.significance.iterations;
    j["significance"]["alpha"] = io::format_real(cfg.significance.alpha);
    j["captions"]["bleu_max_n"] = cfg.captions.bleu_max_n;
    j["captions"]["bleu_mode"] =
        cfg.captions.bleu_mode == captions::BleuMode::sentence ? "sentence" : "corpus";
    j["vsum"]["rounding"] =
        cfg.vsum_rounding == vsum::Rounding::final_sum ? "final" : "per-question";
    return j;
}

}  // namespace vidmetrics
