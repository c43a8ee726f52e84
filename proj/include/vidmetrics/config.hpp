#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "vidmetrics/actev.hpp"
#include "vidmetrics/captions.hpp"
#include "vidmetrics/pooling.hpp"
#include "vidmetrics/random.hpp"
#include "vidmetrics/retrieval.hpp"
#include "vidmetrics/significance.hpp"
#include "vidmetrics/vsum.hpp"

namespace vidmetrics {

struct RetrievalOptions {
    double epsilon = kDefaultEpsilon;
    int depth_limit = kDefaultDepthLimit;
    int recall_depth = kDefaultDepthLimit;
};

struct SignificanceOptions {
    int64_t iterations = significance::kDefaultIterations;
    double alpha = significance::kDefaultAlpha;
};

struct CaptionOptions {
    int bleu_max_n = 4;
    captions::BleuMode bleu_mode = captions::BleuMode::sentence;
};

struct Config {
    uint64_t seed = kDefaultSeed;
    PoolSpec pooling;
    RetrievalOptions retrieval;
    actev::ScoringOptions actev;
    SignificanceOptions significance;
    CaptionOptions captions;
    vsum::Rounding vsum_rounding = vsum::Rounding::final_sum;
};

/// Applies `key = value` lines under [general], [pooling], [retrieval], [actev],
/// [significance], [captions] and [vsum] on top of `base`. Unknown sections or
/// keys and out-of-range values throw Error(ConfigError).
Config parse_config(std::string_view text, Config base = {}, std::string_view source = "<config>");

/// Sets one `section.key` value (used for command-line overrides).
void set_config_value(Config& cfg, std::string_view section, std::string_view key,
                      std::string_view value);

void validate_config(const Config& cfg);

nlohmann::ordered_json config_snapshot(const Config& cfg);

}  // namespace vidmetrics
