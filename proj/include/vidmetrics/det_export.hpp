#pragma once

#include <span>
#include <string>
#include <string_view>

#include "vidmetrics/actev.hpp"

namespace vidmetrics::io {

/// Replaces every character outside [A-Za-z0-9_] with '_'.
std::string sanitize_name(std::string_view name);

/// `activity,threshold,tfa,rfa,pmiss` header plus one row per curve point.
std::string det_csv(const actev::DetCurve& curve);

/// Step-plot of one or more curves. Presentation only.
std::string det_svg(std::span<const actev::DetCurve> curves, double fa_max);

}  // namespace vidmetrics::io
