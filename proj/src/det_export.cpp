#include "vidmetrics/det_export.hpp"

#include <algorithm>
#include <cstdio>

#include "vidmetrics/formats.hpp"

namespace vidmetrics::io {

std::string sanitize_name(std::string_view name) {
    std::string out(name);
    for (auto& c : out) {
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                        (c >= '0' && c <= '9') || c == '_';
        if (!ok)
            c = '_';
    }
    return out;
}

std::string det_csv(const actev::DetCurve& curve) {
    if (curve.points.empty())
        throw Error(ErrorKind::EmptyCurve, "DET curve for " + curve.activity + " has no points");
    std::string out = "activity,threshold,tfa,rfa,pmiss\n";
    for (const auto& p : curve.points)
        out += curve.activity + ',' + format_real(p.threshold) + ',' + format_real(p.tfa) + ',' +
               format_real(p.rfa) + ',' + format_real(p.pmiss) + '\n';
    return out;
}

std::string det_svg(std::span<const actev::DetCurve> curves, double fa_max) {
    constexpr double kW = 480, kH = 360, kPad = 40;
    if (!(fa_max > 0.0))
        fa_max = 1.0;
    auto sx = [&](double fa) { return kPad + std::min(fa, fa_max) / fa_max * (kW - 2 * kPad); };
    auto sy = [&](double pm) { return kH - kPad - pm * (kH - 2 * kPad); };
    static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                              "#9467bd", "#ff7f0e", "#17becf"};
    char buf[128];
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"360\">\n";
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" "
                  "stroke=\"#444\"/>\n",
                  kPad, kPad, kW - 2 * kPad, kH - 2 * kPad);
    svg += buf;
    size_t k = 0;
    for (const auto& curve : curves) {
        if (curve.points.empty())
            continue;
        std::string pts;
        double prev_pm = 1.0;
        auto add = [&](double fa, double pm) {
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(fa), sy(pm));
            pts += buf;
        };
        add(0.0, 1.0);
        for (const auto& p : curve.points) {
            const double fa = curve.fa(p);
            add(fa, prev_pm);
            add(fa, p.pmiss);
            prev_pm = p.pmiss;
        }
        add(fa_max, prev_pm);
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(kColors[k++ % 6]) +
               "\" points=\"" + pts + "\"><title>" + sanitize_name(curve.activity) +
               "</title></polyline>\n";
    }
    svg += "<text x=\"240\" y=\"352\" text-anchor=\"middle\" font-size=\"12\">";
    svg += curves.empty() || curves.front().axis == actev::FaAxis::tfa ? "Tfa" : "Rfa";
    svg += "</text>\n<text x=\"12\" y=\"180\" font-size=\"12\">Pmiss</text>\n</svg>\n";
    return svg;
}

}  // namespace vidmetrics::io
