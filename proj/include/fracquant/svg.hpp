#pragma once

// Minimal static SVG line charts; no plotting dependency.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace fracquant {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> pts;
};

struct ChartOptions {
    int width = 720;
    int height = 480;
    bool log_y = false;
    std::string title;
    std::string x_label;
    std::string y_label;
};

inline std::string render_line_chart(const std::vector<Series>& series, const ChartOptions& opt) {
    static const char* palette[] = {"#1f6fb2", "#d1495b", "#2e8b57", "#8a5fbf", "#c98a1e"};
    const double ml = 76, mr = 20, mt = opt.title.empty() ? 16 : 40, mb = 48;
    const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series) {
        for (auto [x, y] : s.pts) {
            if (opt.log_y && y <= 0) continue;
            const double yy = opt.log_y ? std::log10(y) : y;
            if (first) {
                xmin = xmax = x;
                ymin = ymax = yy;
                first = false;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, yy);
                ymax = std::max(ymax, yy);
            }
        }
    }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ostringstream out;
    out.precision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
        << opt.height << "\" viewBox=\"0 0 " << opt.width << " " << opt.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!opt.title.empty())
        out << "<text x=\"" << opt.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"15\">" << opt.title << "</text>\n";
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#444\"/>\n";

    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / ticks;
        const double fy = ymin + (ymax - ymin) * i / ticks;
        out << "<line x1=\"" << px(fx) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(fx)
            << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"#444\"/>\n";
        out << "<text x=\"" << px(fx) << "\" y=\"" << mt + ph + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fx
            << "</text>\n";
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << ml << "\" y2=\""
            << py(fy) << "\" stroke=\"#444\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << py(fy) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << (opt.log_y ? "1e" + std::to_string(static_cast<int>(std::round(fy))) : [&] {
                   std::ostringstream t;
                   t.precision(4);
                   t << fy;
                   return t.str();
               }())
            << "</text>\n";
    }
    if (!opt.x_label.empty())
        out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << opt.height - 8
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << opt.x_label << "</text>\n";
    if (!opt.y_label.empty())
        out << "<text x=\"14\" y=\"" << mt + ph / 2
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
            << "transform=\"rotate(-90 14 " << mt + ph / 2 << ")\">" << opt.y_label
            << "</text>\n";

    int ci = 0;
    for (const auto& s : series) {
        const char* color = palette[ci % 5];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        for (auto [x, y] : s.pts) {
            if (opt.log_y && y <= 0) continue;
            out << px(x) << "," << py(opt.log_y ? std::log10(y) : y) << " ";
        }
        out << "\"/>\n";
        out << "<text x=\"" << ml + pw - 6 << "\" y=\"" << mt + 16 + 16 * ci
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color
            << "\">" << s.name << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace fracquant
