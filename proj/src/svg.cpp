#include "pricecast/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace pricecast::svg {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace

std::string line_chart(const std::string& title, const std::vector<Date>& dates, const std::vector<Series>& series,
                       const std::string& comment) {
    constexpr double width = 900, height = 420, left = 70, right = 20, top = 40, bottom = 50;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::size_t count = dates.size();
    for (const auto& s : series) {
        count = std::max(count, s.values.size());
        for (double v : s.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi == lo) hi = lo + 1.0;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    const auto x_of = [&](std::size_t i) {
        return left + (count > 1 ? plot_w * static_cast<double>(i) / static_cast<double>(count - 1) : plot_w / 2);
    };
    const auto y_of = [&](double v) { return top + plot_h * (hi - v) / (hi - lo); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    if (!comment.empty()) out << "<!-- " << escape(comment) << " -->\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
        << "</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double v = lo + (hi - lo) * k / 4.0;
        const double y = y_of(v);
        out << "<line x1=\"" << left << "\" y1=\"" << num(y) << "\" x2=\"" << left + plot_w << "\" y2=\"" << num(y)
            << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << left - 6 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << label(v)
            << "</text>\n";
    }
    if (!dates.empty()) {
        const std::size_t ticks = std::min<std::size_t>(6, dates.size());
        for (std::size_t k = 0; k < ticks; ++k) {
            const std::size_t i = ticks > 1 ? k * (dates.size() - 1) / (ticks - 1) : 0;
            const double x = x_of(i);
            out << "<text x=\"" << num(x) << "\" y=\"" << height - bottom + 18 << "\" text-anchor=\"middle\">"
                << dates[i].iso() << "</text>\n";
        }
    }
    double legend_x = left + 10;
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (i) out << ' ';
            out << num(x_of(i)) << ',' << num(y_of(s.values[i]));
        }
        out << "\"/>\n";
        out << "<rect x=\"" << legend_x << "\" y=\"" << top + 8 << "\" width=\"12\" height=\"3\" fill=\"" << s.color
            << "\"/>\n";
        out << "<text x=\"" << legend_x + 16 << "\" y=\"" << top + 13 << "\">" << escape(s.name) << "</text>\n";
        legend_x += 110;
    }
    out << "</svg>\n";
    return out.str();
}

std::string heatmap(const std::string& title, const std::string& row_label, const std::string& col_label, int rows,
                    int cols, const std::vector<std::optional<double>>& cells, const std::string& comment) {
    constexpr double cell = 60, left = 70, top = 50;
    const double width = left + cell * cols + 30;
    const double height = top + cell * rows + 50;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& c : cells) {
        if (c) {
            lo = std::min(lo, *c);
            hi = std::max(hi, *c);
        }
    }
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi == lo) hi = lo + 1.0;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    if (!comment.empty()) out << "<!-- " << escape(comment) << " -->\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
        << "</text>\n";
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const auto& v = cells[static_cast<std::size_t>(r * cols + c)];
            std::string fill = "#bbbbbb";
            if (v) {
                // Low values dark blue, high values pale yellow.
                const double t = (*v - lo) / (hi - lo);
                const int red = static_cast<int>(std::lround(30 + 225 * t));
                const int green = static_cast<int>(std::lround(60 + 180 * t));
                const int blue = static_cast<int>(std::lround(140 - 20 * t));
                char buf[16];
                std::snprintf(buf, sizeof buf, "#%02x%02x%02x", red, green, blue);
                fill = buf;
            }
            const double x = left + c * cell;
            const double y = top + r * cell;
            out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
                << "\" fill=\"" << fill << "\" stroke=\"white\"/>\n";
            out << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4 << "\" text-anchor=\"middle\">"
                << (v ? label(*v) : std::string("n/a")) << "</text>\n";
        }
        out << "<text x=\"" << left - 8 << "\" y=\"" << top + r * cell + cell / 2 + 4 << "\" text-anchor=\"end\">"
            << escape(row_label) << '=' << r << "</text>\n";
    }
    for (int c = 0; c < cols; ++c) {
        out << "<text x=\"" << left + c * cell + cell / 2 << "\" y=\"" << top - 6 << "\" text-anchor=\"middle\">"
            << escape(col_label) << '=' << c << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace pricecast::svg
