// Self-contained SVG output: the normalized level-set curve with the
// selected knee, and box summaries for benchmark cells. Fixed viewbox, no
// external fonts, no timestamps, so identical inputs give identical bytes.

#ifndef ALPHAMAX_SVG_HPP
#define ALPHAMAX_SVG_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace alphamax {

namespace detail {

inline std::string svg_num(double v) {
    std::ostringstream ss;
    ss.precision(2);
    ss << std::fixed << v;
    return ss.str();
}

struct PlotFrame {
    double left = 70, right = 770, top = 40, bottom = 440;

    double x(double v, double lo, double hi) const {
        return left + (v - lo) / (hi - lo) * (right - left);
    }
    double y(double v, double lo, double hi) const {
        return bottom - (v - lo) / (hi - lo) * (bottom - top);
    }
};

inline void svg_open(std::ostringstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" "
           "font-family=\"sans-serif\" font-size=\"13\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
    out << "<text x=\"400\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">" << title
        << "</text>\n";
}

inline void svg_axes(std::ostringstream& out, const PlotFrame& f, const std::string& x_label,
                     const std::string& y_label) {
    out << "<line x1=\"" << f.left << "\" y1=\"" << f.bottom << "\" x2=\"" << f.right << "\" y2=\""
        << f.bottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << f.left << "\" y1=\"" << f.top << "\" x2=\"" << f.left << "\" y2=\""
        << f.bottom << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (f.left + f.right) / 2 << "\" y=\"480\" text-anchor=\"middle\">"
        << x_label << "</text>\n";
    out << "<text x=\"18\" y=\"" << (f.top + f.bottom) / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << (f.top + f.bottom) / 2
        << ")\">" << y_label << "</text>\n";
}

}  // namespace detail

// Line plot of the normalized profile likelihood with vertical rules at the
// estimate and, when known, the true mixing proportion.
inline std::string render_curve_svg(const std::vector<double>& cs,
                                    const std::vector<double>& ells_normalized, double alpha_hat,
                                    std::optional<double> true_alpha = std::nullopt) {
    detail::PlotFrame f;
    std::ostringstream out;
    detail::svg_open(out, "normalized profile log-likelihood");
    detail::svg_axes(out, f, "mixing proportion c", "normalized log-likelihood");

    for (int t = 0; t <= 5; ++t) {
        const double cx = f.x(t / 5.0, 0.0, 1.0);
        out << "<line x1=\"" << detail::svg_num(cx) << "\" y1=\"" << f.bottom << "\" x2=\""
            << detail::svg_num(cx) << "\" y2=\"" << f.bottom + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << detail::svg_num(cx) << "\" y=\"" << f.bottom + 20
            << "\" text-anchor=\"middle\">" << detail::svg_num(t / 5.0) << "</text>\n";
        const double cy = f.y(t / 5.0, 0.0, 1.0);
        out << "<text x=\"" << f.left - 8 << "\" y=\"" << detail::svg_num(cy + 4)
            << "\" text-anchor=\"end\">" << detail::svg_num(t / 5.0) << "</text>\n";
    }

    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (i) out << ' ';
        out << detail::svg_num(f.x(cs[i], 0.0, 1.0)) << ','
            << detail::svg_num(f.y(ells_normalized[i], 0.0, 1.0));
    }
    out << "\"/>\n";

    auto rule = [&](double v, const char* color, const char* label) {
        const double cx = f.x(v, 0.0, 1.0);
        out << "<line x1=\"" << detail::svg_num(cx) << "\" y1=\"" << f.top << "\" x2=\""
            << detail::svg_num(cx) << "\" y2=\"" << f.bottom << "\" stroke=\"" << color
            << "\" stroke-dasharray=\"6 4\"/>\n";
        out << "<text x=\"" << detail::svg_num(cx + 4) << "\" y=\"" << f.top + 14 << "\" fill=\""
            << color << "\">" << label << "</text>\n";
    };
    if (true_alpha) rule(*true_alpha, "#d62728", "true alpha");
    rule(alpha_hat, "#2ca02c", "alpha hat");

    out << "</svg>\n";
    return out.str();
}

struct BoxStats {
    std::string label;
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

inline BoxStats box_stats(const std::string& label, std::vector<double> values) {
    std::sort(values.begin(), values.end());
    auto quantile = [&](double q) {
        const double pos = q * (values.size() - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        if (i + 1 >= values.size()) return values.back();
        return values[i] + (pos - i) * (values[i + 1] - values[i]);
    };
    return {label, values.front(), quantile(0.25), quantile(0.5), quantile(0.75), values.back()};
}

// Quartile-whisker summary, one box per estimator.
inline std::string render_box_svg(const std::string& title, const std::vector<BoxStats>& boxes) {
    detail::PlotFrame f;
    std::ostringstream out;
    detail::svg_open(out, title);
    detail::svg_axes(out, f, "", "absolute error");

    double hi = 0.0;
    for (const auto& b : boxes) hi = std::max(hi, b.max);
    if (hi <= 0.0) hi = 1.0;
    hi *= 1.05;

    for (int t = 0; t <= 5; ++t) {
        const double v = hi * t / 5.0;
        out << "<text x=\"" << f.left - 8 << "\" y=\"" << detail::svg_num(f.y(v, 0.0, hi) + 4)
            << "\" text-anchor=\"end\">" << detail::svg_num(v) << "</text>\n";
    }

    const double slot = (f.right - f.left) / std::max<std::size_t>(boxes.size(), 1);
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const auto& b = boxes[i];
        const double cx = f.left + slot * (i + 0.5);
        const double half = std::min(40.0, slot * 0.3);
        auto y = [&](double v) { return f.y(v, 0.0, hi); };

        out << "<line x1=\"" << detail::svg_num(cx) << "\" y1=\"" << detail::svg_num(y(b.min))
            << "\" x2=\"" << detail::svg_num(cx) << "\" y2=\"" << detail::svg_num(y(b.max))
            << "\" stroke=\"black\"/>\n";
        for (double v : {b.min, b.max})
            out << "<line x1=\"" << detail::svg_num(cx - half / 2) << "\" y1=\""
                << detail::svg_num(y(v)) << "\" x2=\"" << detail::svg_num(cx + half / 2)
                << "\" y2=\"" << detail::svg_num(y(v)) << "\" stroke=\"black\"/>\n";
        out << "<rect x=\"" << detail::svg_num(cx - half) << "\" y=\"" << detail::svg_num(y(b.q3))
            << "\" width=\"" << detail::svg_num(2 * half) << "\" height=\""
            << detail::svg_num(y(b.q1) - y(b.q3)) << "\" fill=\"#aec7e8\" stroke=\"black\"/>\n";
        out << "<line x1=\"" << detail::svg_num(cx - half) << "\" y1=\""
            << detail::svg_num(y(b.median)) << "\" x2=\"" << detail::svg_num(cx + half)
            << "\" y2=\"" << detail::svg_num(y(b.median)) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << detail::svg_num(cx) << "\" y=\"" << f.bottom + 20
            << "\" text-anchor=\"middle\">" << b.label << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace alphamax

#endif  // ALPHAMAX_SVG_HPP
