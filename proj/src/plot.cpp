#include "imcf/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <locale>
#include <sstream>

namespace imcf::plot {

namespace {

constexpr int kLeft = 78;
constexpr int kRight = 24;
constexpr int kTop = 40;
constexpr int kBottom = 56;

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double x) {
    // short tick labels
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(4);
    os << x;
    return os.str();
}

std::string px(double x) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.setf(std::ios::fixed);
    os.precision(2);
    os << x;
    return os.str();
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target) {
    std::vector<double> out;
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        out.push_back(lo);
        return out;
    }
    const double raw = (hi - lo) / std::max(1, target);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    }
    const double start = std::ceil(lo / step) * step;
    for (double t = start; t <= hi + 1e-9 * step; t += step) {
        out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    }
    return out;
}

std::string render_svg(const Chart& chart, const std::vector<Series>& series) {
    const double w = chart.width;
    const double h = chart.height;
    const double pw = w - kLeft - kRight;
    const double ph = h - kTop - kBottom;

    auto tx = [&](double x) { return chart.log_x ? std::log10(x) : x; };
    auto keep = [&](double x, double y) {
        if (!std::isfinite(x) || !std::isfinite(y) || (chart.log_x && !(x > 0.0))) {
            return false;
        }
        if (chart.y_min && y < *chart.y_min) return false;
        if (chart.y_max && y > *chart.y_max) return false;
        return true;
    };

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    double y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!keep(s.x[i], s.y[i])) continue;
            x0 = std::min(x0, tx(s.x[i]));
            x1 = std::max(x1, tx(s.x[i]));
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    }
    if (chart.rule_y) {
        y0 = std::min(y0, *chart.rule_y);
        y1 = std::max(y1, *chart.rule_y);
    }
    if (!std::isfinite(x0)) {
        x0 = 0.0;
        x1 = 1.0;
    }
    if (!std::isfinite(y0)) {
        y0 = 0.0;
        y1 = 1.0;
    }
    if (x1 <= x0) x1 = x0 + 1.0;
    if (y1 <= y0) {
        const double pad = std::max(1.0, std::abs(y0)) * 0.05;
        y0 -= pad;
        y1 += pad;
    }
    const double ypad = 0.04 * (y1 - y0);
    y0 -= ypad;
    y1 += ypad;

    auto sx = [&](double x) { return kLeft + (tx(x) - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width << "\" height=\""
       << chart.height << "\" viewBox=\"0 0 " << chart.width << ' ' << chart.height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << px(w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"15\">"
       << esc(chart.title) << "</text>\n";

    // grid and ticks
    os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    std::vector<double> xt;
    if (chart.log_x) {
        for (double e = std::ceil(x0); e <= x1 + 1e-12; e += 1.0) xt.push_back(e);
        if (xt.size() < 2) xt = nice_ticks(x0, x1);
    } else {
        xt = nice_ticks(x0, x1);
    }
    for (double t : xt) {
        const double X = kLeft + (t - x0) / (x1 - x0) * pw;
        os << "<line x1=\"" << px(X) << "\" y1=\"" << kTop << "\" x2=\"" << px(X) << "\" y2=\""
           << px(kTop + ph) << "\" stroke=\"#e5e5e5\"/>\n";
        const std::string label = chart.log_x ? "1e" + num(t) : num(t);
        os << "<text x=\"" << px(X) << "\" y=\"" << px(kTop + ph + 16)
           << "\" text-anchor=\"middle\">" << esc(label) << "</text>\n";
    }
    for (double t : nice_ticks(y0, y1)) {
        const double Y = sy(t);
        os << "<line x1=\"" << kLeft << "\" y1=\"" << px(Y) << "\" x2=\"" << px(kLeft + pw)
           << "\" y2=\"" << px(Y) << "\" stroke=\"#e5e5e5\"/>\n";
        os << "<text x=\"" << kLeft - 6 << "\" y=\"" << px(Y + 4) << "\" text-anchor=\"end\">"
           << esc(num(t)) << "</text>\n";
    }
    os << "</g>\n";
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << px(pw) << "\" height=\""
       << px(ph) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    os << "<text x=\"" << px(kLeft + pw / 2) << "\" y=\"" << px(h - 14)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
       << esc(chart.x_label) << "</text>\n";
    os << "<text transform=\"translate(18," << px(kTop + ph / 2)
       << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
       << esc(chart.y_label) << "</text>\n";

    int legend_row = 0;
    auto legend = [&](const std::string& label, const std::string& color, bool dashed) {
        const double ly = kTop + 14 + 16 * legend_row++;
        const double lx = kLeft + pw - 150;
        os << "<line x1=\"" << px(lx) << "\" y1=\"" << px(ly) << "\" x2=\"" << px(lx + 22)
           << "\" y2=\"" << px(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\""
           << (dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
        os << "<text x=\"" << px(lx + 28) << "\" y=\"" << px(ly + 4)
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << esc(label) << "</text>\n";
    };

    if (chart.rule_y) {
        const double Y = sy(*chart.rule_y);
        os << "<line x1=\"" << kLeft << "\" y1=\"" << px(Y) << "\" x2=\"" << px(kLeft + pw)
           << "\" y2=\"" << px(Y) << "\" stroke=\"#d62728\" stroke-width=\"1.5\" "
              "stroke-dasharray=\"6 4\"/>\n";
    }
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!keep(s.x[i], s.y[i])) continue;
            os << (first ? "" : " ") << px(sx(s.x[i])) << ',' << px(sy(s.y[i]));
            first = false;
        }
        os << "\"/>\n";
    }
    for (const auto& s : series) {
        if (!s.label.empty()) legend(s.label, s.color, false);
    }
    if (chart.rule_y && !chart.rule_label.empty()) {
        legend(chart.rule_label, "#d62728", true);
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace imcf::plot
