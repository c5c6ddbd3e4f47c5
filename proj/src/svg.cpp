#include "wvq/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "wvq/errors.hpp"
#include "wvq/format.hpp"

namespace wvq::svg {

namespace {

constexpr int kWidth = 760;
constexpr int kHeight = 520;
constexpr int kMarginLeft = 78;
constexpr int kMarginRight = 150;
constexpr int kMarginTop = 48;
constexpr int kMarginBottom = 58;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#17becf", "#7f7f7f"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            double m = 0.05 * (hi - lo);
            lo -= m;
            hi += m;
        }
    }
};

struct Mapper {
    Range xr, yr;
    bool log_y = false;
    double tx(double x) const {
        return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * (kWidth - kMarginLeft - kMarginRight);
    }
    double ty(double y) const {
        if (log_y) y = std::log10(std::max(y, 1e-300));
        return kHeight - kMarginBottom -
               (y - yr.lo) / (yr.hi - yr.lo) * (kHeight - kMarginTop - kMarginBottom);
    }
};

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

void header(std::ostringstream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"26\" text-anchor=\"middle\" font-family=\"sans-serif\""
       << " font-size=\"16\">" << esc(title) << "</text>\n";
}

void axes(std::ostringstream& os, const Mapper& m, const std::string& x_label,
          const std::string& y_label) {
    double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
       << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
       << "\" stroke=\"black\"/>\n";
    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        double fx = m.xr.lo + (m.xr.hi - m.xr.lo) * i / ticks;
        double px = m.tx(fx);
        os << "<line x1=\"" << fmt_double(px) << "\" y1=\"" << y0 << "\" x2=\"" << fmt_double(px)
           << "\" y2=\"" << y0 + 5 << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << fmt_double(px) << "\" y=\"" << y0 + 20
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << fmt_double(std::round(fx * 1000.0) / 1000.0) << "</text>\n";
        double fy = m.yr.lo + (m.yr.hi - m.yr.lo) * i / ticks;
        double py = kHeight - kMarginBottom -
                    (fy - m.yr.lo) / (m.yr.hi - m.yr.lo) * (kHeight - kMarginTop - kMarginBottom);
        double label = m.log_y ? std::pow(10.0, fy) : fy;
        os << "<line x1=\"" << x0 - 5 << "\" y1=\"" << fmt_double(py) << "\" x2=\"" << x0
           << "\" y2=\"" << fmt_double(py) << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << x0 - 8 << "\" y=\"" << fmt_double(py + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << (m.log_y ? fmt_double(label) : fmt_double(std::round(label * 1000.0) / 1000.0))
           << "</text>\n";
    }
    os << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 14
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << esc(x_label)
       << "</text>\n"
       << "<text x=\"18\" y=\"" << (y0 + y1) / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
       << (y0 + y1) / 2 << ")\">" << esc(y_label) << "</text>\n";
}

void legend(std::ostringstream& os, const std::vector<std::string>& labels) {
    double lx = kWidth - kMarginRight + 12;
    double ly = kMarginTop + 8;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const char* color = kPalette[i % kPaletteSize];
        os << "<rect x=\"" << lx << "\" y=\"" << ly + 18.0 * static_cast<double>(i)
           << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n"
           << "<text x=\"" << lx + 18 << "\" y=\"" << ly + 18.0 * static_cast<double>(i) + 10
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << esc(labels[i]) << "</text>\n";
    }
}

} // namespace

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<LineSeries>& series,
                       bool log_y) {
    Mapper m;
    m.log_y = log_y;
    for (const auto& s : series) {
        for (double v : s.x) m.xr.add(v);
        for (double v : s.y) m.yr.add(log_y ? std::log10(std::max(v, 1e-300)) : v);
        for (double v : s.y_lo) m.yr.add(log_y ? std::log10(std::max(v, 1e-300)) : v);
        for (double v : s.y_hi) m.yr.add(log_y ? std::log10(std::max(v, 1e-300)) : v);
    }
    m.xr.pad();
    m.yr.pad();

    std::ostringstream os;
    header(os, title);
    axes(os, m, x_label, y_label);

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % kPaletteSize];
        if (s.y_lo.size() == s.x.size() && s.y_hi.size() == s.x.size() && !s.x.empty()) {
            os << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                os << fmt_double(m.tx(s.x[i])) << "," << fmt_double(m.ty(s.y_hi[i])) << " ";
            for (std::size_t i = s.x.size(); i-- > 0;)
                os << fmt_double(m.tx(s.x[i])) << "," << fmt_double(m.ty(s.y_lo[i])) << " ";
            os << "\"/>\n";
        }
        if (s.x.size() > 1) {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                os << fmt_double(m.tx(s.x[i])) << "," << fmt_double(m.ty(s.y[i])) << " ";
            os << "\"/>\n";
        }
        for (std::size_t i = 0; i < s.x.size(); ++i)
            os << "<circle cx=\"" << fmt_double(m.tx(s.x[i])) << "\" cy=\"" << fmt_double(m.ty(s.y[i]))
               << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }

    std::vector<std::string> labels;
    for (const auto& s : series) labels.push_back(s.label);
    legend(os, labels);
    os << "</svg>\n";
    return os.str();
}

std::string scatter_chart(const std::string& title, const std::vector<ScatterGroup>& groups) {
    Mapper m;
    for (const auto& g : groups) {
        for (double v : g.x) m.xr.add(v);
        for (double v : g.y) m.yr.add(v);
    }
    m.xr.pad();
    m.yr.pad();

    std::ostringstream os;
    header(os, title);
    axes(os, m, "x", "y");
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const auto& g = groups[gi];
        const char* color = kPalette[gi % kPaletteSize];
        for (std::size_t i = 0; i < g.x.size(); ++i)
            os << "<circle cx=\"" << fmt_double(m.tx(g.x[i])) << "\" cy=\"" << fmt_double(m.ty(g.y[i]))
               << "\" r=\"2\" fill=\"" << color << "\" fill-opacity=\"0.6\"/>\n";
    }
    std::vector<std::string> labels;
    for (const auto& g : groups) labels.push_back(g.label);
    legend(os, labels);
    os << "</svg>\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ReportWriteError("cannot open for writing: " + path);
    out << content;
    if (!out) throw ReportWriteError("write failed: " + path);
}

} // namespace wvq::svg
