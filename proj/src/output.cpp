#include "nphase/output.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nphase {

std::string format_number(double v) {
    char buf[40];
    // %.17g round-trips; trim to the shortest form that still does
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back;
        std::sscanf(buf, "%lf", &back);
        if (back == v) return buf;
    }
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& schema_id,
                     int version, const std::vector<std::string>& columns)
    : out_(path), width_(columns.size()) {
    if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
    out_ << "# schema: " << schema_id << " v" << version << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_)
        throw std::runtime_error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i)
        out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

SvgCanvas::SvgCanvas(double x_min, double x_max, double y_min, double y_max,
                     int width, int height)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max),
      width_(width), height_(height) {}

double SvgCanvas::px(double x) const {
    return 40.0 + (x - x_min_) / (x_max_ - x_min_) * (width_ - 60.0);
}

double SvgCanvas::py(double y) const {
    return (height_ - 40.0) - (y - y_min_) / (y_max_ - y_min_) * (height_ - 60.0);
}

void SvgCanvas::circle(double x, double y, double radius_px, const std::string& color,
                       double opacity) {
    body_ += "<circle cx=\"" + format_number(px(x)) + "\" cy=\"" + format_number(py(y)) +
             "\" r=\"" + format_number(radius_px) + "\" fill=\"" + color + "\"";
    if (opacity < 1.0) body_ += " fill-opacity=\"" + format_number(opacity) + "\"";
    body_ += "/>\n";
}

void SvgCanvas::line(double x0, double y0, double x1, double y1,
                     const std::string& color, double width_px) {
    body_ += "<line x1=\"" + format_number(px(x0)) + "\" y1=\"" + format_number(py(y0)) +
             "\" x2=\"" + format_number(px(x1)) + "\" y2=\"" + format_number(py(y1)) +
             "\" stroke=\"" + color + "\" stroke-width=\"" + format_number(width_px) +
             "\"/>\n";
}

void SvgCanvas::polyline(const std::vector<std::pair<double, double>>& pts,
                         const std::string& color, double width_px) {
    if (pts.empty()) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
             format_number(width_px) + "\" points=\"";
    for (const auto& [x, y] : pts)
        body_ += format_number(px(x)) + "," + format_number(py(y)) + " ";
    body_ += "\"/>\n";
}

void SvgCanvas::rect(double x0, double y0, double x1, double y1,
                     const std::string& fill) {
    const double ax = px(std::min(x0, x1)), ay = py(std::max(y0, y1));
    const double w = std::abs(px(x1) - px(x0)), h = std::abs(py(y1) - py(y0));
    body_ += "<rect x=\"" + format_number(ax) + "\" y=\"" + format_number(ay) +
             "\" width=\"" + format_number(w) + "\" height=\"" + format_number(h) +
             "\" fill=\"" + fill + "\"/>\n";
}

void SvgCanvas::text(double x, double y, const std::string& label, int size_px) {
    body_ += "<text x=\"" + format_number(px(x)) + "\" y=\"" + format_number(py(y)) +
             "\" font-size=\"" + std::to_string(size_px) +
             "\" font-family=\"sans-serif\">" + label + "</text>\n";
}

void SvgCanvas::axes(const std::string& x_label, const std::string& y_label) {
    body_ += "<rect x=\"40\" y=\"20\" width=\"" + format_number(width_ - 60.0) +
             "\" height=\"" + format_number(height_ - 60.0) +
             "\" fill=\"none\" stroke=\"#444\"/>\n";
    body_ += "<text x=\"" + format_number(width_ / 2.0) + "\" y=\"" +
             format_number(height_ - 8.0) +
             "\" font-size=\"13\" font-family=\"sans-serif\" text-anchor=\"middle\">" +
             x_label + "</text>\n";
    body_ += "<text x=\"12\" y=\"" + format_number(height_ / 2.0) +
             "\" font-size=\"13\" font-family=\"sans-serif\" text-anchor=\"middle\" "
             "transform=\"rotate(-90 12 " +
             format_number(height_ / 2.0) + ")\">" + y_label + "</text>\n";
}

void SvgCanvas::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_
        << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << " "
        << height_ << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_ << "</svg>\n";
}

std::string SvgCanvas::palette(int index) {
    static const std::array<const char*, 10> colors = {
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
        "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[static_cast<std::size_t>(index) % colors.size()];
}

std::string SvgCanvas::heat(double t) {
    t = std::min(1.0, std::max(0.0, t));
    const int r = static_cast<int>(40 + 215 * t);
    const int g = static_cast<int>(60 + 60 * (1 - std::abs(2 * t - 1)));
    const int b = static_cast<int>(40 + 215 * (1 - t));
    char buf[10];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace nphase
