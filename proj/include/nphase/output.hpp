#pragma once

#include <complex>
#include <fstream>
#include <string>
#include <vector>

namespace nphase {

/// Shortest round-trip decimal form; used in every text payload so reruns
/// are byte-identical.
std::string format_number(double v);

/// CSV with a schema comment line and a fixed column order.  Numeric cells go
/// through format_number; empty optionals become empty cells.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& schema_id, int version,
              const std::vector<std::string>& columns);
    void comment(const std::string& text);
    void row(const std::vector<std::string>& cells);
    static std::string cell(double v) { return format_number(v); }
    static std::string cell(int v) { return std::to_string(v); }

private:
    std::ofstream out_;
    std::size_t width_;
};

/// Minimal SVG canvas: fixed pixel viewport, data-space mapping, a small set
/// of primitives.  Enough for scatter, polyline and heatmap panels.
class SvgCanvas {
public:
    SvgCanvas(double x_min, double x_max, double y_min, double y_max,
              int width = 640, int height = 640);

    void circle(double x, double y, double radius_px, const std::string& color,
                double opacity = 1.0);
    void line(double x0, double y0, double x1, double y1, const std::string& color,
              double width_px = 1.0);
    void polyline(const std::vector<std::pair<double, double>>& pts,
                  const std::string& color, double width_px = 1.0);
    void rect(double x0, double y0, double x1, double y1, const std::string& fill);
    void text(double x, double y, const std::string& label, int size_px = 12);
    void axes(const std::string& x_label, const std::string& y_label);
    void save(const std::string& path) const;

    /// Fixed qualitative palette, cycled by index.
    static std::string palette(int index);
    /// Blue-to-red linear colormap over [0, 1].
    static std::string heat(double t);

private:
    double px(double x) const;
    double py(double y) const;
    double x_min_, x_max_, y_min_, y_max_;
    int width_, height_;
    std::string body_;
};

}  // namespace nphase
