#pragma once

#include <string>
#include <vector>

namespace wvq::svg {

struct LineSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> y_lo; // optional CI band, same length as x or empty
    std::vector<double> y_hi;
};

struct ScatterGroup {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Line chart with markers, legend and optional shaded CI bands. Output is
// deterministic for identical inputs.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<LineSeries>& series,
                       bool log_y = false);

std::string scatter_chart(const std::string& title, const std::vector<ScatterGroup>& groups);

void write_file(const std::string& path, const std::string& content);

} // namespace wvq::svg
