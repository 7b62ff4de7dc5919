#pragma once

#include "pricecast/dataset.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pricecast::svg {

struct Series {
    std::string name;
    std::vector<double> values;
    std::string color;
};

/// Static line chart; x positions are trading-day indices labelled with dates.
std::string line_chart(const std::string& title, const std::vector<Date>& dates, const std::vector<Series>& series,
                       const std::string& comment = {});

/// Heatmap of a row-major matrix with missing cells drawn grey.
std::string heatmap(const std::string& title, const std::string& row_label, const std::string& col_label,
                    int rows, int cols, const std::vector<std::optional<double>>& cells,
                    const std::string& comment = {});

}  // namespace pricecast::svg
