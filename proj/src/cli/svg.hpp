#pragma once
// Static SVG plots with fixed number formatting, so output is byte-stable.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "itt/persistence.hpp"

namespace itt::svg {

std::string escape(std::string_view text);

// One panel per homology dimension 0..b.max_dim, bars as horizontal segments.
// Infinite bars run to the right edge and end in an arrow head.
std::string barcode(const Barcode& b, const std::string& title, double x_max);

std::string histogram(const std::map<std::size_t, std::size_t>& counts, const std::string& title,
                      const std::string& x_label);

// Square matrix of percentages with row and column labels.
std::string heatmap(const std::vector<std::vector<double>>& values, const std::vector<std::string>& labels,
                    const std::string& title);

}  // namespace itt::svg
