#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace slabrt::cli {

/// 17 significant digits, the round-trip precision of a double.
std::string format_double(double v);

/// Writes a header row and numeric rows with LF line endings.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Pretty-printed with two-space indent and a trailing LF.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Line plot as plain SVG text. Series with fewer than two points are skipped.
void write_svg(const std::filesystem::path& path, const Plot& plot);

}  // namespace slabrt::cli
