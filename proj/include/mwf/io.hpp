#pragma once

#include <string>
#include <vector>

#include "mwf/lpoly.hpp"

namespace mwf {

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// 8-bit gray images, P2 or P5 with maxval <= 255. Rows of the matrix are image rows.
Mat read_pgm(const std::string& path);
// Samples are rounded and clamped to [0, 255].
void write_pgm(const std::string& path, const Mat& img, bool binary = true);

// One sample per line; blank lines and lines starting with '#' are skipped.
// With several comma-separated fields the first is used.
Eigen::VectorXd read_signal_csv(const std::string& path);
void write_signal_csv(const std::string& path, const Eigen::VectorXd& x);

// Shortest text that reads back to the same double (17 significant digits).
std::string fmt(double v);

}  // namespace mwf
