#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gazeaudit {

// Median with the even-size convention: mean of the two central order statistics.
double median(std::vector<double> values);

// Type-7 quantile (linear interpolation between order statistics), p in [0,1].
double quantile(std::vector<double> values, double p);

double mean(const std::vector<double>& values);
double sample_sd(const std::vector<double>& values);  // n-1 denominator, 0 for n<2

// Stable text form for doubles used in CSV/JSON artifacts (byte-reproducible runs).
std::string format_double(double v);

std::string read_text_file(const std::string& path);

// Writes to <path>.tmp then renames, so readers never observe partial artifacts.
void write_file_atomic(const std::string& path, const std::string& content);

std::string path_join(const std::string& dir, const std::string& name);

}  // namespace gazeaudit
