#pragma once

#include "metdich/metric_space.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace metdich {

// Interchange text format:
//   N
//   label_0
//   ...
//   label_{N-1}
//   N lines of N space-separated decimal values
// Labels are single whitespace-free tokens.

struct LabeledMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> labels;
};

void write_matrix(std::ostream& out, const Eigen::MatrixXd& values, const std::vector<std::string>& labels);
LabeledMatrix read_matrix(std::istream& in);

void write_metric(std::ostream& out, const MetricSpace& space);
std::string to_text(const MetricSpace& space);
/// Parses and validates; throws MetricError or std::runtime_error on malformed input.
MetricSpace read_metric(std::istream& in);
MetricSpace parse_metric(const std::string& text);
MetricSpace load_metric(const std::filesystem::path& path);
void save_metric(const std::filesystem::path& path, const MetricSpace& space);

/// %.12g formatting used for every reported float.
std::string format_real(double v);

/// FNV-1a 64-bit, rendered as 16 hex digits.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex_digest(std::uint64_t h);
std::string digest(const MetricSpace& space);
std::string witness_hash(std::span<const Index> witness);

}  // namespace metdich
