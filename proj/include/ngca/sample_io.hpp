#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Dense>

#include "ngca/sample_set.hpp"

namespace ngca {

// Binary layout, all little-endian:
//   "NGCA" | version u32 | N u64 | n u32 | seed u64 | N·n f64 row-major
inline constexpr std::uint32_t kSampleFormatVersion = 1;

void write_samples_binary(const SampleSet& s, const std::filesystem::path& path);
SampleSet read_samples_binary(const std::filesystem::path& path);

// One row per sample, values printed with 17 significant digits.
void write_samples_csv(const SampleSet& s, const std::filesystem::path& path,
                       bool header = false);

// Rectangular numeric CSV → SampleSet with lineage external(<path>). Throws
// ParseError(row, col) on non-numeric cells or ragged rows (1-based,
// counting the header line when present).
SampleSet ingest_csv(const std::filesystem::path& path, bool has_header);

// Matrix as CSV with 17 significant digits, optional header line.
void write_matrix_csv(const Eigen::MatrixXd& m, const std::filesystem::path& path,
                      const std::string& header = {});

std::string format_double(double v);

}  // namespace ngca
