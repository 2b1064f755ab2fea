#include "ngca/sample_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "ngca/error.hpp"

namespace ngca {

namespace {

static_assert(std::endian::native == std::endian::little,
              "sample files are written in native little-endian order");

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) fail(ErrorCode::IoError, "truncated sample file");
  return v;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  std::ofstream os(path, std::ios::out | std::ios::trunc | mode);
  if (!os) fail(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  return os;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void write_samples_binary(const SampleSet& s, const std::filesystem::path& path) {
  auto os = open_out(path, std::ios::binary);
  os.write("NGCA", 4);
  put<std::uint32_t>(os, kSampleFormatVersion);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(s.N()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(s.ambient_dim()));
  put<std::uint64_t>(os, s.seed());
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = s.data();
  os.write(reinterpret_cast<const char*>(rows.data()),
           static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(rows.size())));
  if (!os) fail(ErrorCode::IoError, "write failed for " + path.string());
}

SampleSet read_samples_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorCode::IoError, "cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "NGCA", 4) != 0) fail(ErrorCode::IoError, "bad magic in " + path.string());
  const auto version = get<std::uint32_t>(is);
  if (version != kSampleFormatVersion)
    fail(ErrorCode::IoError, "unsupported sample format version " + std::to_string(version));
  const auto N = get<std::uint64_t>(is);
  const auto n = get<std::uint32_t>(is);
  const auto seed = get<std::uint64_t>(is);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(
      static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(n));
  is.read(reinterpret_cast<char*>(rows.data()),
          static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(rows.size())));
  if (!is) fail(ErrorCode::IoError, "truncated sample data in " + path.string());
  return SampleSet(Eigen::MatrixXd(rows), seed, {lineage::External{path.string()}});
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::filesystem::path& path,
                      const std::string& header) {
  auto os = open_out(path);
  if (!header.empty()) os << header << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
  if (!os) fail(ErrorCode::IoError, "write failed for " + path.string());
}

void write_samples_csv(const SampleSet& s, const std::filesystem::path& path, bool header) {
  std::string head;
  if (header)
    for (Eigen::Index j = 0; j < s.ambient_dim(); ++j) head += (j ? ",x" : "x") + std::to_string(j);
  write_matrix_csv(s.data(), path, head);
}

SampleSet ingest_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(is, line)) {
    ++line_no;
    if (has_header && line_no == 1) continue;
    if (trim(line).empty()) continue;
    std::size_t col = 0;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      const std::string_view cell = trim(rest.substr(0, comma));
      ++col;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
        throw ParseError(line_no, col, "non-numeric cell '" + std::string(cell) + "'");
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (rows == 0) cols = col;
    else if (col != cols)
      throw ParseError(line_no, col, "expected " + std::to_string(cols) + " columns");
    ++rows;
  }
  if (rows == 0) fail(ErrorCode::EmptyInput, "no data rows in " + path.string());
  Eigen::MatrixXd data(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * cols + j];
  return SampleSet(std::move(data), 0, {lineage::External{path.string()}});
}

}  // namespace ngca
