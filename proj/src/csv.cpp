#include "manifit/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "manifit/errors.hpp"

namespace manifit {

namespace {

std::string_view
trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view>
split_fields(std::string_view line)
{
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return fields;
}

} // namespace

PointCloud
read_points_csv(std::istream& in)
{
  std::string line;
  std::size_t row = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!trim(line).empty()) {
      break;
    }
  }
  if (trim(line).empty()) {
    throw ParseError("missing header row", std::max<std::size_t>(row, 1), 0);
  }
  const auto header = split_fields(line);
  dim = header.size();
  for (std::size_t k = 0; k < dim; ++k) {
    if (header[k] != "x" + std::to_string(k)) {
      throw ParseError("expected header field 'x" + std::to_string(k) + "', found '" +
                         std::string(header[k]) + "'",
                       row,
                       k + 1);
    }
  }

  std::vector<double> values;
  std::size_t points = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) {
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != dim) {
      throw ParseError("expected " + std::to_string(dim) + " columns, found " +
                         std::to_string(fields.size()),
                       row,
                       std::min(fields.size(), dim) + 1);
    }
    for (std::size_t k = 0; k < dim; ++k) {
      const auto f = fields[k];
      double v = 0.0;
      const auto* first = f.data();
      const auto* last = f.data() + f.size();
      if (!f.empty() && *first == '+') {
        ++first;
      }
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (f.empty() || ec != std::errc{} || ptr != last) {
        throw ParseError("cannot parse '" + std::string(f) + "' as a number", row, k + 1);
      }
      if (!std::isfinite(v)) {
        throw ParseError("non-finite value '" + std::string(f) + "'", row, k + 1);
      }
      values.push_back(v);
    }
    ++points;
  }
  if (points == 0) {
    return PointCloud::empty(static_cast<Index>(dim));
  }
  Matrix coords = Eigen::Map<const Matrix>(values.data(),
                                           static_cast<Index>(dim),
                                           static_cast<Index>(points));
  return PointCloud(std::move(coords));
}

PointCloud
read_points_csv(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path.string() + "'", 0, 0);
  }
  return read_points_csv(in);
}

std::string
format_double(double v)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) {
    throw InvalidInput("cannot format value");
  }
  return std::string(buf, ptr);
}

void
write_points_csv(std::ostream& out, const PointCloud& cloud)
{
  for (Index k = 0; k < cloud.dim(); ++k) {
    out << (k ? "," : "") << 'x' << k;
  }
  out << '\n';
  for (Index i = 0; i < cloud.size(); ++i) {
    for (Index k = 0; k < cloud.dim(); ++k) {
      out << (k ? "," : "") << format_double(cloud.coords()(k, i));
    }
    out << '\n';
  }
}

void
write_points_csv(const std::filesystem::path& path, const PointCloud& cloud)
{
  std::ofstream out(path);
  if (!out) {
    throw InvalidInput("cannot open '" + path.string() + "' for writing");
  }
  write_points_csv(out, cloud);
}

} // namespace manifit
