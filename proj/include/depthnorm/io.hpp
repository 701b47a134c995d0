#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "depthnorm/matrix.hpp"

namespace depthnorm {

enum class TableFormat { csv, tsv };

char delimiter(TableFormat format) noexcept;

// ".tsv" and ".txt" select tab-separated; anything else is comma-separated.
TableFormat format_from_extension(const std::filesystem::path& path);

// Reads a rectangular numeric table, one feature per row. With a header the
// first row supplies sample ids, otherwise ids are "1".."n". Missing or
// non-numeric cells are rejected (ParseError with row and column), ragged rows
// are rejected (ParseError naming the row), fewer than two rows or columns
// raise DimensionError. Row numbers in messages are 1-based file lines.
ExpressionMatrix load_matrix(const std::filesystem::path& path, TableFormat format,
                             bool has_header);
ExpressionMatrix parse_matrix(std::istream& in, TableFormat format, bool has_header,
                              std::string_view source = "<stream>");

// Writes the same schema load_matrix reads: header of sample ids then one row
// per feature. Values use the shortest representation that round-trips.
void write_matrix(std::ostream& out, const ExpressionMatrix& m, TableFormat format);
void write_matrix(const std::filesystem::path& path, const ExpressionMatrix& m,
                  TableFormat format);

// One integer label per non-empty line.
std::vector<int> load_labels(const std::filesystem::path& path);
std::vector<int> parse_labels(std::istream& in, std::string_view source = "<stream>");

// Shortest round-trip decimal form of a double.
std::string format_double(double value);

// Opens `path` for writing, creating parent directories. Throws Error on
// failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace depthnorm
