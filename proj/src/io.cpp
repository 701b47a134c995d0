#include "depthnorm/io.hpp"

#include <charconv>
#include <fstream>

#include "depthnorm/error.hpp"

namespace depthnorm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

std::string unquote(std::string_view cell) {
  if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') {
    cell = cell.substr(1, cell.size() - 2);
  }
  return std::string(cell);
}

}  // namespace

char delimiter(TableFormat format) noexcept { return format == TableFormat::tsv ? '\t' : ','; }

TableFormat format_from_extension(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".tsv" || ext == ".txt") ? TableFormat::tsv : TableFormat::csv;
}

ExpressionMatrix parse_matrix(std::istream& in, TableFormat format, bool has_header,
                              std::string_view source) {
  const char delim = delimiter(format);
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line, delim);
    if (has_header && ids.empty()) {
      for (const auto c : cells) ids.push_back(unquote(c));
      width = cells.size();
      continue;
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw ParseError(std::string(source) + ": ragged row at row " + std::to_string(line_no) +
                       " (" + std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(width) + ")");
    }
    std::vector<double> row(width);
    for (std::size_t j = 0; j < width; ++j) {
      const auto cell = cells[j];
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError(std::string(source) + ": non-numeric cell '" + std::string(cell) +
                         "' at row " + std::to_string(line_no) + ", column " +
                         std::to_string(j + 1));
      }
      row[j] = value;
    }
    rows.push_back(std::move(row));
  }

  if (width < 2) {
    throw DimensionError(std::string(source) + ": need at least 2 sample columns, found " +
                         std::to_string(width));
  }
  if (rows.size() < 2) {
    throw DimensionError(std::string(source) + ": need at least 2 feature rows, found " +
                         std::to_string(rows.size()));
  }

  std::vector<double> values(rows.size() * width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) values[j * rows.size() + i] = rows[i][j];
  }
  return ExpressionMatrix(rows.size(), width, std::move(values), std::move(ids));
}

ExpressionMatrix load_matrix(const std::filesystem::path& path, TableFormat format,
                             bool has_header) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return parse_matrix(in, format, has_header, path.string());
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_matrix(std::ostream& out, const ExpressionMatrix& m, TableFormat format) {
  const char delim = delimiter(format);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (j) out << delim;
    out << m.sample_ids()[j];
  }
  out << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << delim;
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void write_matrix(const std::filesystem::path& path, const ExpressionMatrix& m,
                  TableFormat format) {
  auto out = open_output(path);
  write_matrix(out, m, format);
}

std::vector<int> parse_labels(std::istream& in, std::string_view source) {
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cell = trim(line);
    if (cell.empty()) continue;
    int value = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
      throw ParseError(std::string(source) + ": invalid class label '" + std::string(cell) +
                       "' at row " + std::to_string(line_no));
    }
    labels.push_back(value);
  }
  return labels;
}

std::vector<int> load_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return parse_labels(in, path.string());
}

}  // namespace depthnorm
