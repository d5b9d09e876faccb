#include "cdf2pdf/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cdf2pdf/errors.hpp"

namespace cdf2pdf {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw DataError("write failure: " + path.string());
}

} // namespace

void write_dataset_csv(const Dataset& data,
                       const std::filesystem::path& path) {
  data.validate();
  auto out = open_out(path);
  for (std::size_t i = 0; i < data.rows; ++i) {
    for (std::size_t j = 0; j < data.cols; ++j) {
      if (j) out << ',';
      out << format_double(data.at(i, j));
    }
    out << '\n';
  }
  finish(out, path);
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset: " + path.string());
  Dataset data;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      const auto res =
          std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
        throw DataError("bad number '" + cell + "' in " + path.string() +
                        " row " + std::to_string(row + 1));
      data.points.push_back(v);
      ++col;
    }
    if (row == 0)
      data.cols = col;
    else if (col != data.cols)
      throw DataError("ragged row " + std::to_string(row + 1) + " in " +
                      path.string());
    ++row;
  }
  data.rows = row;
  data.validate();
  return data;
}

void write_targets_csv(const TargetSet& targets,
                       const std::filesystem::path& path) {
  auto out = open_out(path);
  for (std::size_t j = 0; j < targets.dim(); ++j)
    out << "x_" << (j + 1) << ',';
  out << "g_hat\n";
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::size_t j = 0; j < targets.dim(); ++j)
      out << format_double(targets.points.at(i, j)) << ',';
    out << format_double(targets.values[i]) << '\n';
  }
  finish(out, path);
}

void write_loss_csv(const std::vector<double>& trace,
                    const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "epoch,loss\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << (i + 1) << ',' << format_double(trace[i]) << '\n';
  finish(out, path);
}

void write_table_csv(const std::vector<std::string>& headers,
                     const std::vector<std::vector<double>>& columns,
                     const std::filesystem::path& path) {
  if (headers.size() != columns.size())
    throw DataError("table header/column count mismatch");
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != n) throw DataError("table columns have unequal lengths");

  auto out = open_out(path);
  for (std::size_t j = 0; j < headers.size(); ++j) {
    if (j) out << ',';
    out << headers[j];
  }
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) out << ',';
      out << format_double(columns[j][i]);
    }
    out << '\n';
  }
  finish(out, path);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

} // namespace cdf2pdf
