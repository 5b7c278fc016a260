#include "survkit/csv.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace survkit {

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw invariant_error("cannot write to " + tmp.string());
    out << content;
    if (!out)
      throw invariant_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec)
    throw invariant_error("rename failed for " + path + ": " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw invariant_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ','))
    fields.push_back(field);
  if (!line.empty() && line.back() == ',')
    fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, const std::string& context) {
  double value;
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin < end && (*begin == ' ' || *begin == '\t'))
    ++begin;
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{})
    throw invariant_error("malformed number '" + text + "' in " + context);
  return value;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  return line;
}

} // namespace

SurvivalDataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw invariant_error("cannot open " + path);

  std::string line;
  if (!std::getline(in, line))
    throw invariant_error("empty dataset file " + path);
  const auto header = split_csv_line(strip_cr(line));
  if (header.size() < 3)
    throw invariant_error("dataset header needs features, time, event");
  if (header[header.size() - 2] != "time" || header.back() != "event")
    throw invariant_error("dataset header must end with time,event");
  const std::size_t p = header.size() - 2;

  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty())
      continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw invariant_error("row " + std::to_string(lineno) +
                            ": wrong field count in " + path);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields)
      row.push_back(parse_double(f, path + ":" + std::to_string(lineno)));
    rows.push_back(std::move(row));
  }

  SurvivalDataset data;
  const auto n = static_cast<Eigen::Index>(rows.size());
  data.features.resize(n, static_cast<Eigen::Index>(p));
  data.times.resize(n);
  data.events.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j)
      data.features(i, static_cast<Eigen::Index>(j)) = rows[i][j];
    data.times(i) = rows[i][p];
    data.events(i) = rows[i][p + 1];
  }
  data.feature_names.assign(header.begin(), header.begin() + p);
  data.validate();
  return data;
}

void write_dataset_csv(const SurvivalDataset& dataset,
                       const std::string& path) {
  dataset.validate();
  std::ostringstream out;
  const auto p = dataset.num_features();
  for (Eigen::Index j = 0; j < p; ++j) {
    out << (dataset.feature_names.empty()
                ? "x" + std::to_string(j + 1)
                : dataset.feature_names[static_cast<std::size_t>(j)]);
    out << ',';
  }
  out << "time,event\n";
  for (Eigen::Index i = 0; i < dataset.num_individuals(); ++i) {
    for (Eigen::Index j = 0; j < p; ++j)
      out << format_double(dataset.features(i, j)) << ',';
    out << format_double(dataset.times(i)) << ','
        << (dataset.events(i) == 1.0 ? '1' : '0') << '\n';
  }
  write_file_atomic(path, out.str());
}

PredictionMatrix read_prediction_csv(const std::string& path,
                                     FunctionKind kind, double gamma) {
  std::ifstream in(path);
  if (!in)
    throw invariant_error("cannot open " + path);

  std::string line;
  if (!std::getline(in, line))
    throw invariant_error("empty prediction file " + path);
  const auto time_fields = split_csv_line(strip_cr(line));

  PredictionMatrix pred;
  pred.kind = kind;
  pred.grid.gamma = gamma;
  pred.grid.times.resize(static_cast<Eigen::Index>(time_fields.size()));
  for (std::size_t j = 0; j < time_fields.size(); ++j)
    pred.grid.times(static_cast<Eigen::Index>(j)) =
        parse_double(time_fields[j], path + " (times row)");

  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty())
      continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != time_fields.size())
      throw invariant_error("row " + std::to_string(lineno) +
                            ": wrong field count in " + path);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields)
      row.push_back(parse_double(f, path + ":" + std::to_string(lineno)));
    rows.push_back(std::move(row));
  }

  pred.rows.resize(static_cast<Eigen::Index>(rows.size()),
                   pred.grid.times.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      pred.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
  pred.validate();
  return pred;
}

void write_prediction_csv(const PredictionMatrix& pred,
                          const std::string& path) {
  std::ostringstream out;
  for (Eigen::Index j = 0; j < pred.grid.times.size(); ++j)
    out << (j ? "," : "") << format_double(pred.grid.times(j));
  out << '\n';
  for (Eigen::Index i = 0; i < pred.rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < pred.rows.cols(); ++j)
      out << (j ? "," : "") << format_double(pred.rows(i, j));
    out << '\n';
  }
  write_file_atomic(path, out.str());
}

void write_matrix_csv(const Matrix& matrix, const std::string& path) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j)
      out << (j ? "," : "") << format_double(matrix(i, j));
    out << '\n';
  }
  write_file_atomic(path, out.str());
}

} // namespace survkit
