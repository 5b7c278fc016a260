#pragma once

#include "survkit/types.hpp"

#include <string>

namespace survkit {

// Dataset CSV: header row with p feature names followed by "time" and
// "event"; comma-separated, '.' decimal point.
SurvivalDataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const SurvivalDataset& dataset,
                       const std::string& path);

// PredictionMatrix CSV: first row the output times, one row per
// individual after that.
PredictionMatrix read_prediction_csv(const std::string& path,
                                     FunctionKind kind, double gamma = 1e-6);
void write_prediction_csv(const PredictionMatrix& pred,
                          const std::string& path);

// Plain matrix CSV without header (used by the subprocess adapter input).
void write_matrix_csv(const Matrix& matrix, const std::string& path);

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

// Atomic file write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

} // namespace survkit
