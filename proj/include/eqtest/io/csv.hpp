#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "eqtest/core/dataset.hpp"
#include "eqtest/experiments/sweep.hpp"
#include "eqtest/synth/fig2.hpp"

namespace eqt::io {

/// Dataset CSV: a header naming input columns x0..x{d-1} and output columns
/// y0..y{dY-1}, then one comma-separated row per observation. Columns may
/// appear in any order. Errors are FormatError with the offending line.
Dataset parse_dataset_csv(std::string_view text);
Dataset read_dataset_csv(const std::filesystem::path& path);

/// Values are written with 17 significant digits, so reading back is exact.
std::string format_dataset_csv(const Dataset& data);
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);

std::string rejection_table_csv(const RejectionTable& table);
/// Long-format plot rows: series, n, proportion, se. One series per
/// combination of hypothesis and the non-n axes.
std::string plot_data_csv(const RejectionTable& table);
std::string fig2_rows_csv(const Fig2Result& result);
std::string fig2_summary_csv(const Fig2Result& result);

/// Writes `text` verbatim, creating parent directories.
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace eqt::io
