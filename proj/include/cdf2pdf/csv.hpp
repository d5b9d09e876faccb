#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cdf2pdf/distributions.hpp"
#include "cdf2pdf/targets.hpp"

namespace cdf2pdf {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);
Dataset read_dataset_csv(const std::filesystem::path& path);

/// Header x_1,..,x_d,g_hat then one row per target.
void write_targets_csv(const TargetSet& targets,
                       const std::filesystem::path& path);

/// Header epoch,loss; epochs are 1-based.
void write_loss_csv(const std::vector<double>& trace,
                    const std::filesystem::path& path);

/// Arbitrary named-column table, all columns the same length.
void write_table_csv(const std::vector<std::string>& headers,
                     const std::vector<std::vector<double>>& columns,
                     const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& text);

} // namespace cdf2pdf
