#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "powershap/domain.hpp"

namespace powershap::csv {

/// Header plus numeric body. Quoted fields follow RFC 4180: double quotes
/// around a field, "" for a literal quote, embedded commas and newlines.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Throws ParseError with the 1-based line number of the offending record.
Table parse(std::istream& in);
Table read_file(const std::filesystem::path& path);

/// Splits off `target_column` and validates the rest as features.
Dataset to_dataset(const Table& table, const std::string& target_column, Task task);

/// Writes header and rows with round-trip precision, target last.
void write_dataset(std::ostream& out, const Dataset& data, const std::string& target_name = "y");

}  // namespace powershap::csv
