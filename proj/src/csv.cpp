#include "powershap/csv.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <system_error>

#include "powershap/errors.hpp"

namespace powershap::csv {

namespace {

struct Record {
  std::size_t line;
  std::vector<std::string> fields;
};

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::vector<Record> split_records(const std::string& text) {
  std::vector<Record> records;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();

  while (i < n) {
    Record record{line, {}};
    std::string field;
    bool quoted = false;
    bool after_quote = false;
    bool done = false;
    while (!done) {
      if (i == n) {
        if (quoted) parse_error(record.line, "unterminated quoted field");
        record.fields.push_back(std::move(field));
        break;
      }
      const char c = text[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < n && text[i + 1] == '"') {
            field += '"';
            i += 2;
          } else {
            quoted = false;
            after_quote = true;
            ++i;
          }
        } else {
          if (c == '\n') ++line;
          field += c;
          ++i;
        }
        continue;
      }
      switch (c) {
        case ',':
          record.fields.push_back(std::move(field));
          field.clear();
          after_quote = false;
          ++i;
          break;
        case '\r':
          ++i;
          break;
        case '\n':
          record.fields.push_back(std::move(field));
          ++line;
          ++i;
          done = true;
          break;
        case '"':
          if (!field.empty() || after_quote) parse_error(line, "unexpected quote inside a field");
          quoted = true;
          ++i;
          break;
        default:
          if (after_quote && c != ' ') parse_error(line, "text after closing quote");
          field += c;
          ++i;
      }
    }
    // Blank lines carry no record.
    if (!(record.fields.size() == 1 && record.fields[0].empty())) {
      records.push_back(std::move(record));
    }
  }
  return records;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view raw, std::size_t line, const std::string& column) {
  auto text = trim(raw);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec == std::errc::invalid_argument || end != text.data() + text.size()) {
    parse_error(line, "column '" + column + "': '" + std::string(raw) + "' is not a number");
  }
  if (ec == std::errc::result_out_of_range) {
    parse_error(line, "column '" + column + "': '" + std::string(raw) + "' is out of range");
  }
  return value;
}

}  // namespace

Table parse(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  auto records = split_records(text);
  if (records.empty()) parse_error(1, "missing header row");

  Table table;
  for (const auto& name : records.front().fields) table.header.emplace_back(trim(name));
  const std::size_t width = table.header.size();
  table.rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& record = records[r];
    if (record.fields.size() != width) {
      parse_error(record.line, "expected " + std::to_string(width) + " fields, found " +
                                   std::to_string(record.fields.size()));
    }
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) {
      row[c] = parse_number(record.fields[c], record.line, table.header[c]);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path.string() + "'");
  return parse(in);
}

Dataset to_dataset(const Table& table, const std::string& target_column, Task task) {
  std::size_t target = table.header.size();
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c] == target_column) {
      if (target != table.header.size()) {
        throw Error(ErrorCode::DuplicateFeatureName,
                    "target column '" + target_column + "' appears more than once");
      }
      target = c;
    }
  }
  if (target == table.header.size()) {
    throw Error(ErrorCode::InvalidConfig, "target column '" + target_column + "' not in header");
  }

  const std::size_t n = table.rows.size();
  const std::size_t m = table.header.size() - 1;
  Matrix features(n, m);
  std::vector<double> y(n);
  std::vector<std::string> names;
  names.reserve(m);
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c != target) names.push_back(table.header[c]);
  }
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t out = 0;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (c == target) {
        y[r] = table.rows[r][c];
      } else {
        features(r, out++) = table.rows[r][c];
      }
    }
  }
  return validate_dataset(std::move(features), std::move(y), std::move(names), task);
}

namespace {

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void write_number(std::ostream& out, double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, end - buf);
}

}  // namespace

void write_dataset(std::ostream& out, const Dataset& data, const std::string& target_name) {
  for (const auto& name : data.feature_names()) out << quote_if_needed(name) << ',';
  out << quote_if_needed(target_name) << '\n';
  for (std::size_t r = 0; r < data.n_samples(); ++r) {
    for (const double v : data.features().row(r)) {
      write_number(out, v);
      out << ',';
    }
    write_number(out, data.target()[r]);
    out << '\n';
  }
}

}  // namespace powershap::csv
