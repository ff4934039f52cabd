#include "eqtest/io/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "eqtest/core/errors.hpp"

namespace eqt::io {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Column "x12" -> ('x', 12).
bool parse_column(std::string_view name, char& prefix, std::size_t& index) {
  if (name.size() < 2 || (name[0] != 'x' && name[0] != 'y')) return false;
  prefix = name[0];
  const char* begin = name.data() + 1;
  const char* end = name.data() + name.size();
  auto [ptr, ec] = std::from_chars(begin, end, index);
  return ec == std::errc() && ptr == end;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_short(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

}  // namespace

Dataset parse_dataset_csv(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    while (pos < text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      line = text.substr(pos, nl - pos);
      pos = nl + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) return true;
    }
    return false;
  };

  std::string_view line;
  if (!next_line(line)) throw FormatError("empty CSV file", 0);
  const std::vector<std::string_view> header = split_fields(line);
  std::map<std::size_t, std::size_t> x_cols;  // coordinate -> column
  std::map<std::size_t, std::size_t> y_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    char prefix = 0;
    std::size_t index = 0;
    if (!parse_column(header[c], prefix, index))
      throw FormatError("unexpected column '" + std::string(header[c]) + "', expected x<k> or y<k>", line_no);
    auto& cols = prefix == 'x' ? x_cols : y_cols;
    if (!cols.emplace(index, c).second)
      throw FormatError("duplicate column '" + std::string(header[c]) + "'", line_no);
  }
  auto check_contiguous = [&](const std::map<std::size_t, std::size_t>& cols, char prefix) {
    if (cols.empty()) throw FormatError(std::string("no ") + prefix + " columns", line_no);
    if (cols.rbegin()->first != cols.size() - 1)
      throw FormatError(std::string(prefix == 'x' ? "input" : "output") + " columns must be numbered from 0 without gaps",
                        line_no);
  };
  check_contiguous(x_cols, 'x');
  check_contiguous(y_cols, 'y');

  const std::size_t dx = x_cols.size();
  const std::size_t dy = y_cols.size();
  std::vector<double> inputs;
  std::vector<double> outputs;
  std::vector<double> row(header.size());
  while (next_line(line)) {
    const std::vector<std::string_view> fields = split_fields(line);
    if (fields.size() != header.size())
      throw FormatError("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()),
                        line_no);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      std::string_view f = fields[c];
      if (!f.empty() && f.front() == '+') f.remove_prefix(1);
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size())
        throw FormatError("cannot parse '" + std::string(fields[c]) + "' as a number in column " +
                              std::string(header[c]),
                          line_no);
      if (!std::isfinite(value))
        throw FormatError("non-finite value in column " + std::string(header[c]), line_no);
      row[c] = value;
    }
    for (const auto& [k, c] : x_cols) inputs.push_back(row[c]);
    for (const auto& [k, c] : y_cols) outputs.push_back(row[c]);
  }
  const std::size_t n = inputs.size() / dx;
  if (n < 2) throw FormatError("a dataset needs at least 2 rows, found " + std::to_string(n), line_no);
  return Dataset(dx, dy, std::move(inputs), std::move(outputs));
}

Dataset read_dataset_csv(const std::filesystem::path& path) { return parse_dataset_csv(read_text(path)); }

std::string format_dataset_csv(const Dataset& data) {
  std::string out;
  for (std::size_t k = 0; k < data.input_dim(); ++k) out += (k ? ",x" : "x") + std::to_string(k);
  for (std::size_t k = 0; k < data.output_dim(); ++k) out += ",y" + std::to_string(k);
  out += '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    bool first = true;
    for (double v : data.input(i)) {
      if (!first) out += ',';
      first = false;
      out += format_double(v);
    }
    for (double v : data.output(i)) out += ',' + format_double(v);
    out += '\n';
  }
  return out;
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data) {
  write_text(path, format_dataset_csv(data));
}

std::string rejection_table_csv(const RejectionTable& table) {
  std::ostringstream os;
  os << "hypothesis,n,m,sigma,L,t,q,rejections,replicates,proportion,se\n";
  for (const RejectionCell& c : table.cells) {
    os << c.hypothesis << ',' << c.n << ',' << c.m << ',' << format_short(c.sigma) << ','
       << format_short(c.lipschitz) << ',' << format_short(c.t) << ',' << format_short(c.q) << ',' << c.rejections
       << ',' << c.replicates << ',' << format_short(c.proportion) << ',' << format_short(c.se) << '\n';
  }
  return os.str();
}

std::string plot_data_csv(const RejectionTable& table) {
  std::ostringstream os;
  os << "series,n,proportion,se\n";
  const bool avt = table.spec.test == TestKind::avt;
  for (const RejectionCell& c : table.cells) {
    std::string series = c.hypothesis + " m=" + (table.spec.m_grid.empty() ? std::string("n") : std::to_string(c.m)) +
                         " sigma=" + format_short(c.sigma);
    if (avt)
      series += " L=" + format_short(c.lipschitz) + " t=" + format_short(c.t);
    else
      series += " q=" + format_short(c.q);
    os << '"' << series << "\"," << c.n << ',' << format_short(c.proportion) << ',' << format_short(c.se) << '\n';
  }
  return os.str();
}

std::string fig2_rows_csv(const Fig2Result& result) {
  std::ostringstream os;
  os << "target,n,replicate,mse_plain,mse_symmetrised,excluded_points\n";
  for (const Fig2Row& r : result.rows)
    os << r.target << ',' << r.n << ',' << r.replicate << ',' << format_double(r.mse_plain) << ','
       << format_double(r.mse_symmetrised) << ',' << r.excluded_points << '\n';
  return os.str();
}

std::string fig2_summary_csv(const Fig2Result& result) {
  std::ostringstream os;
  os << "target,n,mean_plain,se_plain,mean_symmetrised,se_symmetrised,mean_difference,se_difference,excluded_points\n";
  for (const Fig2Summary& s : result.summary)
    os << s.target << ',' << s.n << ',' << format_short(s.mean_plain) << ',' << format_short(s.se_plain) << ','
       << format_short(s.mean_symmetrised) << ',' << format_short(s.se_symmetrised) << ','
       << format_short(s.mean_difference) << ',' << format_short(s.se_difference) << ',' << s.excluded_points
       << '\n';
  return os.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw InputError("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace eqt::io
