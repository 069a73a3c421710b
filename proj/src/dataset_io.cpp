#include "hclim/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "hclim/error.hpp"
#include "hclim/format.hpp"

namespace hclim {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void fail(std::string_view source, std::size_t line,
                       const std::string& what) {
  throw DomainError(std::string(source) + ":" + std::to_string(line) + ": " +
                    what);
}

}  // namespace

Dataset read_dataset(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<std::string> ids;
  std::vector<std::int64_t> counts;
  std::vector<double> offsets;
  std::set<std::string, std::less<>> seen;

  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto fields = split_fields(text);
    if (!have_header) {
      if (fields.size() != 3 || fields[0] != "cluster_id" || fields[1] != "y" ||
          fields[2] != "n") {
        fail(source, line_no, "expected header 'cluster_id,y,n'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != 3) {
      fail(source, line_no,
           "expected 3 fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) fail(source, line_no, "empty cluster_id");
    if (seen.contains(fields[0])) {
      fail(source, line_no,
           "duplicate cluster_id '" + std::string(fields[0]) + "'");
    }

    std::int64_t y = 0;
    const auto yf = fields[1];
    const auto [yp, yec] = std::from_chars(yf.data(), yf.data() + yf.size(), y);
    if (yec != std::errc() || yp != yf.data() + yf.size() || y < 0) {
      fail(source, line_no,
           "y must be a non-negative integer, got '" + std::string(yf) + "'");
    }

    const std::string nf(fields[2]);
    char* end = nullptr;
    const double n = std::strtod(nf.c_str(), &end);
    if (nf.empty() || end != nf.c_str() + nf.size() || !std::isfinite(n) ||
        n <= 0.0) {
      fail(source, line_no, "n must be a positive number, got '" + nf + "'");
    }

    seen.emplace(fields[0]);
    ids.emplace_back(fields[0]);
    counts.push_back(y);
    offsets.push_back(n);
  }
  if (!have_header) fail(source, line_no, "missing header 'cluster_id,y,n'");
  if (counts.empty()) fail(source, line_no, "no data rows");
  return {std::move(ids), HistoricalData(std::move(counts), std::move(offsets))};
}

Dataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_dataset(in, path);
}

void write_dataset(std::ostream& out, const std::vector<std::string>& ids,
                   const HistoricalData& data) {
  out << "cluster_id,y,n\n";
  const auto y = data.counts();
  const auto n = data.offsets();
  for (std::size_t h = 0; h < data.size(); ++h) {
    out << ids.at(h) << ',' << y[h] << ',' << format_sig(n[h]) << '\n';
  }
}

ConfigMap read_config(std::istream& in) {
  ConfigMap out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#' || text.front() == ';') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw DomainError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const auto key = trim(text.substr(0, eq));
    if (key.empty()) {
      throw DomainError("config line " + std::to_string(line_no) +
                        ": empty key");
    }
    out.insert_or_assign(std::string(key), std::string(trim(text.substr(eq + 1))));
  }
  return out;
}

ConfigMap read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_config(in);
}

}  // namespace hclim
