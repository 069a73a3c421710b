#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hclim/coverage.hpp"
#include "hclim/data.hpp"

namespace hclim {

/// Clustered counts read from CSV with header `cluster_id,y,n`.
struct Dataset {
  std::vector<std::string> ids;
  HistoricalData data;
};

/// Validates the header, integral non-negative y, positive n and unique ids;
/// DomainError messages name the offending line.
Dataset read_dataset(std::istream& in, std::string_view source = "<input>");
/// IoError when the file cannot be opened.
Dataset read_dataset_file(const std::string& path);

void write_dataset(std::ostream& out, const std::vector<std::string>& ids,
                   const HistoricalData& data);

using ConfigMap = std::map<std::string, std::string, std::less<>>;

/// Flat `key = value` text; blank lines and lines starting with '#' or ';'
/// are ignored.
ConfigMap read_config(std::istream& in);
ConfigMap read_config_file(const std::string& path);

/// Expands a grid description into cells (cartesian product over the
/// comma-separated lists in generator, method, offset, H, lambda and phi).
///
///   generator = qp,nb          method = calib-qp,c-chart
///   offset    = 3 | uniform:0.5:4
///   H = 5,10    lambda = 5,20    phi = 1.001,3
///   alpha, sides (two-sided|upper), k, n_star, kappa, S, B, tolerance,
///   variant, seed: single values
std::vector<SimCell> grid_from_config(const ConfigMap& config);

}  // namespace hclim
