#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "hclim/error.hpp"
#include "hclim/io.hpp"

namespace hclim {
namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    std::string item = text.substr(start, comma - start);
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
    throw DomainError("config '" + key + "': not a number: '" + text + "'");
  }
  return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  const double v = parse_double(key, text);
  if (v < 0.0 || v != std::floor(v)) {
    throw DomainError("config '" + key + "': expected a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

const std::string* find(const ConfigMap& config, std::string_view key) {
  const auto it = config.find(key);
  return it == config.end() ? nullptr : &it->second;
}

std::vector<std::string> list_or(const ConfigMap& config, std::string_view key,
                                 std::string fallback) {
  const auto* v = find(config, key);
  auto items = split_list(v ? *v : fallback);
  if (items.empty()) {
    throw DomainError("config '" + std::string(key) + "' is empty");
  }
  return items;
}

OffsetRule parse_offset(const std::string& text) {
  if (text.rfind("uniform:", 0) == 0) {
    const auto rest = text.substr(8);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) {
      throw DomainError("offset rule must be 'uniform:lo:hi'");
    }
    return OffsetRule::uniform(parse_double("offset", rest.substr(0, colon)),
                               parse_double("offset", rest.substr(colon + 1)));
  }
  return OffsetRule::constant(parse_double("offset", text));
}

Generator parse_generator(const std::string& text) {
  if (text == "qp") return Generator::QuasiPoisson;
  if (text == "nb") return Generator::NegBinomial;
  throw DomainError("unknown generator '" + text + "' (expected qp or nb)");
}

}  // namespace

std::vector<SimCell> grid_from_config(const ConfigMap& config) {
  static const std::vector<std::string> known = {
      "generator", "method", "offset", "H",     "lambda",    "phi",
      "kappa",     "n_star", "alpha",  "sides", "k",         "S",
      "B",         "tolerance", "variant", "seed"};
  for (const auto& [key, value] : config) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw DomainError("unknown grid key '" + key + "'");
    }
  }

  SimCell base;
  if (const auto* v = find(config, "kappa")) base.kappa = parse_double("kappa", *v);
  if (const auto* v = find(config, "n_star")) base.n_star = parse_double("n_star", *v);
  if (const auto* v = find(config, "alpha")) base.alpha = parse_double("alpha", *v);
  if (const auto* v = find(config, "k")) base.k = parse_double("k", *v);
  if (const auto* v = find(config, "S")) base.replicates = parse_count("S", *v);
  if (const auto* v = find(config, "B")) base.bootstrap_samples = parse_count("B", *v);
  if (const auto* v = find(config, "tolerance")) {
    base.tolerance = parse_double("tolerance", *v);
  }
  if (const auto* v = find(config, "seed")) {
    base.seed = static_cast<std::uint64_t>(std::stoull(*v));
  }
  if (const auto* v = find(config, "sides")) {
    if (*v == "two-sided") {
      base.sidedness = Sidedness::TwoSided;
    } else if (*v == "upper") {
      base.sidedness = Sidedness::UpperOnly;
    } else {
      throw DomainError("sides must be 'two-sided' or 'upper'");
    }
  }
  if (const auto* v = find(config, "variant")) {
    const auto variant = parse_variant(*v);
    if (!variant) throw DomainError("unknown variant '" + *v + "'");
    base.variant = *variant;
  }

  std::vector<SimCell> cells;
  for (const auto& g : list_or(config, "generator", "qp")) {
    for (const auto& m : list_or(config, "method", "calib-qp")) {
      const auto method = parse_method(m);
      if (!method) throw DomainError("unknown method '" + m + "'");
      for (const auto& o : list_or(config, "offset", "3")) {
        for (const auto& h : list_or(config, "H", "10")) {
          for (const auto& l : list_or(config, "lambda", "5")) {
            for (const auto& p : list_or(config, "phi", "3")) {
              SimCell cell = base;
              cell.generator = parse_generator(g);
              cell.method = *method;
              cell.offsets = parse_offset(o);
              cell.clusters = parse_count("H", h);
              cell.lambda = parse_double("lambda", l);
              cell.phi = parse_double("phi", p);
              cells.push_back(cell);
            }
          }
        }
      }
    }
  }
  return cells;
}

}  // namespace hclim
