#include "otrates/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "otrates/error.hpp"

namespace otrates {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream stream(s);
  std::string token;
  while (stream >> token) out.push_back(token);
  return out;
}

}  // namespace

Config Config::parse_string(const std::string& text) {
  Config config;
  std::istringstream stream(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (config.values_.count(key))
      throw ConfigError("duplicate key '" + key + "'");
    config.values_[key] = value;
  }
  return config;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str());
}

bool Config::has(const std::string& key) const { return values_.count(key); }

std::string Config::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end())
    throw ConfigError("missing required key '" + key + "'");
  return it->second;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
  const std::string raw = get_string(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' is not a number: " + raw);
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long Config::get_int(const std::string& key) const {
  const std::string raw = get_string(key);
  try {
    std::size_t used = 0;
    const long long v = std::stoll(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' is not an integer: " + raw);
  }
}

long long Config::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key,
                              std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string raw = get_string(key);
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' is not a u64: " + raw);
  }
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& token : split_ws(get_string(key))) {
    try {
      out.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "' holds a non-number: " + token);
    }
  }
  if (out.empty()) throw ConfigError("key '" + key + "' is empty");
  return out;
}

std::vector<std::size_t> Config::get_sizes(const std::string& key) const {
  std::vector<std::size_t> out;
  for (const std::string& token : split_ws(get_string(key))) {
    try {
      out.push_back(std::stoull(token));
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "' holds a non-integer: " + token);
    }
  }
  if (out.empty()) throw ConfigError("key '" + key + "' is empty");
  return out;
}

void Config::reject_unknown_keys(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : values_)
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + key + "'");
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

DiscreteMeasure read_measure(const std::string& path) {
  const Config config = Config::parse_file(path);
  config.reject_unknown_keys({"dim", "points", "weights"});
  const auto dim = std::size_t(config.get_int("dim"));
  std::vector<double> coords = config.get_doubles("points");
  std::vector<double> weights = config.get_doubles("weights");
  return DiscreteMeasure::make_flat(dim, std::move(coords),
                                    std::move(weights));
}

void write_measure(const std::string& path, const DiscreteMeasure& measure) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write measure file '" + path + "'");
  out << "dim = " << measure.dim() << "\n";
  out << "points =";
  for (const double c : measure.coords()) out << ' ' << format_double(c);
  out << "\nweights =";
  for (const double w : measure.weights()) out << ' ' << format_double(w);
  out << "\n";
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write csv file '" + path + "'");
  out << "# otrates-csv-v1 " << table.schema << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << row[c];
    out << "\n";
  }
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open csv file '" + path + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# otrates-csv-v1 ", 0) != 0)
    throw ConfigError("missing csv schema header in '" + path + "'");
  table.schema = trim(line.substr(std::string("# otrates-csv-v1 ").size()));
  auto split_commas = [](const std::string& s) {
    std::vector<std::string> out;
    std::string token;
    std::istringstream stream(s);
    while (std::getline(stream, token, ',')) out.push_back(trim(token));
    return out;
  };
  if (!std::getline(in, line))
    throw ConfigError("missing csv column row in '" + path + "'");
  table.columns = split_commas(line);
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    table.rows.push_back(split_commas(line));
  }
  return table;
}

void write_loglog_svg(const std::string& path,
                      const std::vector<std::pair<double, double>>& points,
                      double fit_slope, double fit_intercept,
                      double guide_slope, const std::string& title) {
  if (points.empty()) throw ConfigError("no points to plot");
  double min_x = std::log10(points.front().first);
  double max_x = min_x, min_y = std::log10(points.front().second);
  double max_y = min_y;
  for (const auto& [x, y] : points) {
    min_x = std::min(min_x, std::log10(x));
    max_x = std::max(max_x, std::log10(x));
    min_y = std::min(min_y, std::log10(y));
    max_y = std::max(max_y, std::log10(y));
  }
  if (max_x == min_x) max_x = min_x + 1;
  if (max_y == min_y) max_y = min_y + 1;
  const double width = 480, height = 360, margin = 48;
  auto sx = [&](double lx) {
    return margin + (lx - min_x) / (max_x - min_x) * (width - 2 * margin);
  };
  auto sy = [&](double ly) {
    return height - margin -
           (ly - min_y) / (max_y - min_y) * (height - 2 * margin);
  };

  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write svg file '" + path + "'");
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << width / 2 << "' y='20' text-anchor='middle' "
      << "font-size='13'>" << title << "</text>\n";
  // axes
  out << "<line x1='" << margin << "' y1='" << height - margin << "' x2='"
      << width - margin << "' y2='" << height - margin
      << "' stroke='black'/>\n";
  out << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin
      << "' y2='" << height - margin << "' stroke='black'/>\n";

  auto line_for = [&](double slope, double intercept, const char* color) {
    const double ln10 = std::log(10.0);
    // y = intercept + slope * x in natural-log space
    const double y1 = (intercept + slope * min_x * ln10) / ln10;
    const double y2 = (intercept + slope * max_x * ln10) / ln10;
    out << "<line x1='" << sx(min_x) << "' y1='" << sy(y1) << "' x2='"
        << sx(max_x) << "' y2='" << sy(y2) << "' stroke='" << color
        << "' stroke-dasharray='4'/>\n";
  };
  line_for(fit_slope, fit_intercept, "crimson");
  {
    // guide line through the first point with the predicted slope
    const double ln10 = std::log(10.0);
    const double x0 = std::log(points.front().first);
    const double y0 = std::log(points.front().second);
    line_for(guide_slope, y0 - guide_slope * x0, "steelblue");
    (void)ln10;
  }
  for (const auto& [x, y] : points)
    out << "<circle cx='" << sx(std::log10(x)) << "' cy='"
        << sy(std::log10(y)) << "' r='3.5' fill='black'/>\n";
  out << "<text x='" << width - margin << "' y='" << height - margin + 28
      << "' text-anchor='end' font-size='11'>log10 n</text>\n";
  out << "</svg>\n";
}

}  // namespace otrates
