#include "dsmooth/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace dsmooth {
namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_line(const std::string& line, std::size_t row) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", row);
  fields.push_back(trim(cur));
  return fields;
}

bool parse_number(const std::string& text, double& out) {
  if (text.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(text, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == text.size() && std::isfinite(out);
}

bool is_index(std::string_view column) {
  return !column.empty() && std::all_of(column.begin(), column.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

struct Table {
  std::vector<std::string> header;  // empty if none
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

Table read_table(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    rows.push_back(split_line(line, line_no));
    lines.push_back(line_no);
  }
  if (rows.empty()) throw ParseError("empty CSV input");
  const std::size_t width = rows.front().size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width)
      throw ParseError("ragged row: expected " + std::to_string(width) + " fields, found " +
                           std::to_string(rows[r].size()),
                       lines[r]);
  }
  return {{}, std::move(rows), std::move(lines)};
}

std::size_t resolve(const Table& t, std::string_view column, bool has_header) {
  if (is_index(column)) {
    const std::size_t idx = std::stoul(std::string(column));
    if (idx < 1 || idx > t.rows.front().size())
      throw ParseError("column index " + std::string(column) + " out of range");
    return idx - 1;
  }
  if (!has_header) throw ParseError("column '" + std::string(column) + "' requested but file has no header");
  const std::string want = lower(std::string(column));
  for (std::size_t c = 0; c < t.rows.front().size(); ++c)
    if (lower(t.rows.front()[c]) == want) return c;
  throw ParseError("column '" + std::string(column) + "' not found in header", 1);
}

bool header_present(const Table& t, std::initializer_list<std::string_view> columns) {
  for (auto c : columns)
    if (!is_index(c)) return true;
  double dummy;
  for (auto c : columns) {
    const std::size_t idx = std::stoul(std::string(c));
    if (idx >= 1 && idx <= t.rows.front().size() && !parse_number(t.rows.front()[idx - 1], dummy)) return true;
  }
  return false;
}

double cell_value(const Table& t, std::size_t r, std::size_t c) {
  double v;
  if (!parse_number(t.rows[r][c], v))
    throw ParseError("non-numeric cell '" + t.rows[r][c] + "'", t.line_numbers[r], c + 1);
  return v;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

Dataset parse_csv(std::istream& in, std::string_view x_column, std::string_view u_column) {
  const Table t = read_table(in);
  const bool has_header = header_present(t, {x_column, u_column});
  const std::size_t cx = resolve(t, x_column, has_header);
  const std::size_t cu = resolve(t, u_column, has_header);
  std::ptrdiff_t label_col = -1;
  if (has_header) {
    for (std::size_t c = 0; c < t.rows.front().size(); ++c)
      if (lower(t.rows.front()[c]) == "label") label_col = static_cast<std::ptrdiff_t>(c);
  }
  Dataset d;
  for (std::size_t r = has_header ? 1 : 0; r < t.rows.size(); ++r) {
    d.x.push_back(cell_value(t, r, cx));
    d.u.push_back(cell_value(t, r, cu));
    d.labels.push_back(label_col >= 0 ? t.rows[r][label_col] : "row " + std::to_string(d.x.size()));
  }
  if (d.x.empty()) throw ParseError("CSV contains a header but no data rows");
  return d;
}

Dataset load_csv(const std::filesystem::path& path, std::string_view x_column, std::string_view u_column) {
  auto in = open(path);
  return parse_csv(in, x_column, u_column);
}

std::vector<double> load_column(const std::filesystem::path& path, std::string_view column) {
  auto in = open(path);
  const Table t = read_table(in);
  const bool has_header = header_present(t, {column});
  const std::size_t c = resolve(t, column, has_header);
  std::vector<double> out;
  for (std::size_t r = has_header ? 1 : 0; r < t.rows.size(); ++r) out.push_back(cell_value(t, r, c));
  if (out.empty()) throw ParseError("CSV contains a header but no data rows");
  return out;
}

void write_csv(std::ostream& out, const Dataset& data) {
  out << "label,X,U\n";
  std::ostringstream num;
  num.precision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::string label = data.labels[i];
    if (label.find_first_of(",\"") != std::string::npos) {
      std::string q = "\"";
      for (char c : label) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
      label = q + "\"";
    }
    num.str("");
    num << data.x[i] << ',' << data.u[i];
    out << label << ',' << num.str() << '\n';
  }
}

const Dataset& uefa_dataset() {
  static const Dataset data = [] {
    struct Row {
      const char* label;
      double x, u;
    };
    static constexpr Row rows[] = {
        // 2005-06
        {"Lyon-Real Madrid", 26, 20},
        {"Milan-Fenerbahce", 63, 18},
        {"Chelsea-Anderlecht", 19, 19},
        {"Club Brugge-Juventus", 66, 85},
        {"Fenerbhace-PSV", 40, 40},
        {"Internazionale-Rangers", 49, 49},
        {"Panathinaikos-Bremen", 8, 8},
        {"Ajax-Arsenal", 69, 71},
        {"Man. United-Benfica", 39, 39},
        {"Real Madrid-Rosenborg", 82, 48},
        {"Villareal-Benfica", 72, 72},
        {"Juventus-Bayern", 66, 62},
        {"Club Brugge-Rapid", 25, 9},
        {"Olympiacos-Lyon", 41, 3},
        {"Internazionale-Porto", 16, 75},
        {"Shalke-PSV", 18, 18},
        {"Barcelona-Bremen", 22, 14},
        {"Milan-Shalke", 42, 42},
        {"Rapid-Juventus", 36, 52},
        // 2004-05
        {"Internazionale-Bremen", 34, 34},
        {"Real Madrid-Roma", 53, 39},
        {"Man. United-Fernebahce", 54, 7},
        {"Bayern-Ajax", 51, 28},
        {"Moscow-PSG", 76, 64},
        {"Barcelona-Shakhtar", 64, 15},
        {"Leverkusen-Roma", 26, 48},
        {"Arsenal-Panathinaikos", 16, 16},
        {"Dynamo Kyiv-Real Madrid", 44, 13},
        {"Man. United-Sparta", 25, 14},
        {"Bayern-M. Tel-Aviv", 55, 11},
        {"Bremen-Internazionale", 49, 49},
        {"Anderlecht-Valencia", 24, 24},
        {"Panathinaikos-PSV", 44, 30},
        {"Arsenal-Rosenborg", 42, 3},
        {"Liverpool-Olympiacos", 27, 47},
        {"M. Tel-Aviv-Juventus", 28, 28},
        {"Bremen-Panathinaikos", 2, 2},
    };
    Dataset d;
    for (const auto& r : rows) {
      d.labels.emplace_back(r.label);
      d.x.push_back(r.x);
      d.u.push_back(r.u);
    }
    return d;
  }();
  return data;
}

std::string_view to_string(UefaModel model) noexcept {
  return model == UefaModel::additive ? "additive" : "multiplicative";
}

namespace {

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void check_size(const Dataset& data) {
  if (data.x.size() != data.u.size()) throw InputError("dataset columns differ in length");
  if (data.size() < 2) throw InputError("at least two paired observations are required");
}

}  // namespace

UefaAnalysis uefa_additive(const Dataset& data, int max_order) {
  check_size(data);
  UefaAnalysis a;
  a.model = UefaModel::additive;
  a.lambda_x = mean(data.x);
  a.lambda_u = mean(data.u);
  const PairedSample sample(data.x, data.u, NoiseMomentSpec::poisson(a.lambda_x),
                            NoiseMomentSpec::poisson(a.lambda_u));
  a.result = select_order(sample, max_order);
  return a;
}

UefaAnalysis uefa_multiplicative(const Dataset& data, int max_order) {
  check_size(data);
  std::vector<double> lx(data.size()), lu(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!(data.x[i] > 0.0) || !(data.u[i] > 0.0))
      throw InputError("multiplicative model needs strictly positive data (row " + std::to_string(i + 1) + ")");
    lx[i] = std::log(data.x[i]);
    lu[i] = std::log(data.u[i]);
  }
  UefaAnalysis a;
  a.model = UefaModel::multiplicative;
  a.lambda_x = mean(data.x);
  a.lambda_u = mean(data.u);
  const PairedSample sample(std::move(lx), std::move(lu), NoiseMomentSpec::log_poisson(a.lambda_x, max_order),
                            NoiseMomentSpec::log_poisson(a.lambda_u, max_order));
  a.result = select_order(sample, max_order);
  return a;
}

}  // namespace dsmooth
