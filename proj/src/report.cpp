#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "banditms/harness.hpp"

namespace banditms {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt4g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                    "#d62728", "#9467bd", "#8c564b"};

}  // namespace

void write_csv(const RegretTable& table, const std::filesystem::path& path) {
  if (table.empty()) throw std::invalid_argument("write_csv: empty table");
  std::ostringstream out;
  out << "algorithm,round,mean_cum_regret,std_cum_regret,n_instances\n";
  for (const auto& algorithm : table.algorithms()) {
    const int last = table.max_round(algorithm);
    for (int t = 1; t <= last; ++t) {
      const auto s = table.at(algorithm, t);
      out << algorithm << ',' << t << ',' << fmt17(s.mean) << ',' << fmt17(s.stddev) << ','
          << s.n << '\n';
    }
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("write_csv: cannot open " + path.string());
  file << out.str();
  if (!file) throw std::runtime_error("write_csv: write failed for " + path.string());
}

std::vector<CsvRow> read_regret_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_regret_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) ||
      line != "algorithm,round,mean_cum_regret,std_cum_regret,n_instances")
    throw std::runtime_error("read_regret_csv: bad header");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    CsvRow row;
    std::string field;
    std::getline(ss, row.algorithm, ',');
    std::getline(ss, field, ',');
    row.round = std::stoi(field);
    std::getline(ss, field, ',');
    row.mean_cum_regret = std::stod(field);
    std::getline(ss, field, ',');
    row.std_cum_regret = std::stod(field);
    std::getline(ss, field, ',');
    row.n_instances = std::stoi(field);
    rows.push_back(std::move(row));
  }
  return rows;
}

void emit_plot(const RegretTable& table, const std::filesystem::path& path) {
  if (table.empty()) throw std::invalid_argument("emit_plot: empty table");
  const double width = 800, height = 500;
  const double ml = 70, mr = 20, mt = 20, mb = 55;
  const double pw = width - ml - mr, ph = height - mt - mb;

  const auto algorithms = table.algorithms();
  int max_round = 1;
  double y_max = 0.0;
  for (const auto& a : algorithms) {
    max_round = std::max(max_round, table.max_round(a));
    for (int t = 1; t <= table.max_round(a); ++t) {
      const auto s = table.at(a, t);
      y_max = std::max(y_max, s.mean + s.stddev);
    }
  }
  if (y_max <= 0.0) y_max = 1.0;
  y_max *= 1.05;

  auto sx = [&](double t) { return ml + pw * (max_round > 1 ? (t - 1) / (max_round - 1.0) : 0.5); };
  auto sy = [&](double v) { return mt + ph * (1.0 - v / y_max); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";

  // axes and ticks
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << fmt2(ml) << "\" y1=\"" << fmt2(mt + ph) << "\" x2=\"" << fmt2(ml + pw)
      << "\" y2=\"" << fmt2(mt + ph) << "\"/>\n";
  svg << "<line x1=\"" << fmt2(ml) << "\" y1=\"" << fmt2(mt) << "\" x2=\"" << fmt2(ml)
      << "\" y2=\"" << fmt2(mt + ph) << "\"/>\n";
  svg << "</g>\n";
  for (int i = 0; i <= 5; ++i) {
    const double t = 1 + (max_round - 1) * i / 5.0;
    const double v = y_max * i / 5.0;
    svg << "<line x1=\"" << fmt2(sx(t)) << "\" y1=\"" << fmt2(mt + ph) << "\" x2=\""
        << fmt2(sx(t)) << "\" y2=\"" << fmt2(mt + ph + 5) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt2(sx(t)) << "\" y=\"" << fmt2(mt + ph + 20)
        << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt4g(t) << "</text>\n";
    svg << "<line x1=\"" << fmt2(ml - 5) << "\" y1=\"" << fmt2(sy(v)) << "\" x2=\"" << fmt2(ml)
        << "\" y2=\"" << fmt2(sy(v)) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt2(ml - 8) << "\" y=\"" << fmt2(sy(v) + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">" << fmt4g(v) << "</text>\n";
  }
  svg << "<text x=\"" << fmt2(ml + pw / 2) << "\" y=\"" << fmt2(height - 12)
      << "\" font-size=\"14\" text-anchor=\"middle\">round</text>\n";
  svg << "<text x=\"18\" y=\"" << fmt2(mt + ph / 2)
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fmt2(mt + ph / 2) << ")\">cumulative regret</text>\n";

  // one band + line per algorithm
  for (std::size_t k = 0; k < algorithms.size(); ++k) {
    const auto& name = algorithms[k];
    const char* color = kPalette[k % std::size(kPalette)];
    const int last = table.max_round(name);
    std::ostringstream band, line;
    for (int t = 1; t <= last; ++t) {
      const auto s = table.at(name, t);
      band << fmt2(sx(t)) << ',' << fmt2(sy(std::min(s.mean + s.stddev, y_max))) << ' ';
      line << fmt2(sx(t)) << ',' << fmt2(sy(std::min(s.mean, y_max))) << ' ';
    }
    for (int t = last; t >= 1; --t) {
      const auto s = table.at(name, t);
      band << fmt2(sx(t)) << ',' << fmt2(sy(std::max(s.mean - s.stddev, 0.0))) << ' ';
    }
    svg << "<polygon points=\"" << band.str() << "\" fill=\"" << color
        << "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
    svg << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
  }

  // legend
  for (std::size_t k = 0; k < algorithms.size(); ++k) {
    const double y = mt + 16 + 18.0 * k;
    svg << "<line x1=\"" << fmt2(ml + 10) << "\" y1=\"" << fmt2(y) << "\" x2=\"" << fmt2(ml + 34)
        << "\" y2=\"" << fmt2(y) << "\" stroke=\"" << kPalette[k % std::size(kPalette)]
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fmt2(ml + 40) << "\" y=\"" << fmt2(y + 4) << "\" font-size=\"12\">"
        << algorithms[k] << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("emit_plot: cannot open " + path.string());
  file << svg.str();
  if (!file) throw std::runtime_error("emit_plot: write failed for " + path.string());
}

}  // namespace banditms
