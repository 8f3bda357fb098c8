#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "wl1/harness.hpp"

namespace wl1 {

namespace {

constexpr const char* kCsvHeader = "n,k,m,theta,eta,h,trials,successes,prob,master_seed";

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& s, int line_no) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  require(end == s.c_str() + s.size() && !s.empty(),
          "csv: bad number '" + s + "' on line " + std::to_string(line_no));
  return v;
}

long long parse_int(const std::string& s, int line_no) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  require(end == s.c_str() + s.size() && !s.empty(),
          "csv: bad integer '" + s + "' on line " + std::to_string(line_no));
  return v;
}

}  // namespace

std::string records_to_csv(const std::vector<SweepRecord>& records) {
  std::vector<SweepRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SweepRecord& a, const SweepRecord& b) {
                     return a.n != b.n ? a.n < b.n : a.m < b.m;
                   });
  std::string out = kCsvHeader;
  out += '\n';
  for (const SweepRecord& r : sorted) {
    out += std::to_string(r.n);
    out += ',';
    out += std::to_string(r.k);
    out += ',';
    out += std::to_string(r.m);
    out += ',';
    out += format_double(r.theta);
    out += ',';
    out += format_double(r.eta);
    out += ',';
    out += format_double(r.h);
    out += ',';
    out += std::to_string(r.trials);
    out += ',';
    out += std::to_string(r.successes);
    out += ',';
    out += format_double(r.prob);
    out += ',';
    out += std::to_string(r.master_seed);
    out += '\n';
  }
  return out;
}

std::vector<SweepRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == kCsvHeader, "csv: unexpected header '" + line + "'");

  std::vector<SweepRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    require(fields.size() == 10,
            "csv: expected 10 fields on line " + std::to_string(line_no));
    SweepRecord r;
    r.n = static_cast<Index>(parse_int(fields[0], line_no));
    r.k = static_cast<Index>(parse_int(fields[1], line_no));
    r.m = static_cast<Index>(parse_int(fields[2], line_no));
    r.theta = parse_double(fields[3], line_no);
    r.eta = parse_double(fields[4], line_no);
    r.h = parse_double(fields[5], line_no);
    r.trials = static_cast<int>(parse_int(fields[6], line_no));
    r.successes = static_cast<int>(parse_int(fields[7], line_no));
    r.prob = parse_double(fields[8], line_no);
    r.master_seed = static_cast<std::uint64_t>(
        std::strtoull(fields[9].c_str(), nullptr, 10));
    require(r.trials >= 1 && r.successes >= 0 && r.successes <= r.trials,
            "csv: successes/trials out of range on line " + std::to_string(line_no));
    records.push_back(r);
  }
  return records;
}

void emit_csv(const std::vector<SweepRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("csv: cannot write " + path);
  out << records_to_csv(records);
  if (!out) throw ValidationError("csv: write failure on " + path);
}

std::vector<SweepRecord> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("csv: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return records_from_csv(buf.str());
}

namespace {

constexpr double kWidth = 680.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 540.0;  // legend lives to the right of this
constexpr double kTop = 46.0;
constexpr double kBottom = 386.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                "#9467bd", "#ff7f0e", "#8c564b"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double nice_step(double raw) {
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double nice;
  if (frac <= 1.0)
    nice = 1.0;
  else if (frac <= 2.0)
    nice = 2.0;
  else if (frac <= 2.5)
    nice = 2.5;
  else if (frac <= 5.0)
    nice = 5.0;
  else
    nice = 10.0;
  return nice * mag;
}

struct Group {
  Index n;
  Index k;
  std::vector<const SweepRecord*> rows;
};

}  // namespace

std::string render_svg(const std::vector<SweepRecord>& records, PlotAxis axis) {
  require(!records.empty(), "plot: no records to draw");

  std::vector<SweepRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SweepRecord& a, const SweepRecord& b) {
                     return a.n != b.n ? a.n < b.n : a.m < b.m;
                   });

  std::vector<Group> groups;
  for (const SweepRecord& r : sorted) {
    if (groups.empty() || groups.back().n != r.n || groups.back().k != r.k)
      groups.push_back(Group{r.n, r.k, {}});
    groups.back().rows.push_back(&r);
  }

  const auto x_of = [axis](const SweepRecord& r) {
    return axis == PlotAxis::kTheta ? r.theta : static_cast<double>(r.m);
  };

  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -std::numeric_limits<double>::infinity();
  for (const SweepRecord& r : sorted) {
    x_min = std::min(x_min, x_of(r));
    x_max = std::max(x_max, x_of(r));
  }
  if (x_max - x_min <= 0.0) {
    const double pad = std::max(0.5, std::abs(x_min) * 0.1);
    x_min -= pad;
    x_max += pad;
  }

  const auto map_x = [&](double v) {
    return kLeft + (v - x_min) / (x_max - x_min) * (kRight - kLeft);
  };
  const auto map_y = [&](double p) { return kBottom - p * (kBottom - kTop); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "  <rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "  <text x=\"" << coord((kLeft + kRight) / 2)
      << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">"
         "support recovery phase transition</text>\n";
  svg << "  <rect x=\"" << coord(kLeft) << "\" y=\"" << coord(kTop) << "\" width=\""
      << coord(kRight - kLeft) << "\" height=\"" << coord(kBottom - kTop)
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  for (int i = 0; i <= 5; ++i) {  // y ticks at 0, 0.2, ..., 1
    const double p = static_cast<double>(i) / 5.0;
    const double y = map_y(p);
    svg << "  <line x1=\"" << coord(kLeft - 4) << "\" y1=\"" << coord(y) << "\" x2=\""
        << coord(kRight) << "\" y2=\"" << coord(y)
        << "\" stroke=\"#cccccc\" stroke-width=\"0.6\"/>\n";
    svg << "  <text x=\"" << coord(kLeft - 8) << "\" y=\"" << coord(y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
        << tick_label(p) << "</text>\n";
  }

  const double step = nice_step((x_max - x_min) / 5.0);
  for (double t = std::ceil(x_min / step) * step; t <= x_max + 1e-9 * step; t += step) {
    const double x = map_x(t);
    svg << "  <line x1=\"" << coord(x) << "\" y1=\"" << coord(kBottom) << "\" x2=\""
        << coord(x) << "\" y2=\"" << coord(kBottom + 5)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg << "  <text x=\"" << coord(x) << "\" y=\"" << coord(kBottom + 18)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
        << tick_label(t) << "</text>\n";
  }

  svg << "  <text x=\"" << coord((kLeft + kRight) / 2) << "\" y=\""
      << coord(kHeight - 10)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
      << (axis == PlotAxis::kTheta ? "rescaled sample size theta" : "sample size m")
      << "</text>\n";
  svg << "  <text x=\"16\" y=\"" << coord((kTop + kBottom) / 2)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\""
         " transform=\"rotate(-90 16 "
      << coord((kTop + kBottom) / 2) << ")\">success probability</text>\n";

  for (std::size_t g = 0; g < groups.size(); ++g) {
    const char* color = kPalette[g % kPaletteSize];
    if (groups[g].rows.size() > 1) {
      svg << "  <polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.8\" points=\"";
      for (const SweepRecord* r : groups[g].rows)
        svg << coord(map_x(x_of(*r))) << ',' << coord(map_y(r->prob)) << ' ';
      svg << "\"/>\n";
    }
    for (const SweepRecord* r : groups[g].rows)
      svg << "  <circle cx=\"" << coord(map_x(x_of(*r))) << "\" cy=\""
          << coord(map_y(r->prob)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
  }

  const double legend_x = kRight + 14.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double y = kTop + 12.0 + 20.0 * static_cast<double>(g);
    const char* color = kPalette[g % kPaletteSize];
    svg << "  <line x1=\"" << coord(legend_x) << "\" y1=\"" << coord(y) << "\" x2=\""
        << coord(legend_x + 22) << "\" y2=\"" << coord(y) << "\" stroke=\"" << color
        << "\" stroke-width=\"1.8\"/>\n";
    svg << "  <text x=\"" << coord(legend_x + 28) << "\" y=\"" << coord(y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">n=" << groups[g].n
        << ", k=" << groups[g].k << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(const std::vector<SweepRecord>& records, const std::string& path,
               PlotAxis axis) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("plot: cannot write " + path);
  out << render_svg(records, axis);
  if (!out) throw ValidationError("plot: write failure on " + path);
}

std::vector<double> isotonic_fit(const std::vector<double>& values) {
  struct Block {
    double sum;
    int count;
  };
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (double v : values) {
    Block cur{v, 1};
    while (!blocks.empty() &&
           blocks.back().sum * cur.count > cur.sum * blocks.back().count) {
      cur.sum += blocks.back().sum;
      cur.count += blocks.back().count;
      blocks.pop_back();
    }
    blocks.push_back(cur);
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const Block& b : blocks) {
    const double mean = b.sum / static_cast<double>(b.count);
    for (int i = 0; i < b.count; ++i) out.push_back(mean);
  }
  return out;
}

std::optional<double> crossing_theta(const std::vector<SweepRecord>& records,
                                     double level) {
  require(!records.empty(), "crossing_theta: no records");
  require(std::isfinite(level), "crossing_theta: level must be finite");
  std::vector<SweepRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SweepRecord& a, const SweepRecord& b) {
                     return a.theta < b.theta;
                   });
  for (const SweepRecord& r : sorted)
    require(r.n == sorted.front().n && r.k == sorted.front().k,
            "crossing_theta: records must share one (n, k) group");

  std::vector<double> probs;
  probs.reserve(sorted.size());
  for (const SweepRecord& r : sorted) probs.push_back(r.prob);
  const std::vector<double> iso = isotonic_fit(probs);

  if (iso.front() >= level) return sorted.front().theta;
  for (std::size_t i = 1; i < iso.size(); ++i) {
    if (iso[i] >= level) {
      const double t0 = sorted[i - 1].theta, t1 = sorted[i].theta;
      const double p0 = iso[i - 1], p1 = iso[i];
      return t0 + (level - p0) / (p1 - p0) * (t1 - t0);
    }
  }
  return std::nullopt;
}

}  // namespace wl1
