#include "autoconv/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "autoconv/error.hpp"

namespace autoconv {
namespace {

constexpr std::string_view kRequiredKeys[] = {"T",         "R",           "objective_total",
                                              "grad_norm", "created_utc", "tool_version"};

std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw FormatError("malformed " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error("failed to format a double");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw FormatError("malformed number: '" + std::string(text) + "'");
  }
  return v;
}

std::string created_utc() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    long long v = 0;
    const std::string_view s(epoch);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size()) t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const std::string* SolutionFile::find(std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::size_t SolutionFile::R() const {
  const std::string* r = find("R");
  return r ? parse_count(*r, "R") : 0;
}

FourierCoefficients SolutionFile::to_coefficients() const { return FourierCoefficients(coefficients); }

FourierSolution SolutionFile::to_solution() const {
  FourierSolution s;
  s.coeffs = to_coefficients();
  s.R = R();
  if (const std::string* v = find("objective_total")) s.breakdown.total = parse_double(*v);
  if (const std::string* v = find("grad_norm")) s.grad_norm = parse_double(*v);
  s.breakdown.R = s.R;
  s.converged = true;
  return s;
}

SolutionFile make_solution_file(const FourierSolution& solution) {
  SolutionFile file;
  file.metadata = {
      {"T", std::to_string(solution.coeffs.degree())},
      {"R", std::to_string(solution.R)},
      {"objective_total", format_double(solution.breakdown.total)},
      {"grad_norm", format_double(solution.grad_norm)},
      {"created_utc", created_utc()},
      {"tool_version", std::string(kToolVersion)},
  };
  const auto v = solution.coeffs.values();
  file.coefficients.assign(v.begin(), v.end());
  return file;
}

std::string format_solution(const SolutionFile& file) {
  std::string out(kSolutionHeader);
  out += '\n';
  for (const auto& [k, v] : file.metadata) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  for (std::size_t k = 0; k < file.coefficients.size(); ++k) {
    out += std::to_string(k + 1);
    out += ' ';
    out += format_double(file.coefficients[k]);
    out += '\n';
  }
  return out;
}

SolutionFile parse_solution(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    lines.push_back(strip_cr(text.substr(0, nl)));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  if (lines.empty() || lines.front() != kSolutionHeader) {
    throw FormatError("unrecognized solution header: '" +
                      std::string(lines.empty() ? std::string_view{} : lines.front()) + "'");
  }
  SolutionFile file;
  std::size_t i = 1;
  for (; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) break;
    const std::string key(line.substr(0, eq));
    if (key.empty() || key.find(' ') != std::string::npos) {
      throw FormatError("malformed metadata line " + std::to_string(i + 1));
    }
    if (file.find(key)) throw FormatError("duplicate metadata key '" + key + "'");
    file.metadata.emplace_back(key, std::string(line.substr(eq + 1)));
  }
  for (std::string_view key : kRequiredKeys) {
    if (!file.find(key)) throw FormatError("missing metadata key '" + std::string(key) + "'");
  }
  const std::size_t T = parse_count(*file.find("T"), "T");
  file.R();  // validates R
  for (; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.empty()) {
      if (i + 1 == lines.size()) break;
      throw FormatError("blank line inside coefficient block at line " + std::to_string(i + 1));
    }
    const std::size_t sp = line.find(' ');
    if (sp == std::string_view::npos) {
      throw FormatError("malformed coefficient line " + std::to_string(i + 1));
    }
    const std::size_t k = parse_count(line.substr(0, sp), "coefficient index");
    if (k != file.coefficients.size() + 1) {
      throw FormatError("coefficient index " + std::to_string(k) + " out of sequence");
    }
    const double v = parse_double(line.substr(sp + 1));
    if (!std::isfinite(v)) throw NonFiniteCoefficient(k, v);
    file.coefficients.push_back(v);
  }
  if (file.coefficients.size() != T) {
    throw FormatError("expected " + std::to_string(T) + " coefficients, found " +
                      std::to_string(file.coefficients.size()));
  }
  return file;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

SolutionFile load_solution(const std::filesystem::path& path) { return parse_solution(read_text(path)); }

void save_solution(const std::filesystem::path& path, const SolutionFile& file) {
  write_text(path, format_solution(file));
}

CurveSamples curve_samples(const FourierCoefficients& f, std::size_t points) {
  if (points < 2) throw InvalidArgument("curve needs at least two grid points");
  CurveSamples s;
  s.x.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    s.x[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  s.x.back() = 1.0;
  s.f.resize(points);
  for (std::size_t i = 0; i < points; ++i) s.f[i] = f.evaluate(s.x[i]);
  s.ff = autoconvolution_curve(f, s.x);
  return s;
}

std::string curve_csv(const CurveSamples& s) {
  std::string out = "x,f,ff\n";
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    out += format_double(s.x[i]) + ',' + format_double(s.f[i]) + ',' + format_double(s.ff[i]) + '\n';
  }
  return out;
}

std::string curve_svg(const CurveSamples& s) {
  constexpr double kWidth = 800.0;
  constexpr double kHeight = 400.0;
  constexpr double kMargin = 40.0;
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    lo = std::min({lo, s.f[i], s.ff[i]});
    hi = std::max({hi, s.f[i], s.ff[i]});
  }
  if (hi <= lo) hi = lo + 1.0;
  auto px = [&](double x) { return kMargin + (x + 1.0) / 2.0 * (kWidth - 2 * kMargin); };
  auto py = [&](double y) { return kHeight - kMargin - (y - lo) / (hi - lo) * (kHeight - 2 * kMargin); };
  auto fixed = [](double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    return std::string(buf, ptr);
  };
  auto polyline = [&](const std::vector<double>& y, std::string_view colour) {
    std::string out = "<polyline fill=\"none\" stroke=\"" + std::string(colour) +
                      "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) out += ' ';
      out += fixed(px(s.x[i])) + ',' + fixed(py(y[i]));
    }
    return out + "\"/>\n";
  };
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(kWidth) +
                    "\" height=\"" + fixed(kHeight) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<line x1=\"" + fixed(px(-1)) + "\" y1=\"" + fixed(py(0)) + "\" x2=\"" + fixed(px(1)) +
         "\" y2=\"" + fixed(py(0)) + "\" stroke=\"black\"/>\n";
  out += polyline(s.f, "steelblue");
  out += polyline(s.ff, "darkorange");
  out += "</svg>\n";
  return out;
}

}  // namespace autoconv
