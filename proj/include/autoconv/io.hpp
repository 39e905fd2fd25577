#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "autoconv/solver.hpp"
#include "autoconv/spectral.hpp"

namespace autoconv {

inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr std::string_view kSolutionHeader = "AUTOCONV-SOLUTION v1";

/// 17 significant digits in %g style, which parses back to the same double.
std::string format_double(double x);
/// Strict decimal parse of the whole string; throws FormatError.
double parse_double(std::string_view text);

/// UTC timestamp "YYYY-MM-DDTHH:MM:SSZ". Honors SOURCE_DATE_EPOCH so repeated
/// runs can produce identical files.
std::string created_utc();

/// Text solution file:
///
///   AUTOCONV-SOLUTION v1
///   T=<degree>
///   R=<channels>
///   objective_total=<value>
///   grad_norm=<value>
///   created_utc=<timestamp>
///   tool_version=<version>
///   1 <f_1>
///   ...
///   T <f_T>
///
/// Metadata order is preserved on load, so load then save is byte-identical.
struct SolutionFile {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<double> coefficients;

  /// Value of key, or nullptr.
  const std::string* find(std::string_view key) const;
  std::size_t degree() const { return coefficients.size(); }
  std::size_t R() const;
  FourierCoefficients to_coefficients() const;
  /// A FourierSolution usable as a warm start.
  FourierSolution to_solution() const;
};

SolutionFile make_solution_file(const FourierSolution& solution);

std::string format_solution(const SolutionFile& file);
/// Throws FormatError on an unknown header, malformed lines, missing required
/// keys or a coefficient count that disagrees with T.
SolutionFile parse_solution(std::string_view text);

/// Throws Error if the file cannot be opened.
SolutionFile load_solution(const std::filesystem::path& path);
/// Throws Error if the file cannot be written.
void save_solution(const std::filesystem::path& path, const SolutionFile& file);

/// Writes text to path, throwing Error on failure.
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

struct CurveSamples {
  std::vector<double> x;
  std::vector<double> f;
  std::vector<double> ff;
};

/// f and f*f on points uniformly spaced over [-1, 1] (points >= 2). f is
/// extended by zero outside [-1/2, 1/2].
CurveSamples curve_samples(const FourierCoefficients& f, std::size_t points);

std::string curve_csv(const CurveSamples& samples);
/// Standalone SVG with one polyline per curve.
std::string curve_svg(const CurveSamples& samples);

}  // namespace autoconv
