#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "websuite/attribution.hpp"

namespace websuite {

enum class ReportFormat { kMarkdown, kCsv, kDocument };

std::optional<ReportFormat> report_format_from_name(std::string_view name);

struct RenderOptions {
  bool ci = false;  // add Wald half-widths to interaction rows
};

/// Renders one column per report (e.g. one per agent).
std::string render_reports(const std::vector<AttributionReport>& reports, ReportFormat format,
                           RenderOptions options = {});

/// Structured form of a single report. The document stores leaf data and
/// every aggregate.
nlohmann::json report_to_document(const AttributionReport& report);

/// Throws Error{kMalformedReport}, including when a stored aggregate
/// disagrees with its recomputation from the leaves.
AttributionReport report_from_document(const nlohmann::json& doc);

/// Reads the output of render_reports(..., kDocument).
std::vector<AttributionReport> reports_from_text(std::string_view text);

struct DiffRow {
  std::string section;  // "individual" or "e2e"
  std::string key;      // ref path
  std::string display;
  std::optional<double> a;
  std::optional<double> b;

  /// b - a in percentage points; nullopt when either side is absent.
  std::optional<double> delta() const;
};

/// Per-interaction rate changes from `a` to `b`, largest absolute change
/// first. Throws Error{kSuiteMismatch} when the runs cover different tasks.
std::vector<DiffRow> diff_runs(const AttributionReport& a, const AttributionReport& b);

std::string render_diff(const std::vector<DiffRow>& rows, const AttributionReport& a,
                        const AttributionReport& b, ReportFormat format);

}  // namespace websuite
