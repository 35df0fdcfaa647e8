#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "eprsim/experiments.hpp"

namespace eprsim {

enum class OutputFormat { Table, Csv, Json };

std::string_view format_name(OutputFormat f);
OutputFormat parse_format(std::string_view name);

/// Fixed 6-decimal rendering with '.' separator, locale-independent.
/// Used for every real value in CSV and table output.
std::string fmt6(double value);

constexpr int kSchemaVersion = 1;

/// Resolved run configuration echoed into JSON output for auditability.
/// Flat key/value map assembled by the CLI; keys keep insertion order.
using ConfigEcho = nlohmann::ordered_json;

std::string render_inequality(const InequalityReport& report, OutputFormat format,
                              const ConfigEcho& config);
std::string render_sweep(const SweepReport& report, OutputFormat format,
                         const ConfigEcho& config);
std::string render_frame(const FrameReport& report, OutputFormat format,
                         const ConfigEcho& config);
std::string render_nonsignaling(const NonsignalingReport& report,
                                OutputFormat format, const ConfigEcho& config);
std::string render_contrast(const ContrastReport& report, OutputFormat format,
                            const ConfigEcho& config);
std::string render_kink(ModelKind model, double epsilon, double slope,
                        double quantum_slope, OutputFormat format,
                        const ConfigEcho& config);

}  // namespace eprsim
