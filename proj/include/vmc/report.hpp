#pragma once

// Structured (JSON) and human-readable rendering of family reports.

#include <string>

#include "vmc/checker.hpp"

namespace vmc {

struct PhaseTimings {
  double parse_ms = 0, project_ms = 0, abstract_ms = 0, check_ms = 0, total_ms = 0;
};

struct ReportContext {
  std::string model_digest;
  std::string property_text;
  std::string strategy;
  PhaseTimings timings;
  bool include_timings = true;
};

// Schema "vmc-report/1": stable key order, variants sorted by configuration.
std::string render_json_report(const FamilyReport& report, const ConfigSpace& space,
                               const SystemCore& core, const ReportContext& ctx);

std::string render_human_report(const FamilyReport& report, const ConfigSpace& space,
                                const SystemCore& core, const ReportContext& ctx);

// FNV-1a over the canonical model text.
std::string model_digest(const std::string& canonical_text);

}  // namespace vmc
