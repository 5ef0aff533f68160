#include "vmc/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace vmc {

namespace {

using nlohmann::ordered_json;

ordered_json config_json(const ConfigSpace& space, const Config& k) {
  std::vector<std::string> names;
  for (size_t i = 0; i < space.feature_count(); ++i)
    if (k.bits & (1u << i)) names.push_back(feature_name(space.features()[i]));
  std::sort(names.begin(), names.end());
  return ordered_json(names);
}

ordered_json path_json(const SystemCore& core, const Path& p) {
  ordered_json j;
  std::vector<std::string> states, actions;
  for (int s : p.states) states.push_back(core.states[static_cast<size_t>(s)]);
  for (int a : p.actions) actions.push_back(core.actions[static_cast<size_t>(a)]);
  j["states"] = states;
  j["actions"] = actions;
  if (p.cycle_start) j["cycle_start"] = *p.cycle_start;
  j["rendered"] = path_to_string(core, p);
  return j;
}

}  // namespace

std::string render_json_report(const FamilyReport& report, const ConfigSpace& space,
                               const SystemCore& core, const ReportContext& ctx) {
  ordered_json j;
  j["schema"] = "vmc-report/1";
  j["model_digest"] = ctx.model_digest;
  j["property"] = ctx.property_text;
  j["strategy"] = ctx.strategy.empty() ? report.strategy : ctx.strategy;
  ordered_json summary;
  summary["variants"] = report.variants.size();
  summary["holds"] = report.count(Verdict::Kind::Holds);
  summary["fails"] = report.count(Verdict::Kind::Fails);
  summary["inconclusive"] = report.count(Verdict::Kind::Inconclusive);
  j["summary"] = summary;
  ordered_json variants = ordered_json::array();
  for (const auto& v : report.variants) {
    ordered_json row;
    row["config"] = config_json(space, v.config);
    row["verdict"] = to_string(v.verdict.kind);
    if (!v.verdict.reason.empty()) row["reason"] = v.verdict.reason;
    if (v.verdict.evidence) row["evidence"] = path_json(core, *v.verdict.evidence);
    variants.push_back(std::move(row));
  }
  j["variants"] = std::move(variants);
  ordered_json evidence = ordered_json::array();
  for (const auto& e : report.evidence) {
    ordered_json row;
    row["path"] = path_json(core, e.path);
    row["condition"] = print_feat_expr(e.condition);
    row["note"] = e.note;
    evidence.push_back(std::move(row));
  }
  j["evidence"] = std::move(evidence);
  if (ctx.include_timings) {
    ordered_json t;
    t["parse_ms"] = ctx.timings.parse_ms;
    t["project_ms"] = ctx.timings.project_ms;
    t["abstract_ms"] = ctx.timings.abstract_ms;
    t["check_ms"] = ctx.timings.check_ms;
    t["total_ms"] = ctx.timings.total_ms;
    j["timings"] = std::move(t);
  }
  return j.dump(2) + "\n";
}

std::string render_human_report(const FamilyReport& report, const ConfigSpace& space,
                                const SystemCore& core, const ReportContext& ctx) {
  std::ostringstream os;
  os << "property:  " << ctx.property_text << "\n";
  os << "strategy:  " << (ctx.strategy.empty() ? report.strategy : ctx.strategy) << "\n";
  os << "variants:  " << report.variants.size() << "  (holds "
     << report.count(Verdict::Kind::Holds) << ", fails " << report.count(Verdict::Kind::Fails)
     << ", inconclusive " << report.count(Verdict::Kind::Inconclusive) << ")\n";
  const size_t limit = 64;
  size_t shown = 0;
  for (const auto& v : report.variants) {
    if (shown++ >= limit) {
      os << "  ... " << (report.variants.size() - limit) << " more variants elided\n";
      break;
    }
    os << "  " << std::left << std::setw(24) << space.config_to_string(v.config)
       << to_string(v.verdict.kind);
    if (!v.verdict.reason.empty()) os << "  [" << v.verdict.reason << "]";
    os << "\n";
    if (v.verdict.evidence) os << "      " << path_to_string(core, *v.verdict.evidence) << "\n";
  }
  for (const auto& e : report.evidence) {
    os << "evidence (" << e.note << "):\n";
    os << "  path:      " << path_to_string(core, e.path) << "\n";
    os << "  condition: " << print_feat_expr(e.condition) << "\n";
  }
  if (ctx.include_timings) {
    os << "timings: parse " << ctx.timings.parse_ms << " ms, project " << ctx.timings.project_ms
       << " ms, abstract " << ctx.timings.abstract_ms << " ms, check " << ctx.timings.check_ms
       << " ms, total " << ctx.timings.total_ms << " ms\n";
  }
  return os.str();
}

std::string model_digest(const std::string& canonical_text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical_text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setfill('0') << std::setw(16) << h;
  return os.str();
}

}  // namespace vmc
