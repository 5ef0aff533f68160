#include "vmc/cli.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "vmc/bench.hpp"
#include "vmc/checker.hpp"
#include "vmc/dsl.hpp"
#include "vmc/fuzz.hpp"
#include "vmc/report.hpp"

namespace vmc {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IO_ERROR", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_diagnostics(const std::vector<Diagnostic>& diags, std::ostream& err) {
  for (const auto& d : diags)
    err << (d.severity == Diagnostic::Severity::Error ? "error" : "warning") << " ["
        << d.code << "] " << d.message << "\n";
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string::npos ? next : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int exit_code_for(const FamilyReport& report) {
  if (report.count(Verdict::Kind::Fails) > 0) return 1;
  if (report.count(Verdict::Kind::Inconclusive) > 0) return 2;
  return 0;
}

struct LoadedModel {
  ModelDocument doc;
  Fts fts;
  double parse_ms = 0;
};

LoadedModel load_model(const std::string& path, std::ostream& err) {
  auto t0 = std::chrono::steady_clock::now();
  ModelDocument doc = parse_model(read_file(path));
  Fts fts = build_fts(doc);
  auto diags = validate(fts);
  print_diagnostics(diags, err);
  if (has_errors(diags)) throw Error("INVALID_MODEL", "model failed validation");
  return LoadedModel{std::move(doc), std::move(fts), ms_since(t0)};
}

CtlFormula resolve_property(const LoadedModel& lm, const std::string& prop_arg,
                            const std::string& formula_arg, std::string& text_out) {
  if (!formula_arg.empty()) {
    text_out = formula_arg;
    return parse_property(formula_arg);
  }
  if (prop_arg.empty()) throw Error("BAD_ARGUMENT", "no property given (name or --formula)");
  const auto* p = lm.doc.find_prop(prop_arg);
  if (!p) throw Error("UNKNOWN_PROPERTY", "model declares no property '" + prop_arg + "'");
  text_out = print_ctl(p->formula);
  return p->formula;
}

int emit_report(const FamilyReport& report, const Fts& fts, ReportContext ctx,
                const std::string& format, std::ostream& out) {
  if (format == "json")
    out << render_json_report(report, fts.space, fts.core, ctx);
  else
    out << render_human_report(report, fts.space, fts.core, ctx);
  return exit_code_for(report);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"family-based CTL model checking for variational transition systems"};
  app.require_subcommand(1);

  std::string model_path, constraint, format = "human";
  bool no_timings = false;
  int jobs = 1;

  // validate
  auto* cmd_validate = app.add_subcommand("validate", "parse and validate a model");
  cmd_validate->add_option("model", model_path)->required();

  // project
  auto* cmd_project = app.add_subcommand("project", "restrict the configuration space");
  cmd_project->add_option("model", model_path)->required();
  cmd_project->add_option("--constraint", constraint, "feature expression")->required();

  // abstract
  std::string abstract_spec = "join", mode = "may";
  auto* cmd_abstract = app.add_subcommand("abstract", "rewrite presence conditions");
  cmd_abstract->add_option("model", model_path)->required();
  cmd_abstract->add_option("--op", abstract_spec, "join | ignore=A[,B] | spec+spec");
  cmd_abstract->add_option("--mode", mode, "may | must")
      ->check(CLI::IsMember({"may", "must"}));

  // check
  std::vector<std::string> strategy{"brute"};
  std::string prop_name, formula_text, refine;
  size_t budget = 4096;
  auto* cmd_check = app.add_subcommand("check", "verify a property for every variant");
  cmd_check->add_option("model", model_path)->required();
  cmd_check->add_option("property", prop_name, "property name declared in the model");
  cmd_check->add_option("--formula", formula_text, "inline CTL formula");
  cmd_check->add_option("--strategy", strategy,
                        "brute | join | partition \"e1;e2;...\"")
      ->expected(1, 2);
  cmd_check->add_option("--abstract", abstract_spec, "abstraction for partition cells");
  cmd_check->add_option("--refine", refine, "brute: resolve inconclusive variants");
  cmd_check->add_option("--constraint", constraint, "restrict to a variant subset first");
  cmd_check->add_option("--budget", budget, "variant budget for brute force");
  cmd_check->add_option("--format", format)->check(CLI::IsMember({"human", "json"}));
  cmd_check->add_option("--jobs", jobs);
  cmd_check->add_flag("--no-timings", no_timings);

  // explain
  std::string path_spec, via_spec;
  int loop_index = -1;
  auto* cmd_explain = app.add_subcommand("explain", "attribute a path to variants");
  cmd_explain->add_option("model", model_path)->required();
  cmd_explain->add_option("--path", path_spec, "comma-separated state names")->required();
  cmd_explain->add_option("--loop", loop_index, "index the lasso loops back to");
  cmd_explain->add_option("--via", via_spec, "comma-separated action names");

  // bench
  int bench_n = 2;
  auto* cmd_bench = app.add_subcommand("bench", "synthetic scaling family");
  cmd_bench->add_option("-n,--features", bench_n, "number of optional features")->required();
  cmd_bench->add_option("--formula", formula_text, "property (default AF xge0)");
  cmd_bench->add_option("--strategy", strategy, "brute | join")->expected(1);
  cmd_bench->add_option("--budget", budget, "variant budget for brute force");
  cmd_bench->add_option("--format", format)->check(CLI::IsMember({"human", "json"}));
  cmd_bench->add_option("--jobs", jobs);
  cmd_bench->add_flag("--no-timings", no_timings);

  // selftest
  uint64_t seed = 1;
  int cases = 0;
  std::string suite = "all";
  auto* cmd_selftest = app.add_subcommand("selftest", "randomized self checks");
  cmd_selftest->add_option("--seed", seed);
  cmd_selftest->add_option("--cases", cases, "override the per-suite case count");
  cmd_selftest->add_option("--suite", suite)
      ->check(CLI::IsMember({"all", "galois", "preservation", "differential"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 3;
  }

  try {
    if (app.got_subcommand(cmd_validate)) {
      LoadedModel lm = load_model(model_path, err);
      out << "ok: " << lm.fts.core.states.size() << " states, " << lm.fts.trans.size()
          << " transitions, " << lm.fts.space.feature_count() << " features, "
          << lm.fts.space.valid_configs().size() << " configurations\n";
      return 0;
    }

    if (app.got_subcommand(cmd_project)) {
      ModelDocument doc = parse_model(read_file(model_path));
      FeatExpr e = parse_feat_expr(constraint);
      out << print_model(apply_invar(doc, e));
      return 0;
    }

    if (app.got_subcommand(cmd_abstract)) {
      ModelDocument doc = parse_model(read_file(model_path));
      Abstraction a = Abstraction::parse_spec(abstract_spec);
      ComponentMode m = mode == "may" ? ComponentMode::May : ComponentMode::Must;
      out << print_model(apply_abstraction_syntactic(doc, a, m));
      return 0;
    }

    if (app.got_subcommand(cmd_check)) {
      LoadedModel lm = load_model(model_path, err);
      std::string property_text;
      CtlFormula phi = resolve_property(lm, prop_name, formula_text, property_text);

      ReportContext ctx;
      ctx.model_digest = model_digest(print_model(lm.doc));
      ctx.property_text = property_text;
      ctx.include_timings = !no_timings;
      ctx.timings.parse_ms = lm.parse_ms;

      Fts working = lm.fts;
      if (!constraint.empty()) {
        auto t0 = std::chrono::steady_clock::now();
        working = project_subset(working, parse_feat_expr(constraint));
        ctx.timings.project_ms = ms_since(t0);
      }

      FamilyReport report;
      const std::string& kind = strategy.at(0);
      if (kind == "brute") {
        ctx.strategy = "brute";
        report = check_fts_brute_force(working, phi, BruteOptions{budget, jobs});
      } else {
        std::vector<PlanCell> plan;
        Abstraction a = Abstraction::parse_spec(abstract_spec);
        if (kind == "join") {
          plan.push_back(PlanCell{FeatExpr::t(), Abstraction::join()});
          ctx.strategy = "join";
        } else if (kind == "partition") {
          if (strategy.size() < 2)
            throw Error("BAD_ARGUMENT", "partition strategy needs cells: \"e1;e2;...\"");
          for (const std::string& part : split(strategy.at(1), ';')) {
            std::string cell = trim(part);
            if (cell.empty()) continue;
            plan.push_back(PlanCell{parse_feat_expr(cell), a});
          }
          ctx.strategy = "partition \"" + strategy.at(1) + "\" via " + a.to_string();
        } else {
          throw Error("BAD_ARGUMENT", "unknown strategy '" + kind + "'");
        }
        FamilyOptions fo;
        fo.refine_brute = refine == "brute";
        fo.jobs = jobs;
        report = check_family_abstract(working, phi, plan, fo);
      }
      ctx.timings.abstract_ms = report.abstract_ms;
      ctx.timings.check_ms = report.check_ms;
      ctx.timings.total_ms = ctx.timings.parse_ms + ctx.timings.project_ms +
                             ctx.timings.abstract_ms + ctx.timings.check_ms;
      return emit_report(report, working, ctx, format, out);
    }

    if (app.got_subcommand(cmd_explain)) {
      LoadedModel lm = load_model(model_path, err);
      Path p;
      for (const std::string& name : split(path_spec, ','))
        p.states.push_back(lm.fts.core.state_id(trim(name)));
      if (p.states.empty()) throw Error("BAD_ARGUMENT", "empty path");
      if (loop_index >= 0) {
        if (static_cast<size_t>(loop_index) >= p.states.size())
          throw Error("BAD_ARGUMENT", "loop index past the end of the path");
        p.cycle_start = static_cast<size_t>(loop_index);
      }
      std::vector<std::string> via;
      if (!via_spec.empty())
        for (const std::string& a : split(via_spec, ',')) via.push_back(trim(a));
      size_t steps = p.states.size() - 1 + (p.is_lasso() ? 1 : 0);
      if (!via.empty() && via.size() != steps)
        throw Error("BAD_ARGUMENT", "--via must name one action per step (" +
                                        std::to_string(steps) + " needed)");
      for (size_t i = 0; i < steps; ++i) {
        int src = p.states[i];
        int dst = i + 1 < p.states.size() ? p.states[i + 1] : p.states[*p.cycle_start];
        std::vector<int> options;
        for (const Transition& t : lm.fts.trans)
          if (t.src == src && t.dst == dst) options.push_back(t.action);
        if (!via.empty()) {
          p.actions.push_back(lm.fts.core.action_id(via[i]));
          continue;
        }
        if (options.empty())
          throw Error("PATH_NOT_IN_MODEL",
                      "no transition from " + lm.fts.core.states[static_cast<size_t>(src)] +
                          " to " + lm.fts.core.states[static_cast<size_t>(dst)]);
        if (options.size() > 1) {
          std::string names;
          for (int a : options) names += " " + lm.fts.core.actions[static_cast<size_t>(a)];
          throw Error("AMBIGUOUS_PATH",
                      "several actions lead from " +
                          lm.fts.core.states[static_cast<size_t>(src)] + " to " +
                          lm.fts.core.states[static_cast<size_t>(dst)] + ":" + names +
                          "; disambiguate with --via");
        }
        p.actions.push_back(options[0]);
      }
      FeatExpr cond = attribute_counterexample(lm.fts, p);
      out << "path:      " << path_to_string(lm.fts.core, p) << "\n";
      out << "condition: " << print_feat_expr(cond) << "\n";
      auto configs = satisfying_configs(cond, lm.fts.space);
      out << "variants (" << configs.size() << "):\n";
      for (const Config& k : configs)
        out << "  " << lm.fts.space.config_to_string(k) << "\n";
      return 0;
    }

    if (app.got_subcommand(cmd_bench)) {
      auto t0 = std::chrono::steady_clock::now();
      Fts fts = make_scaling_family(bench_n);
      ReportContext ctx;
      ctx.model_digest = "bench-n" + std::to_string(bench_n);
      ctx.include_timings = !no_timings;
      ctx.timings.parse_ms = ms_since(t0);  // generation time
      std::string text = formula_text.empty() ? kBenchDefaultProperty : formula_text;
      ctx.property_text = text;
      CtlFormula phi = parse_property(text);
      FamilyReport report;
      const std::string& kind = strategy.at(0);
      if (kind == "brute") {
        ctx.strategy = "brute";
        report = check_fts_brute_force(fts, phi, BruteOptions{budget, jobs});
      } else if (kind == "join") {
        ctx.strategy = "join";
        report = check_family_abstract(
            fts, phi, {PlanCell{FeatExpr::t(), Abstraction::join()}},
            FamilyOptions{refine == "brute", jobs, 256});
      } else {
        throw Error("BAD_ARGUMENT", "bench strategies: brute | join");
      }
      ctx.timings.abstract_ms = report.abstract_ms;
      ctx.timings.check_ms = report.check_ms;
      ctx.timings.total_ms = ctx.timings.parse_ms + ctx.timings.abstract_ms +
                             ctx.timings.check_ms;
      if (format == "json") return emit_report(report, fts, ctx, format, out);
      out << "bench n=" << bench_n << ": " << fts.core.states.size() << " states, "
          << fts.trans.size() << " transitions, " << fts.space.valid_configs().size()
          << " variants\n";
      out << "property: " << text << "  strategy: " << ctx.strategy << "\n";
      out << "verdicts: holds " << report.count(Verdict::Kind::Holds) << ", fails "
          << report.count(Verdict::Kind::Fails) << ", inconclusive "
          << report.count(Verdict::Kind::Inconclusive) << "\n";
      if (!no_timings)
        out << "timings: generate " << ctx.timings.parse_ms << " ms, abstract "
            << ctx.timings.abstract_ms << " ms, check " << ctx.timings.check_ms << " ms\n";
      return exit_code_for(report);
    }

    if (app.got_subcommand(cmd_selftest)) {
      bool ok = true;
      long findings = 0;
      auto run = [&](const std::string& name, SelftestResult r) {
        out << name << ": " << (r.ok() ? "pass" : "FAIL") << " (" << r.cases << " cases";
        if (r.findings) out << ", " << r.findings << " findings";
        out << ")\n";
        for (const auto& msg : r.messages) out << "  " << msg << "\n";
        ok = ok && r.ok();
        findings += r.findings;
      };
      if (suite == "all" || suite == "galois")
        run("galois", selftest_galois(seed, cases > 0 ? cases : 1000));
      if (suite == "all" || suite == "preservation")
        run("preservation", selftest_preservation(seed, cases > 0 ? cases : 500));
      if (suite == "all" || suite == "differential")
        run("differential", selftest_differential(seed, cases > 0 ? cases : 500));
      return ok ? 0 : 1;
    }
  } catch (const Error& e) {
    err << "error [" << e.code << "] " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}

}  // namespace vmc
