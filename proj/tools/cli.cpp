#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "newton_critic/report.hpp"

namespace nc::cli {

namespace {

struct Options {
  std::string expression;
  std::string file;
  unsigned order = 12;
  unsigned max_depth = 32;
  bool json = false;
  std::uint64_t seed = 1;
  std::optional<unsigned> samples;

  bool trace = false;
  std::string replay;
  bool all_quadrants = false;
  std::vector<double> ps;
  unsigned grid_level = 9;
  unsigned theta_samples = 512;
  unsigned workers = 0;
  std::string tsv;
  std::string family = "auto";
  unsigned refinements = 3;
  unsigned first = 3;
  double blowup_p = 3;
};

struct Outcome {
  Json result;
  Json certification;
  int exit_code = kOk;
  std::string text;  // human-readable rendering
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::TruncationInsufficient:
    case ErrorCode::MaxDepthExceeded:
      return kPartial;
    case ErrorCode::InvariantViolation:
    case ErrorCode::MultiplicityNotDecreasing:
    case ErrorCode::ExtensionTooLarge:
    case ErrorCode::BranchNotSimple:
      return kInternal;
    default:
      return kInput;
  }
}

Json numeric_certification() { return {{"exact", false}, {"label", "Numerical"}}; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::string decimal(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

Outcome run_classify(const Options& o) {
  ExpandedGerm g = load_germ(o.expression, o.order);
  Classification c = classify(g);
  std::ostringstream t;
  t << "verdict: " << (c.degenerate() ? "Degenerate" : "NotStronglyDegenerate");
  if (c.degenerate()) t << " (case " << c.degenerate_case << ")";
  t << "\ncertification: " << c.certification.to_string() << "\n";
  return {to_json(c), to_json(c.certification), kOk, t.str()};
}

std::string render_trace(const std::vector<TraceEvent>& trace) {
  std::string s;
  for (const auto& e : trace) s += e.to_string() + "\n";
  return s;
}

Outcome critical_outcome(const Options& o, const std::string& expression) {
  ExpandedGerm g = load_germ(expression, o.order);
  CriticalConfig cfg;
  cfg.max_depth = o.max_depth;
  cfg.order = o.order;
  CriticalReport r = compute(g, cfg);
  std::ostringstream t;
  t << "p_gamma = " << to_string(r.p_gamma) << "\nD_gamma = " << to_string(r.D_gamma)
    << "\ncertification: " << r.certification.to_string() << "\n";
  if (o.trace) t << render_trace(r.trace);
  return {to_json(r, o.trace), to_json(r.certification), kOk, t.str()};
}

bool same_event(const TraceEvent& a, const TraceEvent& b) {
  return a.kind == b.kind && a.depth == b.depth && a.fields == b.fields;
}

// D starts at InitD and takes the max with every DUpdate candidate.
Rational fold_p_gamma(const std::vector<TraceEvent>& trace) {
  std::optional<Rational> D;
  for (const auto& e : trace) {
    if (e.kind == TraceEvent::Kind::InitD) D = parse_rational(e.get("value"));
    if (e.kind == TraceEvent::Kind::DUpdate) {
      if (!D) fail(ErrorCode::InvalidArgument, "trace has a DUpdate before InitD");
      Rational c = parse_rational(e.get("candidate"));
      if (c > *D) D = c;
    }
  }
  if (!D) fail(ErrorCode::InvalidArgument, "trace has no InitD event");
  return *D > 2 ? *D : Rational(2);
}

Outcome run_replay(Options o) {
  Json recorded;
  try {
    recorded = Json::parse(read_file(o.replay));
  } catch (const Json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("replay file is not JSON: ") + e.what());
  }
  Report rep = Report::from_json(recorded);
  if (rep.command != "critical") fail(ErrorCode::InvalidArgument, "replay needs a critical report");
  if (!rep.result.is_object() || !rep.result.contains("trace"))
    fail(ErrorCode::InvalidArgument, "replay needs a report written with --trace");
  std::vector<TraceEvent> old_trace;
  for (const auto& e : rep.result.at("trace")) old_trace.push_back(trace_event_from_json(e));
  const std::string expression = rep.input.at("expression").get<std::string>();
  o.order = rep.input.at("order").get<unsigned>();
  o.max_depth = rep.input.at("max_depth").get<unsigned>();
  o.trace = true;

  Outcome now = critical_outcome(o, expression);
  std::vector<TraceEvent> new_trace;
  for (const auto& e : now.result.at("trace")) new_trace.push_back(trace_event_from_json(e));
  bool identical = old_trace.size() == new_trace.size();
  std::size_t first_diff = std::min(old_trace.size(), new_trace.size());
  for (std::size_t i = 0; identical && i < old_trace.size(); ++i) {
    if (!same_event(old_trace[i], new_trace[i])) {
      identical = false;
      first_diff = i;
    }
  }
  const Rational folded = fold_p_gamma(old_trace);
  const Rational recorded_p = rational_from_json(rep.result.at("p_gamma"));
  const Rational p = rational_from_json(now.result.at("p_gamma"));
  const bool match = identical && folded == recorded_p && p == recorded_p;

  Json replay{{"source", o.replay},
              {"expression", expression},
              {"events", old_trace.size()},
              {"trace_identical", identical},
              {"folded_p_gamma", rational_json(folded)},
              {"recorded_p_gamma", rational_json(recorded_p)},
              {"match", match}};
  if (!identical) replay["first_difference"] = first_diff;
  now.result["replay"] = replay;
  std::ostringstream t;
  t << "replayed " << old_trace.size() << " events from " << o.replay << "\n"
    << "trace identical: " << (identical ? "yes" : "no") << "\n"
    << "folded p_gamma = " << to_string(folded) << ", recorded = " << to_string(recorded_p)
    << ", recomputed = " << to_string(p) << "\n"
    << (match ? "replay ok\n" : "replay MISMATCH\n");
  now.text = t.str();
  if (!match) now.exit_code = kInternal;
  return now;
}

Outcome run_diagram(const Options& o) {
  ExpandedGerm g = load_germ(o.expression, o.order);
  NewtonDiagram full = diagram(taylor_support(g.poly), false);
  NewtonDiagram red = reduced_diagram(g.poly);
  ExtRational p0v = p0(g.poly);
  Json result{{"diagram", to_json(full)}, {"reduced", to_json(red)}, {"p0", rational_json(p0v)}};
  std::ostringstream t;
  t << to_string(full) << "\n" << to_string(red) << "\np0 = " << p0v.to_string() << "\n";
  try {
    ExtRational d = d_gamma(red, p0v);
    result["entry_height"] = p0v.is_infinite() ? rational_json(ExtRational::infinity())
                                               : rational_json(entry_height(red, p0v.value()));
    result["d_gamma"] = rational_json(d);
    t << "d_gamma = " << d.to_string() << "\n";
  } catch (const Error& e) {
    result["d_gamma"] = nullptr;
    t << "d_gamma: " << error_code_name(e.code()) << ": " << e.what() << "\n";
  }
  return {result, to_json(g.certification()), kOk, t.str()};
}

ResolveConfig resolve_config(const Options& o) {
  ResolveConfig cfg;
  cfg.order = std::max(o.order, cfg.order);
  cfg.max_multiplicity_rounds = o.max_depth;
  cfg.seed = o.seed;
  return cfg;
}

std::vector<RegionTree> resolve_trees(const Options& o, const ExpandedGerm& g) {
  ResolveConfig cfg = resolve_config(o);
  if (o.all_quadrants) return resolve_quadrants(g.poly, cfg);
  return {resolve(g.poly, cfg)};
}

void render_region(std::ostream& t, const RegionNode& n, unsigned indent) {
  t << std::string(indent * 2, ' ') << region_kind_name(n.kind) << " [" << n.lower.to_string() << ", "
    << n.upper.to_string() << ")";
  if (!n.center.is_zero()) t << " center " << n.center.to_string();
  if (n.kind == RegionNode::Kind::BadTranslated) t << " root " << n.root << " s=" << n.multiplicity;
  if (n.is_leaf())
    t << "  |P| ~ v^" << to_string(n.a) << " |theta - c|^" << to_string(n.b) << "  C=" << decimal(n.comparability);
  t << "\n";
  for (const auto& c : n.children) render_region(t, c, indent + 1);
}

Outcome run_resolve(const Options& o) {
  ExpandedGerm g = expand(parse(o.expression), std::max(o.order, resolve_config(o).order));
  Json trees = Json::array();
  std::ostringstream t;
  for (const auto& tree : resolve_trees(o, g)) {
    trees.push_back(to_json(tree));
    t << "quadrant " << tree.quadrant << ": " << leaves(tree).size() << " leaves, S=" << tree.S
      << ", depth=" << tree.depth << ", epsilon=" << decimal(tree.epsilon) << "\n";
    for (const auto& r : tree.roots) render_region(t, r, 1);
  }
  return {{{"trees", trees}}, to_json(g.certification()), kOk, t.str()};
}

Outcome run_verify(const Options& o) {
  ExpandedGerm g = expand(parse(o.expression), std::max(o.order, resolve_config(o).order));
  VerifyConfig vc;
  vc.coverage_samples = o.samples.value_or(vc.coverage_samples);
  vc.seed = o.seed;
  Json out = Json::array();
  bool ok = true;
  std::ostringstream t;
  for (const auto& tree : resolve_trees(o, g)) {
    VerifyReport v = verify(tree, vc);
    ok = ok && v.ok;
    double worst = 1;
    for (const auto& l : v.leaves) worst = std::max(worst, l.comparability);
    out.push_back({{"quadrant", tree.quadrant},
                   {"leaves", leaves(tree).size()},
                   {"S", tree.S},
                   {"depth", tree.depth},
                   {"epsilon", rational_json(Rational(tree.epsilon))},
                   {"verification", to_json(v)}});
    t << "quadrant " << tree.quadrant << ": " << v.coverage_samples << " samples, " << v.uncovered << " uncovered, "
      << v.overlapping << " overlapping, " << v.leaves.size() << " leaves, worst comparability " << decimal(worst)
      << (v.ok ? ", ok" : ", FAILED") << "\n";
  }
  Outcome r{{{"ok", ok}, {"trees", out}}, to_json(g.certification()), ok ? kOk : kInternal, t.str()};
  return r;
}

void maybe_write_tsv(const Options& o, const auto& report, std::size_t index, std::size_t count) {
  if (o.tsv.empty()) return;
  std::string path = o.tsv;
  if (count > 1) path += "." + std::to_string(index);
  std::ofstream f(path);
  if (!f) fail(ErrorCode::InvalidArgument, "cannot write " + path);
  write_tsv(f, report);
}

Outcome run_knapp(const Options& o) {
  Germ gamma = Germ::from_expression(o.expression, o.order);
  KnappConfig cfg;
  cfg.grid_level = o.grid_level;
  cfg.op.v_samples = o.samples.value_or(cfg.op.v_samples);
  cfg.op.theta_samples = o.theta_samples;
  cfg.op.workers = o.workers;
  std::vector<double> ps = o.ps.empty() ? std::vector<double>{2, 4} : o.ps;
  Json reports = Json::array();
  std::ostringstream t;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    ProbeReport r = knapp_probe(gamma, ps[i], default_knapp_deltas(), cfg);
    maybe_write_tsv(o, r, i, ps.size());
    reports.push_back(to_json(r));
    t << "p = " << decimal(ps[i]) << ": slope " << decimal(r.fitted_slope) << ", predicted "
      << to_string(r.predicted_slope) << (r.within_tolerance ? " (within " : " (outside ") << decimal(r.tolerance)
      << ")\n";
    for (std::size_t k = 0; k < r.ratios.size(); ++k)
      t << "  " << r.parameter_name << "=" << decimal(r.parameters[k]) << "  ratio " << decimal(r.ratios[k]) << "\n";
  }
  return {{{"reports", reports}}, numeric_certification(), kOk, t.str()};
}

Outcome run_scaling(const Options& o) {
  ExpandedGerm g = load_germ(o.expression, o.order);
  ScalingConfig cfg;
  cfg.grid_level = o.grid_level;
  cfg.op.theta_samples = o.theta_samples;
  cfg.op.workers = o.workers;
  if (o.samples) cfg.v_per_box = *o.samples;
  std::vector<double> ps = o.ps.empty() ? std::vector<double>{2} : o.ps;
  Json reports = Json::array();
  std::ostringstream t;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    ProbeReport r = scaling_probe(g.poly, ps[i], cfg);
    maybe_write_tsv(o, r, i, ps.size());
    reports.push_back(to_json(r));
    t << "p = " << decimal(ps[i]) << ": slope " << decimal(r.fitted_slope) << ", predicted "
      << to_string(r.predicted_slope) << (r.within_tolerance ? " (within " : " (outside ") << decimal(r.tolerance)
      << ")\n";
  }
  return {{{"reports", reports}}, numeric_certification(), kOk, t.str()};
}

Outcome run_blowup(const Options& o) {
  Germ gamma = Germ::from_expression(o.expression, o.order);
  BlowupConfig cfg;
  cfg.first = o.first;
  cfg.p = o.blowup_p;
  cfg.workers = o.workers;
  BlowupReport r;
  if (o.family == "auto") {
    r = degenerate_blowup_probe(load_germ(o.expression, o.order), gamma, o.refinements, cfg);
  } else {
    r = blowup_probe(gamma, o.family == "lines" ? TubeFamily::Lines : TubeFamily::Horizontal, o.refinements, cfg);
  }
  maybe_write_tsv(o, r, 0, 1);
  std::ostringstream t;
  t << "family " << r.family << ", p = " << decimal(r.p) << "\n";
  for (std::size_t k = 0; k < r.ratios.size(); ++k)
    t << "  k=" << r.refinements[k] << "  width " << decimal(r.widths[k]) << "  ratio " << decimal(r.ratios[k]) << "\n";
  t << "increasing: " << (r.increasing ? "yes" : "no") << ", max/min " << decimal(r.max_over_min) << "\n";
  return {to_json(r), numeric_certification(), kOk, t.str()};
}

Json input_echo(const std::string& command, const Options& o) {
  Json in{{"expression", o.expression}, {"order", o.order}, {"max_depth", o.max_depth}, {"seed", o.seed}};
  if (!o.file.empty()) in["file"] = o.file;
  if (o.samples) in["samples"] = *o.samples;
  if (command == "critical") {
    in["trace"] = o.trace;
    if (!o.replay.empty()) in["replay"] = o.replay;
  }
  if (command == "resolve" || command == "verify-resolution") in["all_quadrants"] = o.all_quadrants;
  if (command == "probe-knapp" || command == "probe-scaling") {
    in["p"] = o.ps;
    in["grid_level"] = o.grid_level;
    in["theta_samples"] = o.theta_samples;
  }
  if (command == "probe-blowup") {
    in["family"] = o.family;
    in["refinements"] = o.refinements;
    in["first"] = o.first;
    in["p"] = o.blowup_p;
  }
  return in;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Newton-polygon critical exponents for curve maximal operators", "newton-critic"};
  app.require_subcommand(1);
  app.add_option("--order", o.order, "Truncation order for transcendental inputs")->capture_default_str();
  app.add_option("--max-depth", o.max_depth, "Recursion depth limit")->capture_default_str();
  app.add_flag("--json", o.json, "Emit the JSON report");
  app.add_option("--seed", o.seed, "Seed for sampled searches and checks")->capture_default_str();
  app.add_option("--samples", o.samples, "Coverage samples, or v-samples for probes");

  auto add_input = [&](CLI::App* sub) {
    auto* expr = sub->add_option("expression", o.expression, "gamma(v, theta)");
    auto* file = sub->add_option("--file", o.file, "Read the expression from a file");
    expr->excludes(file);
    sub->fallthrough();
  };
  auto add_probe_common = [&](CLI::App* sub) {
    sub->add_option("--workers", o.workers, "Worker threads (0: all cores)");
    sub->add_option("--tsv", o.tsv, "Write (parameter, ratio) pairs");
  };

  CLI::App* classify_cmd = app.add_subcommand("classify", "Strong degeneracy classification");
  add_input(classify_cmd);
  CLI::App* critical_cmd = app.add_subcommand("critical", "Critical exponent p_gamma");
  add_input(critical_cmd);
  critical_cmd->add_flag("--trace", o.trace, "Include the recursion trace");
  critical_cmd->add_option("--replay", o.replay, "Re-run a recorded --trace report and compare");
  CLI::App* diagram_cmd = app.add_subcommand("diagram", "Newton diagram, reduced diagram and distance");
  add_input(diagram_cmd);
  CLI::App* resolve_cmd = app.add_subcommand("resolve", "Region tree of a polynomial");
  add_input(resolve_cmd);
  resolve_cmd->add_flag("--all-quadrants", o.all_quadrants, "Resolve all four reflections");
  CLI::App* verify_cmd = app.add_subcommand("verify-resolution", "Sampled coverage and comparability check");
  add_input(verify_cmd);
  verify_cmd->add_flag("--all-quadrants", o.all_quadrants, "Resolve all four reflections");
  CLI::App* knapp_cmd = app.add_subcommand("probe-knapp", "Knapp ball probe");
  add_input(knapp_cmd);
  add_probe_common(knapp_cmd);
  knapp_cmd->add_option("--p", o.ps, "Exponents, repeated or comma separated (default 2,4)")
      ->allow_extra_args(false)
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  knapp_cmd->add_option("--grid-level", o.grid_level, "Grid step 2^-level")->capture_default_str();
  knapp_cmd->add_option("--theta-samples", o.theta_samples)->capture_default_str();
  CLI::App* scaling_cmd = app.add_subcommand("probe-scaling", "Dyadic box scaling probe");
  add_input(scaling_cmd);
  add_probe_common(scaling_cmd);
  scaling_cmd->add_option("--p", o.ps, "Exponents, repeated or comma separated (default 2)")
      ->allow_extra_args(false)
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  scaling_cmd->add_option("--grid-level", o.grid_level, "Grid step 2^-level")->capture_default_str();
  scaling_cmd->add_option("--theta-samples", o.theta_samples)->capture_default_str();
  CLI::App* blowup_cmd = app.add_subcommand("probe-blowup", "Tube growth across refinements");
  add_input(blowup_cmd);
  add_probe_common(blowup_cmd);
  blowup_cmd->add_option("--family", o.family, "auto, lines or horizontal")
      ->check(CLI::IsMember({"auto", "lines", "horizontal"}))
      ->capture_default_str();
  blowup_cmd->add_option("--refinements", o.refinements)->capture_default_str();
  blowup_cmd->add_option("--first", o.first, "First refinement k")->capture_default_str();
  blowup_cmd->add_option("--p", o.blowup_p)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInput;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.command = command;
  Outcome outcome;
  std::string failure_text;
  try {
    if (!o.file.empty()) o.expression = trimmed(read_file(o.file));
    if (o.expression.empty() && !(command == "critical" && !o.replay.empty()))
      fail(ErrorCode::InvalidArgument, command + " needs an expression or --file");
    report.input = input_echo(command, o);
    if (command == "classify") outcome = run_classify(o);
    else if (command == "critical") outcome = o.replay.empty() ? critical_outcome(o, o.expression) : run_replay(o);
    else if (command == "diagram") outcome = run_diagram(o);
    else if (command == "resolve") outcome = run_resolve(o);
    else if (command == "verify-resolution") outcome = run_verify(o);
    else if (command == "probe-knapp") outcome = run_knapp(o);
    else if (command == "probe-scaling") outcome = run_scaling(o);
    else if (command == "probe-blowup") outcome = run_blowup(o);
  } catch (const CriticalError& e) {
    outcome.exit_code = exit_code_for(e.code());
    report.error = Report::Failure{error_code_name(e.code()), e.what(), e.offset()};
    Json partial = Json::array();
    for (const auto& ev : e.partial_trace()) partial.push_back(to_json(ev));
    outcome.result = {{"partial", true}, {"trace", partial}};
    failure_text = render_trace(e.partial_trace());
  } catch (const Error& e) {
    outcome.exit_code = exit_code_for(e.code());
    report.error = Report::Failure{error_code_name(e.code()), e.what(), e.offset()};
  } catch (const std::exception& e) {
    outcome.exit_code = kInternal;
    report.error = Report::Failure{"Internal", e.what(), std::nullopt};
  }
  if (report.error && report.error->code == "TruncationInsufficient")
    report.error->message += "; rerun with a larger --order (e.g. --order " + std::to_string(2 * o.order) + ")";

  report.result = outcome.result;
  report.certification = outcome.certification;
  report.exit_code = outcome.exit_code;
  report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (o.json) {
    out << report.to_json().dump(2) << "\n";
  } else {
    out << outcome.text << failure_text;
  }
  if (report.error) {
    err << "error: " << report.error->code << ": " << report.error->message;
    if (report.error->offset) err << " (at offset " << *report.error->offset << ")";
    err << "\n";
  }
  return outcome.exit_code;
}

}  // namespace nc::cli
