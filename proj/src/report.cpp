#include "newton_critic/report.hpp"

#include <cmath>

namespace nc {

namespace {

Json number_json(double x) {
  if (std::isnan(x)) return {{"exact", "nan"}, {"decimal", nullptr}};
  if (std::isinf(x)) return {{"exact", x > 0 ? "inf" : "-inf"}, {"decimal", nullptr}};
  return {{"exact", to_string(Rational(x))}, {"decimal", x}};
}

Json numbers_json(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number_json(x));
  return a;
}

// Canonical p/q text only; decimal display values stay strings.
bool is_rational_text(const std::string& s) {
  if (s == "inf") return true;
  try {
    return to_string(parse_rational(s)) == s;
  } catch (const std::exception&) {
    return false;
  }
}

Json bound_json(const Bound& b) {
  if (b.is_infinite()) return "inf";
  return b.series->to_string();
}

}  // namespace

Json rational_json(const Rational& q) { return {{"exact", to_string(q)}, {"decimal", to_double(q)}}; }

Json rational_json(const ExtRational& q) {
  if (q.is_infinite()) return {{"exact", "inf"}, {"decimal", nullptr}};
  return rational_json(q.value());
}

Rational rational_from_json(const Json& j) {
  const std::string text = j.is_object() ? j.at("exact").get<std::string>() : j.get<std::string>();
  if (text == "inf") fail(ErrorCode::InvalidArgument, "expected a finite rational, found inf");
  return parse_rational(text);
}

Json to_json(const Certification& c) {
  Json j{{"exact", c.exact}, {"label", c.to_string()}};
  if (!c.exact) j["order"] = c.order;
  return j;
}

Json to_json(const ExponentPair& e) { return {{"p", rational_json(e.p)}, {"q", e.q}}; }

Json to_json(const NewtonDiagram& d) {
  Json vs = Json::array();
  for (const auto& v : d.vertices) vs.push_back(to_json(v));
  Json es = Json::array();
  for (const auto& e : d.edges) {
    es.push_back({{"left", to_json(e.left)},
                  {"right", to_json(e.right)},
                  {"line", {{"a", rational_json(e.line.a)}, {"b", rational_json(e.line.b)}, {"c", rational_json(e.line.c)}}},
                  {"slope", rational_json(e.slope)}});
  }
  return {{"reduced", d.reduced}, {"vertices", vs}, {"edges", es}};
}

Json to_json(const Classification& c) {
  Json j{{"verdict", c.degenerate() ? "Degenerate" : "NotStronglyDegenerate"},
         {"case", c.degenerate() ? Json(c.degenerate_case) : Json(nullptr)},
         {"satisfied_cases", c.satisfied_cases},
         {"certification", to_json(c.certification)}};
  if (c.vertex) j["vertex"] = to_json(*c.vertex);
  if (c.exponent) j["exponent"] = rational_json(*c.exponent);
  if (c.degenerate_case == 2 || c.degenerate_case == 3) j["tilde"] = c.tilde.to_string();
  j["curvature"] = c.curvature.to_string();
  return j;
}

Json to_json(const TraceEvent& e) {
  Json fields = Json::object();
  for (const auto& [k, v] : e.fields) {
    if (is_rational_text(v))
      fields[k] = v == "inf" ? rational_json(ExtRational::infinity()) : rational_json(parse_rational(v));
    else
      fields[k] = v;
  }
  return {{"kind", trace_kind_name(e.kind)}, {"depth", e.depth}, {"fields", fields}};
}

TraceEvent trace_event_from_json(const Json& j) {
  static const TraceEvent::Kind kinds[] = {
      TraceEvent::Kind::InitD,  TraceEvent::Kind::EdgeVisited,         TraceEvent::Kind::RootFound,
      TraceEvent::Kind::Substitution, TraceEvent::Kind::DUpdate, TraceEvent::Kind::ScenarioTwoCollapse,
      TraceEvent::Kind::Claim54Check};
  const std::string name = j.at("kind").get<std::string>();
  TraceEvent e{TraceEvent::Kind::InitD, 0, {}};
  bool found = false;
  for (auto k : kinds) {
    if (name == trace_kind_name(k)) {
      e.kind = k;
      found = true;
    }
  }
  if (!found) fail(ErrorCode::InvalidArgument, "unknown trace event kind " + name);
  e.depth = j.at("depth").get<unsigned>();
  for (const auto& [k, v] : j.at("fields").items())
    e.fields.emplace_back(k, v.is_object() ? v.at("exact").get<std::string>() : v.get<std::string>());
  return e;
}

Json to_json(const CriticalReport& r, bool with_trace) {
  Json j{{"p_gamma", rational_json(r.p_gamma)},
         {"D_gamma", rational_json(r.D_gamma)},
         {"certification", to_json(r.certification)}};
  if (with_trace) {
    Json t = Json::array();
    for (const auto& e : r.trace) t.push_back(to_json(e));
    j["trace"] = t;
  }
  return j;
}

Json to_json(const RegionNode& n) {
  Json j{{"kind", region_kind_name(n.kind)},
         {"origin", n.origin},
         {"center", n.center.to_string()},
         {"lower", bound_json(n.lower)},
         {"upper", bound_json(n.upper)},
         {"m", rational_json(n.m)},
         {"dominance", number_json(n.dominance)}};
  if (n.kind == RegionNode::Kind::BadTranslated) {
    j["root"] = n.root;
    j["root_approx"] = number_json(n.root_approx);
    j["multiplicity"] = n.multiplicity;
    if (!n.translation.is_zero()) {
      j["translation"] = n.translation.to_string();
      j["translation_order"] = rational_json(n.translation_order);
    }
  }
  if (n.is_leaf()) {
    j["a"] = rational_json(n.a);
    j["b"] = rational_json(n.b);
    j["comparability"] = number_json(n.comparability);
    j["exact_constant"] = n.exact_constant;
  }
  Json kids = Json::array();
  for (const auto& c : n.children) kids.push_back(to_json(c));
  j["children"] = kids;
  return j;
}

Json to_json(const RegionTree& t) {
  Json roots = Json::array();
  for (const auto& r : t.roots) roots.push_back(to_json(r));
  return {{"quadrant", t.quadrant},
          {"polynomial", t.polynomial.to_string()},
          {"epsilon", number_json(t.epsilon)},
          {"M", to_string(t.M)},
          {"C_choices", numbers_json(t.C_choices)},
          {"S", t.S},
          {"depth", t.depth},
          {"leaves", leaves(t).size()},
          {"regions", roots}};
}

Json to_json(const VerifyReport& r) {
  Json ls = Json::array();
  for (const auto& l : r.leaves) {
    ls.push_back({{"path", l.path},
                  {"samples", l.samples},
                  {"min_ratio", number_json(l.min_ratio)},
                  {"max_ratio", number_json(l.max_ratio)},
                  {"comparability", number_json(l.comparability)},
                  {"ok", l.ok}});
  }
  return {{"coverage_samples", r.coverage_samples},
          {"uncovered", r.uncovered},
          {"overlapping", r.overlapping},
          {"ok", r.ok},
          {"leaves", ls}};
}

Json to_json(const ProbeReport& r) {
  return {{"kind", r.kind},
          {"p", number_json(r.p)},
          {"parameter", r.parameter_name},
          {"parameters", numbers_json(r.parameters)},
          {"ratios", numbers_json(r.ratios)},
          {"fit_from", r.fit_from},
          {"fitted_slope", number_json(r.fitted_slope)},
          {"residual", number_json(r.residual)},
          {"predicted_slope", rational_json(r.predicted_slope)},
          {"provenance", r.provenance},
          {"tolerance", number_json(r.tolerance)},
          {"within_tolerance", r.within_tolerance},
          {"notes", r.notes}};
}

Json to_json(const BlowupReport& r) {
  return {{"kind", "blowup"},
          {"family", r.family},
          {"degenerate", r.degenerate},
          {"case", r.degenerate ? Json(r.degenerate_case) : Json(nullptr)},
          {"p", number_json(r.p)},
          {"refinements", r.refinements},
          {"widths", numbers_json(r.widths)},
          {"ratios", numbers_json(r.ratios)},
          {"growth", numbers_json(r.growth)},
          {"increasing", r.increasing},
          {"max_over_min", number_json(r.max_over_min)}};
}

Json Report::to_json() const {
  Json j{{"schema", kSchemaVersion},
         {"command", command},
         {"input", input},
         {"result", result},
         {"certification", certification},
         {"timing", {{"elapsed_ms", elapsed_ms}}},
         {"exit_code", exit_code}};
  if (error) {
    Json e{{"code", error->code}, {"message", error->message}};
    if (error->offset) e["offset"] = *error->offset;
    j["error"] = e;
  } else {
    j["error"] = nullptr;
  }
  return j;
}

Report Report::from_json(const Json& j) {
  if (j.at("schema").get<std::string>() != kSchemaVersion)
    fail(ErrorCode::InvalidArgument, "unsupported report schema " + j.at("schema").get<std::string>());
  Report r;
  r.command = j.at("command").get<std::string>();
  r.input = j.at("input");
  r.result = j.at("result");
  r.certification = j.at("certification");
  r.elapsed_ms = j.at("timing").at("elapsed_ms").get<double>();
  r.exit_code = j.at("exit_code").get<int>();
  const Json& e = j.at("error");
  if (!e.is_null()) {
    Failure f{e.at("code").get<std::string>(), e.at("message").get<std::string>(), std::nullopt};
    if (e.contains("offset")) f.offset = e.at("offset").get<std::size_t>();
    r.error = f;
  }
  return r;
}

bool Report::operator==(const Report& o) const {
  return command == o.command && input == o.input && result == o.result && certification == o.certification &&
         elapsed_ms == o.elapsed_ms && exit_code == o.exit_code && error == o.error;
}

}  // namespace nc
