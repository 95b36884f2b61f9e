#include <gtest/gtest.h>

#include <sstream>

#include "cli.hpp"
#include "newton_critic/report.hpp"
#include "test_support.hpp"

using namespace nc;

namespace {

Report round_trip(const Report& r) { return Report::from_json(Json::parse(r.to_json().dump())); }

struct CliRun {
  int code;
  Json report;
  std::string err;
};

CliRun run_json(std::vector<std::string> args) {
  args.insert(args.begin(), "--json");
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, Json::parse(out.str()), err.str()};
}

Rational exact(const Json& j) { return rational_from_json(j); }

}  // namespace

TEST(Report, RationalEncoding) {
  Json j = rational_json(make_rational(5, 2));
  EXPECT_EQ(j["exact"], "5/2");
  EXPECT_DOUBLE_EQ(j["decimal"].get<double>(), 2.5);
  EXPECT_EQ(rational_from_json(j), make_rational(5, 2));
  Json inf = rational_json(ExtRational::infinity());
  EXPECT_EQ(inf["exact"], "inf");
  EXPECT_TRUE(inf["decimal"].is_null());
  EXPECT_THROW(rational_from_json(inf), Error);
}

TEST(Report, RandomRationalsRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> num(-100000, 100000), den(1, 5000);
  for (int i = 0; i < 500; ++i) {
    Rational q = make_rational(num(rng), den(rng));
    Json j = Json::parse(rational_json(q).dump());
    EXPECT_EQ(rational_from_json(j), q);
  }
}

TEST(Report, ErrorReportRoundTrip) {
  Report r;
  r.command = "classify";
  r.input = {{"expression", "v*)"}, {"order", 12}};
  r.exit_code = 2;
  r.elapsed_ms = 0.125;
  r.error = Report::Failure{"Syntax", "unexpected ')'", 2};
  EXPECT_EQ(round_trip(r), r);
  r.error->offset.reset();
  EXPECT_EQ(round_trip(r), r);
}

TEST(Report, RejectsOtherSchemas) {
  Report r;
  r.command = "diagram";
  Json j = r.to_json();
  j["schema"] = "newton-critic/0";
  EXPECT_THROW(Report::from_json(j), Error);
}

// serialize, print, parse, deserialize: equal reports for random germs
TEST(Report, RandomGermReportsRoundTrip) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> nterms(3, 6);
  int critical_reports = 0;
  for (int i = 0; i < 60; ++i) {
    ExpandedGerm g{nc::testing::random_sparse(rng, nterms(rng), 8), kDefaultOrder, true};
    Report r;
    r.input = {{"expression", g.poly.to_string()}};
    r.elapsed_ms = i * 0.5;
    r.command = "diagram";
    r.result = {{"reduced", to_json(reduced_diagram(g.poly))}, {"p0", rational_json(p0(g.poly))}};
    EXPECT_EQ(round_trip(r), r);
    try {
      CriticalReport c = compute(g);
      r.command = "critical";
      r.result = to_json(c, true);
      r.certification = to_json(c.certification);
      Report back = round_trip(r);
      EXPECT_EQ(back, r);
      ASSERT_EQ(back.result["trace"].size(), c.trace.size());
      for (std::size_t k = 0; k < c.trace.size(); ++k) {
        TraceEvent e = trace_event_from_json(back.result["trace"][k]);
        EXPECT_EQ(e.kind, c.trace[k].kind);
        EXPECT_EQ(e.depth, c.trace[k].depth);
        EXPECT_EQ(e.fields, c.trace[k].fields);
      }
      EXPECT_EQ(exact(back.result["p_gamma"]), c.p_gamma);
      ++critical_reports;
    } catch (const Error&) {
    }
  }
  EXPECT_GT(critical_reports, 20);
}

TEST(Report, ProbeNumbersAreExact) {
  ProbeReport p;
  p.kind = "knapp";
  p.parameter_name = "delta";
  p.parameters = {0.125, 0.0625};
  p.ratios = {0.1, 1.0 / 3.0};
  p.predicted_slope = make_rational(1, 2);
  Json j = to_json(p);
  for (std::size_t i = 0; i < p.ratios.size(); ++i)
    EXPECT_EQ(to_double(exact(j["ratios"][i])), p.ratios[i]);
  EXPECT_EQ(j["parameters"][0]["exact"], "1/8");
}

TEST(Cli, GoldenCritical) {
  CliRun r = run_json({"critical", "(theta - v)^3 * v + v^3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(exact(r.report["result"]["p_gamma"]), Rational(3));
  EXPECT_EQ(r.report["schema"], kSchemaVersion);
}

TEST(Cli, GoldenClassify) {
  CliRun r = run_json({"classify", "v*theta + v^2*theta^2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.report["result"]["verdict"], "Degenerate");
  EXPECT_EQ(r.report["result"]["case"], 2);
}

TEST(Cli, InputErrorsExitTwo) {
  CliRun r = run_json({"critical", "theta^2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.report["error"]["code"], "DegenerateInput");
  EXPECT_EQ(run_json({"classify", "v*)"}).code, 2);
  std::ostringstream out, err;
  EXPECT_EQ(cli::run({"no-such-command"}, out, err), 2);
  EXPECT_EQ(cli::run({"classify"}, out, err), 2);
}

TEST(Cli, PartialReportsExitThree) {
  CliRun r = run_json({"critical", "--max-depth", "0", "(theta+exp(v)-1)^3*v+v^2"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.report["error"]["code"], "MaxDepthExceeded");
  EXPECT_TRUE(r.report["result"]["partial"].get<bool>());
  EXPECT_FALSE(r.report["result"]["trace"].empty());
  CliRun t = run_json({"critical", "--order", "6", "(theta+exp(v)-1)^3*v+v^2"});
  EXPECT_EQ(t.code, 3);
  EXPECT_EQ(t.report["error"]["code"], "TruncationInsufficient");
}

TEST(Cli, ReportRoundTripsThroughJson) {
  for (auto args : std::vector<std::vector<std::string>>{{"classify", "v*(exp(theta)-1)+v^2*theta"},
                                                         {"critical", "--trace", "v*(1+theta^4)"},
                                                         {"diagram", "theta^2+v*theta^3"},
                                                         {"resolve", "theta^3-3*v^2*theta+2*v^3"},
                                                         {"critical", "theta^2"}}) {
    CliRun r = run_json(args);
    Report rep = Report::from_json(r.report);
    EXPECT_EQ(rep.to_json(), r.report);
    EXPECT_EQ(round_trip(rep), rep);
  }
}
