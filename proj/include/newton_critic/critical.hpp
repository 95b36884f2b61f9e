#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "newton_critic/algebraic.hpp"
#include "newton_critic/branch.hpp"
#include "newton_critic/error.hpp"
#include "newton_critic/expr.hpp"
#include "newton_critic/newton.hpp"

namespace nc {

struct EdgeFrame {
  PuiseuxPoly germ;
  ExponentPair anchor;
  Edge edge;

  // p + q*m for any point of the edge
  Rational weighted_degree() const { return anchor.p + edge.slope * anchor.q; }
};

struct EdgeKappa {
  PuiseuxPoly poly;  // sum over edge points with q >= 2 of c q(q-1) v^p theta^(q-2)
  KPoly in_r;        // kappa(v, r v^m) = v^e kappa(r)
  Rational e;
};

// Terms of g lying on the closed edge.
PuiseuxPoly edge_polynomial(const PuiseuxPoly& g, const Edge& edge);
EdgeKappa edge_kappa(const EdgeFrame& frame);

// c v^b ((theta + r v^w)^W - (r v^w)^W)
struct BinomialPattern {
  unsigned W = 0;
  Coefficient c;
  Rational b;
  Coefficient r;
  Rational w;
};

// Matches an edge polynomial against the binomial shape; W >= 3 only.
std::optional<BinomialPattern> match_binomial(const PuiseuxPoly& edge_poly);

struct TraceEvent {
  enum class Kind { InitD, EdgeVisited, RootFound, Substitution, DUpdate, ScenarioTwoCollapse, Claim54Check };
  Kind kind;
  unsigned depth = 0;
  std::vector<std::pair<std::string, std::string>> fields;

  const std::string& get(const std::string& key) const;
  std::string to_string() const;
};

const char* trace_kind_name(TraceEvent::Kind kind);

struct CriticalConfig {
  unsigned max_depth = 32;
  // v-order to which collapse series are computed for exact inputs
  unsigned order = kDefaultOrder;
};

struct CriticalReport {
  Rational p_gamma;
  Rational D_gamma;
  std::vector<TraceEvent> trace;
  Certification certification;
};

// Raised for failures inside the recursion; carries the trace so far.
class CriticalError : public Error {
 public:
  CriticalError(const Error& cause, std::vector<TraceEvent> partial)
      : Error(cause.code(), cause.what()), partial_trace_(std::move(partial)) {}
  const std::vector<TraceEvent>& partial_trace() const { return partial_trace_; }

 private:
  std::vector<TraceEvent> partial_trace_;
};

// Shift series of a Scenario Two collapse at the anchor of frame.
BranchSeries scenario_two_collapse(const EdgeFrame& frame, const BinomialPattern& pattern, const Rational& order);

CriticalReport compute(const ExpandedGerm& g, const CriticalConfig& config = {});

}  // namespace nc
