#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "newton_critic/critical.hpp"
#include "newton_critic/puiseux.hpp"

namespace nc {

// theta-free series in v, or +infinity
struct Bound {
  std::optional<PuiseuxPoly> series;

  static Bound infinity() { return {}; }
  static Bound of(PuiseuxPoly s) { return {std::move(s)}; }
  bool is_infinite() const { return !series.has_value(); }
  std::string to_string() const { return series ? series->to_string() : "inf"; }
};

// Half-open band lower(v) <= theta < upper(v) in one reflected quadrant.
struct RegionNode {
  enum class Kind { VertexDominant, EdgeGood, BadTranslated };
  Kind kind = Kind::VertexDominant;
  PuiseuxPoly center;
  Bound lower, upper;
  // |P| ~ v^a |theta - center|^b on leaves
  Rational a, b;
  // ratio bounds [1/comparability, comparability] on leaves
  double comparability = 1;
  bool exact_constant = false;
  // C of the frame the region was cut from
  double dominance = 4;
  // edge slope of the band, or of the edge below a vertex region
  Rational m;
  // root of the edge polynomial for bad regions
  std::string root;
  double root_approx = 0;
  unsigned multiplicity = 0;
  // the accumulated center of the children; BadTranslated with s > 1 only
  PuiseuxPoly translation;
  Rational translation_order;
  std::string origin;
  std::vector<RegionNode> children;

  bool is_leaf() const { return children.empty(); }
};

const char* region_kind_name(RegionNode::Kind kind);

struct RegionTree {
  // "++", "+-", "-+" or "--": signs applied to (v, theta)
  std::string quadrant = "++";
  PuiseuxPoly polynomial;  // P after the reflection
  std::vector<RegionNode> roots;
  double epsilon = 0.25;
  Integer M = 1;
  std::vector<double> C_choices;
  // largest multiplicity of a bad root anywhere in the tree
  unsigned S = 0;
  unsigned depth = 0;  // longest BadTranslated chain
};

struct ResolveConfig {
  unsigned order = 16;
  unsigned max_multiplicity_rounds = 8;
  double eps_hint = 0.25;
  // samples used while searching for C and epsilon
  unsigned search_samples = 1500;
  unsigned search_leaf_samples = 120;
  std::uint64_t seed = 1;
};

inline constexpr double kComparabilityCap = 65536.0;

struct MultiplicityData {
  unsigned s = 0;
  unsigned bound = 0;     // q_left - q_right
  Rational exponent;      // e - s m
};

// Multiplicity of a root of the frame's edge polynomial, with the bounds
// s <= q_left - q_right and e - s m >= 0 checked.
MultiplicityData multiplicity_data(const EdgeFrame& frame, const RealRoot& root);

// Resolution on the quadrant v, theta >= 0.
RegionTree resolve(const PuiseuxPoly& P, const ResolveConfig& config = {});
// One tree per reflection; v -> -v requires integer v-exponents.
std::vector<RegionTree> resolve_quadrants(const PuiseuxPoly& P, const ResolveConfig& config = {});

struct LeafCheck {
  std::string path;
  unsigned samples = 0;
  double min_ratio = 0;
  double max_ratio = 0;
  double comparability = 0;
  bool ok = false;
};

struct VerifyReport {
  unsigned coverage_samples = 0;
  unsigned uncovered = 0;
  unsigned overlapping = 0;
  std::vector<LeafCheck> leaves;
  bool ok = false;
};

struct VerifyConfig {
  unsigned coverage_samples = 10000;
  unsigned leaf_samples = 500;
  std::uint64_t seed = 7;
};

VerifyReport verify(const RegionTree& tree, const VerifyConfig& config = {});

std::vector<const RegionNode*> leaves(const RegionTree& tree);

}  // namespace nc
