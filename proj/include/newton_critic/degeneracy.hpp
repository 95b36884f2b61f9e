#pragma once

#include <optional>
#include <vector>

#include "newton_critic/expr.hpp"
#include "newton_critic/newton.hpp"

namespace nc {

// gamma_tt * gamma_vtt - gamma_ttt * gamma_vt
PuiseuxPoly cinematic_curvature(const PuiseuxPoly& g);
// Curvature restricted to the monomials that the input precision determines.
PuiseuxPoly certified_curvature(const PuiseuxPoly& g, const Precision& precision);

struct Classification {
  enum class Verdict { NotStronglyDegenerate, Degenerate };
  Verdict verdict = Verdict::NotStronglyDegenerate;
  int degenerate_case = 0;             // 1, 2 or 3 when degenerate
  std::vector<int> satisfied_cases;    // every case whose condition holds
  Certification certification;
  std::optional<ExponentPair> vertex;  // case 2: the single reduced vertex (p, 1)
  std::optional<Rational> exponent;    // case 3: the pure-v exponent p
  PuiseuxPoly tilde;                   // case 2 or 3: the associated gamma~
  PuiseuxPoly curvature;               // certified part of cine(gamma)

  bool degenerate() const { return verdict == Verdict::Degenerate; }
};

Classification classify(const ExpandedGerm& g);

// k! c_{p,k} geometric for k >= 1 over the column of the single reduced vertex.
bool geometric_sequence_test(const ExpandedGerm& g);

}  // namespace nc
