#pragma once

#include <optional>
#include <string>
#include <vector>

#include "newton_critic/puiseux.hpp"

namespace nc {

// A rational or +infinity.
class ExtRational {
 public:
  ExtRational() : value_(Rational(0)) {}
  ExtRational(const Rational& q) : value_(q) {}  // NOLINT
  static ExtRational infinity() {
    ExtRational x;
    x.value_.reset();
    return x;
  }

  bool is_infinite() const { return !value_.has_value(); }
  const Rational& value() const;
  std::string to_string() const { return value_ ? nc::to_string(*value_) : "inf"; }
  double to_double() const;

  friend bool operator==(const ExtRational& a, const ExtRational& b) { return a.value_ == b.value_; }
  friend bool operator!=(const ExtRational& a, const ExtRational& b) { return !(a == b); }
  friend bool operator<(const ExtRational& a, const ExtRational& b) {
    if (!a.value_) return false;
    if (!b.value_) return true;
    return *a.value_ < *b.value_;
  }
  friend bool operator<=(const ExtRational& a, const ExtRational& b) { return !(b < a); }
  friend bool operator>(const ExtRational& a, const ExtRational& b) { return b < a; }
  friend bool operator>=(const ExtRational& a, const ExtRational& b) { return !(a < b); }

 private:
  std::optional<Rational> value_;
};

inline ExtRational max(const ExtRational& a, const ExtRational& b) { return a < b ? b : a; }

using SupportSet = std::vector<ExponentPair>;

// {(x, y) : a x + b y = c}
struct Line {
  Rational a, b, c;

  Rational evaluate(const Rational& p, unsigned q) const { return a * p + b * q; }
  // a/b
  Rational sigma() const { return a / b; }
};

struct Edge {
  ExponentPair left, right;
  Line line;
  Rational slope;  // (p_right - p_left) / (q_left - q_right)
};

struct NewtonDiagram {
  std::vector<ExponentPair> vertices;
  std::vector<Edge> edges;
  bool reduced = false;

  std::optional<std::size_t> vertex_index(const ExponentPair& v) const;
};

SupportSet taylor_support(const PuiseuxPoly& g);
NewtonDiagram diagram(const SupportSet& s, bool reduced);
NewtonDiagram reduced_diagram(const PuiseuxPoly& g);
ExtRational p0(const PuiseuxPoly& g);
Rational vertical_distance(const Line& l, const ExtRational& p);
ExtRational vertex_sup_distance(const NewtonDiagram& d, const ExponentPair& vertex, const ExtRational& p0);
ExtRational d_gamma(const PuiseuxPoly& g);
ExtRational d_gt(const PuiseuxPoly& g, const ExponentPair& vertex);
// Variants taking p0 explicitly.
ExtRational d_gamma(const NewtonDiagram& reduced, const ExtRational& p0);
ExtRational d_gt(const NewtonDiagram& reduced, const ExponentPair& vertex, const ExtRational& p0);

// Height at which the vertical line x = p0 enters the polyhedron of d; infinite
// when the line passes left of the polyhedron.
ExtRational entry_height(const NewtonDiagram& d, const Rational& p0);

// Nonnegative exponents on both sides of every edge line.
bool separates(const NewtonDiagram& d, const SupportSet& s);

std::string to_string(const NewtonDiagram& d);

}  // namespace nc
