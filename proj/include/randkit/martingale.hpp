// randkit/martingale.hpp -- finite-depth betting strategies with exact
// fairness, multiplicative form, totalizing repair, interleaved splits,
// trajectories, and success monitoring against order functions.
#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "randkit/cantor.hpp"
#include "randkit/rational.hpp"

namespace randkit {

// Raw node table: breadth-first values for every word of length <= depth
// (levels ascending, words lexicographic within a level; size 2^{depth+1}-1).
// No invariant attached; repair candidates live here.
struct NodeTable {
  unsigned depth = 0;
  std::vector<Rational> nodes{Rational(0)};

  static std::size_t node_count(unsigned depth);
  static std::size_t index_of(const BitString& word);  // |word| <= depth
  const Rational& at(const BitString& word) const;
};

// Betting strategy d with the fairness invariant d(s0) + d(s1) = 2 d(s) and
// nonnegative capital; values beyond `depth` inherit the depth-level ancestor
// (the strategy stops betting). The constructor checks shape only; validate()
// checks the invariant, so invalid tables can be loaded and reported.
class Martingale {
 public:
  Martingale() = default;
  Martingale(unsigned depth, std::vector<Rational> nodes);

  unsigned depth() const { return table_.depth; }
  const std::vector<Rational>& nodes() const { return table_.nodes; }
  const NodeTable& table() const { return table_; }

  // Capital after reading `word`; flat extension beyond depth.
  const Rational& at(const BitString& word) const;
  const Rational& root() const { return table_.nodes[0]; }

 private:
  NodeTable table_;
};

bool validate(const Martingale& d);
std::vector<BitString> unfair_nodes(const Martingale& d);   // interior nodes
std::vector<BitString> negative_nodes(const Martingale& d);

// Ratio form: root capital plus per-node ratios dd(si) = d(si)/d(s), with
// sibling ratios summing to 2 exactly. Ratios are breadth-first over levels
// 1..depth (size 2^{depth+1}-2).
class MultiplicativeMartingale {
 public:
  MultiplicativeMartingale(unsigned depth, Rational root,
                           std::vector<Rational> ratios);

  unsigned depth() const { return depth_; }
  const Rational& root() const { return root_; }
  const std::vector<Rational>& ratios() const { return ratios_; }
  // Ratio at a word of length 1..depth.
  const Rational& ratio_at(const BitString& word) const;

 private:
  unsigned depth_;
  Rational root_;
  std::vector<Rational> ratios_;
};

// Requires d(s) > 0 at every node up to depth; ZeroCapitalNode otherwise.
MultiplicativeMartingale to_multiplicative(const Martingale& d);
Martingale from_multiplicative(const MultiplicativeMartingale& m);

// Totalizing repair: clamps candidate entries at zero, then rebuilds
//   h(root) = max{root, 0}
//   h(s0) = min{cand(s0), 2 h(s)},  h(s1) = 2 h(s) - h(s0).
// Always yields a valid nonnegative martingale; identity on tables that are
// already fair and nonnegative with cand(root) = root.
Martingale repair_martingale(const NodeTable& candidate, const Rational& root);

enum class Side { even, odd };

// Single-coordinate strategy induced by betting d along interleaved words,
// the other coordinate supplied by `oracle`:
//   even side at s consumes oracle bits 0..|s|-2 (none on the first bet),
//   odd side at s consumes oracle bits 0..|s|-1.
// The even split carries the root capital d(root); the odd split starts at 1,
// so the two split capitals multiply back to d exactly.
// Requires 2 * out_depth <= depth(d) and strictly positive d.
Martingale split_van_lambalgen(const Martingale& d, Side side,
                               const BitSource& oracle, unsigned out_depth);

struct CapitalTrajectory {
  std::vector<Rational> capitals;  // capitals[k] = d(source restricted to k)
};

CapitalTrajectory run(const Martingale& d, const BitSource& source,
                      std::size_t steps);

// Nondecreasing unbounded natural -> natural rule with a description tag.
class OrderFunction {
 public:
  OrderFunction(std::function<std::size_t(std::size_t)> rule, std::string spec)
      : rule_(std::move(rule)), spec_(std::move(spec)) {}
  static OrderFunction identity();
  static OrderFunction linear(std::size_t slope, std::size_t offset);  // slope >= 1

  std::size_t at(std::size_t n) const { return rule_(n); }
  const std::string& spec() const { return spec_; }

 private:
  std::function<std::size_t(std::size_t)> rule_;
  std::string spec_;
};

bool nondecreasing_on(const OrderFunction& f, std::size_t last);

// Witness list: all n <= horizon with d(source restricted to f(n)) >= n.
std::vector<std::size_t> succeeds_against_order(const Martingale& d,
                                                const BitSource& source,
                                                const OrderFunction& f,
                                                std::size_t horizon);

// d(s) = mu(U n [s]) / (mu(U) mu([s])); ZeroMeasureSet when mu(U) = 0.
Martingale conditional_martingale(const OpenSetCode& u);
// d_u(s) = mu(U n [s]) / mu([s]); defined for any U.
Martingale conditional_martingale_unnormalized(const OpenSetCode& u);

}  // namespace randkit
