// src/tests.cpp -- coverage tests and the conversions between forms.
#include "randkit/tests.hpp"

#include <algorithm>
#include <cstddef>

#include "randkit/errors.hpp"
#include "randkit/layering.hpp"

namespace randkit {
namespace {

Rational level_bound(std::size_t n) {
  // invariant: mu(U_n) <= 2^-n
  return Rational::pow2(-static_cast<long>(n));
}

OpenSetCode code_from_stems(std::vector<BitString> stems) {
  std::vector<Cylinder> cylinders;
  cylinders.reserve(stems.size());
  for (auto& s : stems) cylinders.emplace_back(std::move(s));
  return OpenSetCode(std::move(cylinders));
}

void check_levels(const std::vector<OpenSetCode>& levels,
                  const std::vector<Rational>& measures) {
  if (levels.size() != measures.size()) {
    throw InvariantError("level list and measure list disagree in length");
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    Rational actual = measure(canonicalize(levels[i]));
    if (actual != measures[i]) {
      throw InvariantError("stored measure differs from canonical measure at level " +
                           std::to_string(i + 1));
    }
    if (measures[i] > level_bound(i + 1)) {
      throw InvariantError("level " + std::to_string(i + 1) +
                           " exceeds its measure bound");
    }
  }
}

}  // namespace

SchnorrTest::SchnorrTest(std::vector<OpenSetCode> levels,
                         std::vector<Rational> measures)
    : levels_(std::move(levels)), measures_(std::move(measures)) {
  check_levels(levels_, measures_);
}

SchnorrTest::SchnorrTest(std::vector<OpenSetCode> levels)
    : levels_(std::move(levels)) {
  measures_.reserve(levels_.size());
  for (const auto& u : levels_) {
    measures_.push_back(measure(canonicalize(u)));
  }
  check_levels(levels_, measures_);
}

const OpenSetCode& SchnorrTest::level(std::size_t n) const {
  if (n == 0 || n > levels_.size()) {
    throw InvariantError("level index is 1-based and bounded by level_count");
  }
  return levels_[n - 1];
}

const Rational& SchnorrTest::level_measure(std::size_t n) const {
  if (n == 0 || n > measures_.size()) {
    throw InvariantError("level index is 1-based and bounded by level_count");
  }
  return measures_[n - 1];
}

std::size_t SchnorrTest::membership_count(const BitString& word) const {
  std::size_t count = 0;
  for (const auto& u : levels_) {
    if (covers_word(canonicalize(u), word)) ++count;
  }
  return count;
}

IntegralTest schnorr_to_integral(const SchnorrTest& t) {
  std::vector<StepFunction> layers;
  unsigned depth = 0;
  for (std::size_t n = 1; n <= t.level_count(); ++n) {
    depth = std::max(depth, max_stem_depth(canonicalize(t.level(n))));
  }
  for (std::size_t n = 1; n <= t.level_count(); ++n) {
    layers.push_back(StepFunction::indicator(canonicalize(t.level(n))).refine(depth));
  }
  return IntegralTest{LayeredFunction(std::move(layers))};
}

SchnorrTest integral_to_schnorr(const IntegralTest& t, std::size_t horizon) {
  return build_layering(t.body, horizon).emitted_test;
}

SchnorrTest martingale_to_test(const Martingale& d, std::size_t levels) {
  if (!validate(d)) {
    throw InvariantError("strategy must be fair and nonnegative");
  }
  if (d.root() > Rational(1)) {
    throw InvariantError("initial capital must be at most 1");
  }
  std::vector<OpenSetCode> out;
  std::vector<Rational> out_measures;
  const NodeTable& table = d.table();
  for (std::size_t n = 1; n <= levels; ++n) {
    const Rational threshold = Rational::pow2(static_cast<long>(n));
    // minimal nodes with capital > 2^n, breadth first; a node is minimal
    // when no proper prefix already qualifies
    std::vector<BitString> stems;
    for (unsigned level = 0; level <= table.depth; ++level) {
      const std::size_t cells = std::size_t{1} << level;
      for (std::size_t i = 0; i < cells; ++i) {
        BitString s = BitString::from_cell_index(level, i);
        if (table.at(s) <= threshold) continue;
        bool covered = false;
        for (unsigned k = 0; k < level && !covered; ++k) {
          if (table.at(s.prefix(k)) > threshold) covered = true;
        }
        if (!covered) stems.push_back(std::move(s));
      }
    }
    OpenSetCode u = canonicalize(code_from_stems(std::move(stems)));
    Rational m = measure(u);
    // capital-counting bound: mu{d > 2^n} <= d(root) / 2^n
    if (m * threshold > d.root()) {
      throw InvariantError("exceedance set breaks the capital bound");
    }
    out.push_back(std::move(u));
    out_measures.push_back(std::move(m));
  }
  return SchnorrTest(std::move(out), std::move(out_measures));
}

Martingale test_to_martingale(const SchnorrTest& t) {
  Rational total;
  for (std::size_t n = 1; n <= t.level_count(); ++n) {
    total = total + t.level_measure(n);
  }
  if (total > Rational(1)) {
    throw InvariantError("level measures must sum to at most 1");
  }
  unsigned depth = 0;
  for (std::size_t n = 1; n <= t.level_count(); ++n) {
    depth = std::max(depth, max_stem_depth(canonicalize(t.level(n))));
  }
  const std::size_t count = NodeTable::node_count(depth);
  std::vector<Rational> nodes(count, Rational());
  for (std::size_t n = 1; n <= t.level_count(); ++n) {
    OpenSetCode u = canonicalize(t.level(n));
    // unnormalized conditional: d_n(s) = mu(U_n n [s]) * 2^|s|
    std::size_t idx = 0;
    for (unsigned level = 0; level <= depth; ++level) {
      const std::size_t cells = std::size_t{1} << level;
      for (std::size_t i = 0; i < cells; ++i, ++idx) {
        BitString s = BitString::from_cell_index(level, i);
        nodes[idx] = nodes[idx] + measure_within(u, s) * Rational::pow2(level);
      }
    }
  }
  return Martingale(depth, std::move(nodes));
}

OpenSetCode clamp_ml_enumeration(const UniformSchnorrTest& family,
                                 std::size_t n, const BitSource& oracle,
                                 std::size_t budget) {
  const Rational bound = level_bound(n);
  std::vector<BitString> kept;
  for (std::size_t index = 0; index < budget; ++index) {
    Cylinder c = family.cylinder(oracle, n, index);
    if (c.is_empty_set()) continue;
    std::vector<BitString> trial = kept;
    trial.push_back(c.stem());
    if (measure(canonicalize(code_from_stems(std::move(trial)))) <= bound) {
      kept.push_back(c.stem());
    }
  }
  return canonicalize(code_from_stems(std::move(kept)));
}

OracleFunctional<Cylinder> totalize_code(const PartialEnumeration& partial) {
  return OracleFunctional<Cylinder>(
      [partial](const BitString&, std::size_t query) {
        auto [q, s] = cantor_unpair(query);
        std::optional<Cylinder> r = partial(q, s);
        return r.has_value() ? *r : Cylinder::empty_set();
      },
      [](std::size_t) { return std::size_t{0}; },
      "stage-patched totalization");
}

NodeTable UniformMartingalePipeline::raw_table_for(const BitSource& oracle) const {
  const std::size_t count = NodeTable::node_count(depth);
  std::vector<Rational> nodes;
  nodes.reserve(count);
  for (std::size_t node = 0; node < count; ++node) {
    FastCauchyCode stream = repair_fast_cauchy(FastCauchyCode(
        [this, &oracle, node](std::size_t i) {
          return streams.apply(oracle, cantor_pair(node, i));
        }));
    nodes.push_back(approximate_limit(stream, precision_index));
  }
  return NodeTable{depth, std::move(nodes)};
}

Martingale UniformMartingalePipeline::table_for(const BitSource& oracle) const {
  NodeTable raw = raw_table_for(oracle);
  Rational root = raw.nodes[0];
  if (root.sign() < 0) root = Rational();
  return repair_martingale(raw, root);
}

OrderFunction UniformMartingalePipeline::order_for(const BitSource& oracle) const {
  auto ord = order;
  return OrderFunction(
      [ord, oracle](std::size_t n) { return ord.apply(oracle, n); },
      "uniform-order(" + oracle.spec() + ")");
}

UniformMartingalePipeline uniformize_tt_martingale(
    OracleFunctional<Rational> streams, OracleFunctional<std::size_t> order,
    unsigned depth, std::size_t precision_index) {
  return UniformMartingalePipeline{std::move(streams), std::move(order), depth,
                                   precision_index};
}

}  // namespace randkit
