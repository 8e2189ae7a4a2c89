#include "randkit/martingale.hpp"

#include <algorithm>
#include <utility>

#include "randkit/errors.hpp"

namespace randkit {

std::size_t NodeTable::node_count(unsigned depth) {
  if (depth > 29) throw InvariantError("martingale depth out of range");
  return (std::size_t{1} << (depth + 1)) - 1;
}

std::size_t NodeTable::index_of(const BitString& word) {
  return ((std::size_t{1} << word.size()) - 1) + word.cell_index();
}

const Rational& NodeTable::at(const BitString& word) const {
  if (word.size() > depth) throw InvariantError("node beyond table depth");
  return nodes[index_of(word)];
}

Martingale::Martingale(unsigned depth, std::vector<Rational> nodes) {
  if (nodes.size() != NodeTable::node_count(depth)) {
    throw InvariantError("martingale needs 2^{depth+1}-1 node values");
  }
  table_.depth = depth;
  table_.nodes = std::move(nodes);
}

const Rational& Martingale::at(const BitString& word) const {
  if (word.size() <= depth()) return table_.at(word);
  return table_.at(word.prefix(depth()));
}

std::vector<BitString> unfair_nodes(const Martingale& d) {
  std::vector<BitString> bad;
  for (unsigned level = 0; level < d.depth(); ++level) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << level); ++i) {
      const BitString s = BitString::from_cell_index(level, i);
      const Rational lhs = d.at(s.append(0)) + d.at(s.append(1));
      const Rational rhs = d.at(s) + d.at(s);
      if (lhs != rhs) bad.push_back(s);
    }
  }
  return bad;
}

std::vector<BitString> negative_nodes(const Martingale& d) {
  std::vector<BitString> bad;
  for (unsigned level = 0; level <= d.depth(); ++level) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << level); ++i) {
      const BitString s = BitString::from_cell_index(level, i);
      if (d.at(s).sign() < 0) bad.push_back(s);
    }
  }
  return bad;
}

bool validate(const Martingale& d) {
  return unfair_nodes(d).empty() && negative_nodes(d).empty();
}

MultiplicativeMartingale::MultiplicativeMartingale(unsigned depth,
                                                   Rational root,
                                                   std::vector<Rational> ratios)
    : depth_(depth), root_(std::move(root)), ratios_(std::move(ratios)) {
  if (ratios_.size() != NodeTable::node_count(depth) - 1) {
    throw InvariantError("ratio table needs 2^{depth+1}-2 entries");
  }
  if (root_.sign() < 0) throw InvariantError("root capital below zero");
  const Rational two(2);
  for (std::size_t i = 0; i < ratios_.size(); i += 2) {
    if (ratios_[i].sign() < 0 || ratios_[i + 1].sign() < 0) {
      throw InvariantError("ratio below zero");
    }
    if (ratios_[i] + ratios_[i + 1] != two) {
      throw InvariantError("sibling ratios must sum to 2");
    }
  }
}

const Rational& MultiplicativeMartingale::ratio_at(const BitString& word) const {
  if (word.empty() || word.size() > depth_) {
    throw InvariantError("ratio index out of range");
  }
  return ratios_[NodeTable::index_of(word) - 1];
}

MultiplicativeMartingale to_multiplicative(const Martingale& d) {
  for (unsigned level = 0; level <= d.depth(); ++level) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << level); ++i) {
      const BitString s = BitString::from_cell_index(level, i);
      if (d.at(s).sign() <= 0) throw ZeroCapitalNode(s.str());
    }
  }
  std::vector<Rational> ratios;
  ratios.reserve(NodeTable::node_count(d.depth()) - 1);
  for (unsigned level = 1; level <= d.depth(); ++level) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << level); ++i) {
      const BitString s = BitString::from_cell_index(level, i);
      ratios.push_back(d.at(s) / d.at(s.prefix(level - 1)));
    }
  }
  return MultiplicativeMartingale(d.depth(), d.root(), std::move(ratios));
}

Martingale from_multiplicative(const MultiplicativeMartingale& m) {
  std::vector<Rational> nodes;
  nodes.reserve(NodeTable::node_count(m.depth()));
  nodes.push_back(m.root());
  for (unsigned level = 1; level <= m.depth(); ++level) {
    const std::size_t parent_base = (std::size_t{1} << (level - 1)) - 1;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << level); ++i) {
      const Rational& parent = nodes[parent_base + i / 2];
      const BitString s = BitString::from_cell_index(level, i);
      nodes.push_back(parent * m.ratio_at(s));
    }
  }
  return Martingale(m.depth(), std::move(nodes));
}

Martingale repair_martingale(const NodeTable& candidate, const Rational& root) {
  if (candidate.nodes.size() != NodeTable::node_count(candidate.depth)) {
    throw InvariantError("candidate table needs 2^{depth+1}-1 entries");
  }
  auto clamped = [&candidate](const BitString& w) {
    const Rational& v = candidate.at(w);
    return v.sign() < 0 ? Rational(0) : v;
  };
  std::vector<Rational> nodes;
  nodes.reserve(NodeTable::node_count(candidate.depth));
  nodes.push_back(root.sign() < 0 ? Rational(0) : root);
  for (unsigned level = 1; level <= candidate.depth; ++level) {
    const std::size_t parent_base = (std::size_t{1} << (level - 1)) - 1;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << level); i += 2) {
      const Rational& parent = nodes[parent_base + i / 2];
      const Rational doubled = parent + parent;
      const BitString left = BitString::from_cell_index(level, i);
      const Rational kept = std::min(clamped(left), doubled);
      nodes.push_back(kept);
      nodes.push_back(doubled - kept);
    }
  }
  return Martingale(candidate.depth, std::move(nodes));
}

Martingale split_van_lambalgen(const Martingale& d, Side side,
                               const BitSource& oracle, unsigned out_depth) {
  if (2 * out_depth > d.depth()) {
    throw InvariantError("split needs depth(d) >= 2 * out_depth");
  }
  const MultiplicativeMartingale dd = to_multiplicative(d);
  std::vector<Rational> ratios;
  ratios.reserve(NodeTable::node_count(out_depth) - 1);
  for (unsigned level = 1; level <= out_depth; ++level) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << level); ++i) {
      const BitString s = BitString::from_cell_index(level, i);
      const BitString w =
          side == Side::even
              ? interleave_word(s, oracle.prefix(level - 1))
              : interleave_word(oracle.prefix(level), s);
      ratios.push_back(dd.ratio_at(w));
    }
  }
  const Rational root = side == Side::even ? d.root() : Rational(1);
  return from_multiplicative(
      MultiplicativeMartingale(out_depth, root, std::move(ratios)));
}

CapitalTrajectory run(const Martingale& d, const BitSource& source,
                      std::size_t steps) {
  CapitalTrajectory traj;
  traj.capitals.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    traj.capitals.push_back(d.at(source.prefix(k)));
  }
  return traj;
}

OrderFunction OrderFunction::identity() {
  return OrderFunction([](std::size_t n) { return n; }, "identity");
}

OrderFunction OrderFunction::linear(std::size_t slope, std::size_t offset) {
  if (slope == 0) throw InvariantError("order function must be unbounded");
  return OrderFunction([slope, offset](std::size_t n) { return slope * n + offset; },
                       "linear:" + std::to_string(slope) + "n+" +
                           std::to_string(offset));
}

bool nondecreasing_on(const OrderFunction& f, std::size_t last) {
  for (std::size_t n = 0; n < last; ++n) {
    if (f.at(n + 1) < f.at(n)) return false;
  }
  return true;
}

std::vector<std::size_t> succeeds_against_order(const Martingale& d,
                                                const BitSource& source,
                                                const OrderFunction& f,
                                                std::size_t horizon) {
  std::vector<std::size_t> witnesses;
  for (std::size_t n = 0; n <= horizon; ++n) {
    if (d.at(source.prefix(f.at(n))) >= Rational(static_cast<long>(n))) {
      witnesses.push_back(n);
    }
  }
  return witnesses;
}

namespace {

Martingale conditional_common(const OpenSetCode& u, bool normalized) {
  const OpenSetCode canon = canonicalize(u);
  const Rational total = measure(canon);
  if (normalized && total.is_zero()) {
    throw ZeroMeasureSet("conditioning on a null set");
  }
  const unsigned depth = max_stem_depth(canon);
  std::vector<Rational> nodes;
  nodes.reserve(NodeTable::node_count(depth));
  for (unsigned level = 0; level <= depth; ++level) {
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << level); ++i) {
      const BitString s = BitString::from_cell_index(level, i);
      Rational v = measure_within(canon, s) * Rational::pow2(level);
      if (normalized) v /= total;
      nodes.push_back(std::move(v));
    }
  }
  return Martingale(depth, std::move(nodes));
}

}  // namespace

Martingale conditional_martingale(const OpenSetCode& u) {
  return conditional_common(u, /*normalized=*/true);
}

Martingale conditional_martingale_unnormalized(const OpenSetCode& u) {
  return conditional_common(u, /*normalized=*/false);
}

}  // namespace randkit
