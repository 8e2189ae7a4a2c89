// randkit/serialize.hpp -- JSON persistence for every file kind, strict
// loading, and per-kind re-verification reports.
//
// Files are UTF-8 JSON documents with a top-level "kind" field. Rationals
// are "p/q" strings, cylinders are stem strings ("" full space, "∅" empty),
// and no value is ever a float. Object keys serialize sorted, so equal
// objects produce byte-identical files.
//
// Loading is strict in two tiers: structural defects (wrong type, missing
// field, unknown kind, bad literal) raise ParseError; well-formed content
// that breaks a stated invariant raises InvariantError.
#pragma once

#include <cstddef>
#include <string>
#include <optional>
#include <vector>

#include "randkit/cantor.hpp"
#include "randkit/cauchy.hpp"
#include "randkit/layering.hpp"
#include "randkit/martingale.hpp"
#include "randkit/stepfn.hpp"
#include "randkit/tests.hpp"

namespace randkit {

// Registry-backed description of a uniform coverage test. Programs come from
// a fixed rule registry, never arbitrary code:
//   "constant"          oracle-independent: enumerates `levels`
//   "gate-on-first-bit" enumerates `levels` or `levels_alt` by oracle bit 0
// The use list has constant-tail semantics: use(q) = use[min(q, size-1)].
struct UniformTestSpec {
  std::string rule;
  std::vector<std::size_t> use{0};
  std::vector<std::vector<Cylinder>> levels;      // level n at index n-1
  std::vector<std::vector<Cylinder>> levels_alt;  // gate rule, oracle bit 1

  UniformSchnorrTest build() const;  // InvariantError on unknown rule
};

// Description of an oracle-indexed budgeted-section family; building it runs
// marginal -> build_layering -> per-oracle section and rescale.
struct UniformFamilySpec {
  LayeredFunction base;
  std::size_t horizon = 0;

  UniformIntegralFamily build() const;
};

std::string serialize_martingale(const Martingale& d);
std::string serialize_multiplicative(const MultiplicativeMartingale& m);
std::string serialize_schnorr_test(const SchnorrTest& t);
std::string serialize_layered(const LayeredFunction& t);
std::string serialize_source(const BitSource& s);
// Prefix-backed codes only (a generator stream has no finite description).
std::string serialize_fast_cauchy(const FastCauchyCode& c);
std::string serialize_plan(const LayeringPlan& p);
std::string serialize_uniform_schnorr(const UniformTestSpec& u);
std::string serialize_uniform_family(const UniformFamilySpec& u);

// Any loaded file: exactly one payload is set, matching `kind`.
struct LoadedObject {
  std::string kind;
  std::optional<Martingale> martingale;
  std::optional<MultiplicativeMartingale> multiplicative;
  std::optional<SchnorrTest> schnorr;
  std::optional<LayeredFunction> layered;
  std::optional<BitSource> source;
  std::optional<FastCauchyCode> cauchy;
  std::optional<LayeringPlan> plan;
  std::optional<UniformTestSpec> uniform_schnorr;
  std::optional<UniformFamilySpec> uniform_family;
};

LoadedObject load_object(const std::string& text);
// Re-serializes the payload; loading its output yields the same bytes again.
std::string serialize_object(const LoadedObject& object);

// One verification assertion, machine readable.
struct CheckRecord {
  std::string name;
  std::string expected;
  std::string actual;
  bool ok = false;
};

// Re-derives every checkable invariant of the payload. Loading already
// enforces constructor-level invariants; these records re-verify from raw
// data so reports stay meaningful for kinds whose types admit invalid
// states (martingales, plans).
std::vector<CheckRecord> check_object(const LoadedObject& object);

}  // namespace randkit
