// src/serialize.cpp -- JSON encode/decode and re-verification reports.
#include "randkit/serialize.hpp"

#include <json.hpp>

#include <algorithm>
#include <utility>

#include "randkit/errors.hpp"

namespace randkit {
namespace {

using nlohmann::json;

// --- encode helpers ---------------------------------------------------------

json rational_json(const Rational& r) { return json(r.str()); }

json rational_list_json(const std::vector<Rational>& rs) {
  json a = json::array();
  for (const auto& r : rs) a.push_back(rational_json(r));
  return a;
}

json open_set_json(const OpenSetCode& u) {
  json a = json::array();
  for (const auto& c : u.cylinders()) a.push_back(c.str());
  return a;
}

json open_set_list_json(const std::vector<OpenSetCode>& us) {
  json a = json::array();
  for (const auto& u : us) a.push_back(open_set_json(u));
  return a;
}

json cylinder_list_json(const std::vector<Cylinder>& cs) {
  json a = json::array();
  for (const auto& c : cs) a.push_back(c.str());
  return a;
}

json step_json(const StepFunction& f) {
  return json{{"depth", f.depth()}, {"values", rational_list_json(f.values())}};
}

json step_list_json(const std::vector<StepFunction>& fs) {
  json a = json::array();
  for (const auto& f : fs) a.push_back(step_json(f));
  return a;
}

json layered_json(const LayeredFunction& t) {
  return json{{"integral", rational_json(t.declared_integral())},
              {"layers", step_list_json(t.layers())}};
}

json size_list_json(const std::vector<std::size_t>& xs) {
  json a = json::array();
  for (auto x : xs) a.push_back(x);
  return a;
}

std::string dump(json j, const char* kind) {
  j["kind"] = kind;
  return j.dump(2) + "\n";
}

// --- decode helpers ---------------------------------------------------------

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw ParseError(std::string("missing field '") + name + "'");
  }
  return *it;
}

Rational decode_rational(const json& j) {
  if (!j.is_string()) throw ParseError("rational must be a \"p/q\" string");
  return Rational::from_string(j.get<std::string>());
}

std::vector<Rational> decode_rational_list(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of rationals");
  std::vector<Rational> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(decode_rational(e));
  return out;
}

unsigned decode_depth(const json& j) {
  if (!j.is_number_unsigned()) throw ParseError("depth must be a natural");
  return j.get<unsigned>();
}

std::size_t decode_size(const json& j) {
  if (!j.is_number_unsigned()) throw ParseError("expected a natural number");
  return j.get<std::size_t>();
}

std::vector<std::size_t> decode_size_list(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of naturals");
  std::vector<std::size_t> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(decode_size(e));
  return out;
}

std::vector<Cylinder> decode_cylinder_list(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of stem strings");
  std::vector<Cylinder> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_string()) throw ParseError("cylinder must be a stem string");
    out.push_back(Cylinder::from_string(e.get<std::string>()));
  }
  return out;
}

OpenSetCode decode_open_set(const json& j) {
  return OpenSetCode(decode_cylinder_list(j));
}

std::vector<OpenSetCode> decode_open_set_list(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of open sets");
  std::vector<OpenSetCode> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(decode_open_set(e));
  return out;
}

StepFunction decode_step(const json& j) {
  if (!j.is_object()) throw ParseError("step function must be an object");
  unsigned depth = decode_depth(field(j, "depth"));
  std::vector<Rational> values = decode_rational_list(field(j, "values"));
  if (values.size() != (std::size_t{1} << depth)) {
    throw ParseError("step function needs 2^depth values");
  }
  return StepFunction(depth, std::move(values));
}

std::vector<StepFunction> decode_step_list(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of step functions");
  std::vector<StepFunction> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(decode_step(e));
  return out;
}

LayeredFunction decode_layered(const json& j) {
  if (!j.is_object()) throw ParseError("layered function must be an object");
  LayeredFunction t(decode_step_list(field(j, "layers")));
  Rational declared = decode_rational(field(j, "integral"));
  if (declared != t.declared_integral()) {
    throw InvariantError("declared integral differs from the layer sum: " +
                         declared.str() + " vs " + t.declared_integral().str());
  }
  return t;
}

std::vector<std::vector<Cylinder>> decode_level_lists(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of cylinder lists");
  std::vector<std::vector<Cylinder>> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(decode_cylinder_list(e));
  return out;
}

// --- kind payloads ----------------------------------------------------------

constexpr const char* kMartingale = "martingale";
constexpr const char* kMultiplicative = "martingale-multiplicative";
constexpr const char* kSchnorr = "schnorr-test";
constexpr const char* kLayered = "layered";
constexpr const char* kSource = "source";
constexpr const char* kCauchy = "fast-cauchy";
constexpr const char* kPlan = "layering-plan";
constexpr const char* kUniformSchnorr = "uniform-schnorr-test";
constexpr const char* kUniformFamily = "uniform-integral-family";

}  // namespace

UniformSchnorrTest UniformTestSpec::build() const {
  if (use.empty()) {
    throw InvariantError("use list must be nonempty");
  }
  if (rule != "constant" && rule != "gate-on-first-bit") {
    throw InvariantError("unknown uniform-test rule '" + rule + "'");
  }
  auto pick = [](const std::vector<std::vector<Cylinder>>& lists,
                 std::size_t level, std::size_t index) {
    if (level == 0 || level > lists.size()) return Cylinder::empty_set();
    const auto& list = lists[level - 1];
    return index < list.size() ? list[index] : Cylinder::empty_set();
  };
  const auto use_copy = use;
  auto use_fn = [use_copy](std::size_t q) {
    return use_copy[std::min(q, use_copy.size() - 1)];
  };
  OracleFunctional<Cylinder>::Program program;
  if (rule == "constant") {
    auto lists = levels;
    program = [lists, pick](const BitString&, std::size_t query) {
      auto [level, index] = cantor_unpair(query);
      return pick(lists, level, index);
    };
  } else {
    auto lists0 = levels;
    auto lists1 = levels_alt;
    program = [lists0, lists1, pick](const BitString& prefix,
                                     std::size_t query) {
      auto [level, index] = cantor_unpair(query);
      if (prefix.empty()) {
        throw PrefixTooShort("gate rule needs one oracle bit");
      }
      return pick(prefix.bit(0) ? lists1 : lists0, level, index);
    };
  }
  return UniformSchnorrTest(
      OracleFunctional<Cylinder>(std::move(program), use_fn, rule), rule);
}

UniformIntegralFamily UniformFamilySpec::build() const {
  return assemble_uniform_family(base, horizon);
}

std::string serialize_martingale(const Martingale& d) {
  return dump(json{{"depth", d.depth()},
                   {"nodes", rational_list_json(d.nodes())}},
              kMartingale);
}

std::string serialize_multiplicative(const MultiplicativeMartingale& m) {
  return dump(json{{"depth", m.depth()},
                   {"root", rational_json(m.root())},
                   {"ratios", rational_list_json(m.ratios())}},
              kMultiplicative);
}

std::string serialize_schnorr_test(const SchnorrTest& t) {
  return dump(json{{"levels", open_set_list_json(t.levels())},
                   {"measures", rational_list_json(t.measures())}},
              kSchnorr);
}

std::string serialize_layered(const LayeredFunction& t) {
  return dump(layered_json(t), kLayered);
}

std::string serialize_source(const BitSource& s) {
  return dump(json{{"spec", s.spec()}}, kSource);
}

std::string serialize_fast_cauchy(const FastCauchyCode& c) {
  if (!c.prefix().has_value()) {
    throw InvariantError("generator-backed code has no finite description");
  }
  return dump(json{{"entries", rational_list_json(*c.prefix())},
                   {"tail", "constant"}},
              kCauchy);
}

std::string serialize_plan(const LayeringPlan& p) {
  json j{{"source", layered_json(p.source)},
         {"horizon", p.horizon},
         {"grid_depth", p.grid_depth},
         {"saturated", p.saturated},
         {"partial_sum_indices", size_list_json(p.partial_sum_indices)},
         {"partial_sums", step_list_json(p.partial_sums)},
         {"cut_levels", rational_list_json(p.cut_levels)},
         {"exceedance_sets", open_set_list_json(p.exceedance_sets)},
         {"exceedance_measures", rational_list_json(p.exceedance_measures)},
         {"u_sets", open_set_list_json(p.u_sets)},
         {"u_measures", rational_list_json(p.u_measures)},
         {"approximants", step_list_json(p.approximants)}};
  j["saturation_index"] = p.saturation_index.has_value()
                              ? json(*p.saturation_index)
                              : json(nullptr);
  return dump(std::move(j), kPlan);
}

std::string serialize_uniform_schnorr(const UniformTestSpec& u) {
  json program{{"rule", u.rule}};
  program["levels"] = [&] {
    json a = json::array();
    for (const auto& list : u.levels) a.push_back(cylinder_list_json(list));
    return a;
  }();
  if (u.rule == "gate-on-first-bit") {
    json a = json::array();
    for (const auto& list : u.levels_alt) a.push_back(cylinder_list_json(list));
    program["levels_alt"] = a;
  }
  return dump(json{{"use", size_list_json(u.use)}, {"program", program}},
              kUniformSchnorr);
}

std::string serialize_uniform_family(const UniformFamilySpec& u) {
  json program{{"rule", "rescaled-sections"},
               {"base", layered_json(u.base)},
               {"horizon", u.horizon}};
  const std::size_t dx = (u.base.depth() + 1) / 2;
  return dump(json{{"use", json::array({dx})}, {"program", program}},
              kUniformFamily);
}

LoadedObject load_object(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("top level must be an object");
  const json& kind_field = field(j, "kind");
  if (!kind_field.is_string()) throw ParseError("kind must be a string");
  LoadedObject out;
  out.kind = kind_field.get<std::string>();

  if (out.kind == kMartingale) {
    unsigned depth = decode_depth(field(j, "depth"));
    out.martingale =
        Martingale(depth, decode_rational_list(field(j, "nodes")));
  } else if (out.kind == kMultiplicative) {
    unsigned depth = decode_depth(field(j, "depth"));
    out.multiplicative = MultiplicativeMartingale(
        depth, decode_rational(field(j, "root")),
        decode_rational_list(field(j, "ratios")));
  } else if (out.kind == kSchnorr) {
    out.schnorr = SchnorrTest(decode_open_set_list(field(j, "levels")),
                              decode_rational_list(field(j, "measures")));
  } else if (out.kind == kLayered) {
    out.layered = decode_layered(j);
  } else if (out.kind == kSource) {
    const json& spec = field(j, "spec");
    if (!spec.is_string()) throw ParseError("spec must be a string");
    out.source = BitSource::parse_spec(spec.get<std::string>());
  } else if (out.kind == kCauchy) {
    const json& tail = field(j, "tail");
    if (!tail.is_string() || tail.get<std::string>() != "constant") {
      throw ParseError("fast-cauchy tail must be \"constant\"");
    }
    out.cauchy = FastCauchyCode::from_prefix(
        decode_rational_list(field(j, "entries")));
  } else if (out.kind == kPlan) {
    LayeringPlan p;
    p.source = decode_layered(field(j, "source"));
    p.horizon = decode_size(field(j, "horizon"));
    p.grid_depth = decode_depth(field(j, "grid_depth"));
    const json& sat = field(j, "saturated");
    if (!sat.is_boolean()) throw ParseError("saturated must be a boolean");
    p.saturated = sat.get<bool>();
    const json& sat_index = field(j, "saturation_index");
    if (sat_index.is_null()) {
      p.saturation_index = std::nullopt;
    } else {
      p.saturation_index = decode_size(sat_index);
    }
    p.partial_sum_indices = decode_size_list(field(j, "partial_sum_indices"));
    p.partial_sums = decode_step_list(field(j, "partial_sums"));
    p.cut_levels = decode_rational_list(field(j, "cut_levels"));
    p.exceedance_sets = decode_open_set_list(field(j, "exceedance_sets"));
    p.exceedance_measures =
        decode_rational_list(field(j, "exceedance_measures"));
    p.u_sets = decode_open_set_list(field(j, "u_sets"));
    p.u_measures = decode_rational_list(field(j, "u_measures"));
    p.approximants = decode_step_list(field(j, "approximants"));
    if (p.horizon > 0) {
      if (p.u_sets.size() != p.horizon + 1 ||
          p.u_measures.size() != p.horizon + 1) {
        throw ParseError("u-set lists must have horizon + 1 entries");
      }
      p.emitted_test = SchnorrTest(
          std::vector<OpenSetCode>(p.u_sets.begin() + 1, p.u_sets.end()),
          std::vector<Rational>(p.u_measures.begin() + 1, p.u_measures.end()));
    }
    out.plan = std::move(p);
  } else if (out.kind == kUniformSchnorr) {
    const json& program = field(j, "program");
    if (!program.is_object()) throw ParseError("program must be an object");
    const json& rule = field(program, "rule");
    if (!rule.is_string()) throw ParseError("rule must be a string");
    UniformTestSpec spec;
    spec.rule = rule.get<std::string>();
    spec.use = decode_size_list(field(j, "use"));
    spec.levels = decode_level_lists(field(program, "levels"));
    if (spec.rule == "gate-on-first-bit") {
      spec.levels_alt = decode_level_lists(field(program, "levels_alt"));
    }
    spec.build();  // validates the rule name and the use list
    out.uniform_schnorr = std::move(spec);
  } else if (out.kind == kUniformFamily) {
    const json& program = field(j, "program");
    if (!program.is_object()) throw ParseError("program must be an object");
    const json& rule = field(program, "rule");
    if (!rule.is_string() || rule.get<std::string>() != "rescaled-sections") {
      throw ParseError("uniform-integral-family rule must be "
                       "\"rescaled-sections\"");
    }
    UniformFamilySpec spec;
    spec.base = decode_layered(field(program, "base"));
    spec.horizon = decode_size(field(program, "horizon"));
    out.uniform_family = std::move(spec);
  } else {
    throw ParseError("unknown kind '" + out.kind + "'");
  }
  return out;
}

std::string serialize_object(const LoadedObject& object) {
  if (object.martingale) return serialize_martingale(*object.martingale);
  if (object.multiplicative) {
    return serialize_multiplicative(*object.multiplicative);
  }
  if (object.schnorr) return serialize_schnorr_test(*object.schnorr);
  if (object.layered) return serialize_layered(*object.layered);
  if (object.source) return serialize_source(*object.source);
  if (object.cauchy) return serialize_fast_cauchy(*object.cauchy);
  if (object.plan) return serialize_plan(*object.plan);
  if (object.uniform_schnorr) {
    return serialize_uniform_schnorr(*object.uniform_schnorr);
  }
  if (object.uniform_family) {
    return serialize_uniform_family(*object.uniform_family);
  }
  throw InvariantError("loaded object carries no payload");
}

namespace {

void push(std::vector<CheckRecord>& out, std::string name,
          std::string expected, std::string actual, bool ok) {
  out.push_back({std::move(name), std::move(expected), std::move(actual), ok});
}

void check_martingale(const Martingale& d, std::vector<CheckRecord>& out) {
  const auto unfair = unfair_nodes(d);
  push(out, "fairness", "0 unfair interior nodes",
       unfair.empty() ? "0"
                      : std::to_string(unfair.size()) + ", first at '" +
                            unfair.front().str() + "'",
       unfair.empty());
  const auto negative = negative_nodes(d);
  push(out, "nonnegative", "0 negative nodes",
       negative.empty() ? "0"
                        : std::to_string(negative.size()) + ", first at '" +
                              negative.front().str() + "'",
       negative.empty());
}

void check_multiplicative(const MultiplicativeMartingale& m,
                          std::vector<CheckRecord>& out) {
  bool sums_ok = true;
  for (std::size_t i = 0; i + 1 < m.ratios().size(); i += 2) {
    if (m.ratios()[i] + m.ratios()[i + 1] != Rational(2)) sums_ok = false;
  }
  push(out, "sibling-ratio-sums", "every sibling pair sums to 2",
       sums_ok ? "all pairs sum to 2" : "some pair deviates", sums_ok);
  push(out, "root-nonnegative", "root >= 0", m.root().str(),
       m.root().sign() >= 0);
}

void check_schnorr(const SchnorrTest& t, std::vector<CheckRecord>& out) {
  for (std::size_t n = 1; n <= t.level_count(); ++n) {
    const Rational actual = measure(canonicalize(t.level(n)));
    const Rational bound = Rational::pow2(-static_cast<long>(n));
    const bool ok = actual == t.level_measure(n) && actual <= bound;
    push(out, "level-measure[" + std::to_string(n) + "]",
         "stored exactly, at most " + bound.str(), actual.str(), ok);
  }
  if (t.level_count() == 0) {
    push(out, "levels", "empty test", "empty test", true);
  }
}

void check_layered(const LayeredFunction& t, std::vector<CheckRecord>& out) {
  Rational total;
  for (const auto& g : t.layers()) total = total + integral(g);
  push(out, "declared-integral", total.str(), t.declared_integral().str(),
       total == t.declared_integral());
  bool nonneg = true;
  for (const auto& g : t.layers()) {
    for (const auto& v : g.values()) {
      if (v.sign() < 0) nonneg = false;
    }
  }
  push(out, "layers-nonnegative", "no negative cell", nonneg ? "none" : "found",
       nonneg);
}

void check_source(const BitSource& s, std::vector<CheckRecord>& out) {
  const std::string once = s.prefix(16).str();
  const std::string again = s.prefix(16).str();
  push(out, "deterministic-prefix", once, again, once == again);
}

void check_cauchy(const FastCauchyCode& c, std::vector<CheckRecord>& out) {
  const std::size_t last = c.prefix() ? c.prefix()->size() - 1 : 16;
  const bool ok = valid_prefix(c, last);
  push(out, "modulus",
       "|q_n - q_m| <= 2^-m through index " + std::to_string(last),
       ok ? "holds" : "violated", ok);
}

void check_plan(const LayeringPlan& p, std::vector<CheckRecord>& out) {
  const PlanCheck result = verify_plan(p);
  for (const auto& r : result.records) {
    push(out, r.name, "holds", r.detail, r.ok);
  }
}

void check_uniform_schnorr(const UniformTestSpec& spec,
                           std::vector<CheckRecord>& out) {
  const UniformSchnorrTest test = spec.build();
  push(out, "rule", "registered rule", spec.rule, true);
  // outputs may depend only on the declared oracle prefix
  bool sound = true;
  for (std::size_t level = 1; level <= 3 && sound; ++level) {
    for (std::size_t index = 0; index < 3 && sound; ++index) {
      const std::size_t query = cantor_pair(level, index);
      const std::size_t bits = test.program().use(query);
      BitString left_word, right_word;
      for (std::size_t i = 0; i < bits; ++i) {
        left_word.push_back(0);
        right_word.push_back(0);
      }
      for (std::size_t i = 0; i < 4; ++i) right_word.push_back(1);
      const BitSource left = BitSource::from_word(left_word);
      const BitSource right = BitSource::from_word(right_word);
      if (!(test.cylinder(left, level, index) ==
            test.cylinder(right, level, index))) {
        sound = false;
      }
    }
  }
  push(out, "use-bound-soundness",
       "agreeing prefixes give identical cylinders",
       sound ? "holds on probed queries" : "output depends on undeclared bits",
       sound);
}

void check_uniform_family(const UniformFamilySpec& spec,
                          std::vector<CheckRecord>& out) {
  const UniformIntegralFamily family = spec.build();
  check_plan(family.plan, out);
  bool integrals_ok = true;
  bool identity_ok = true;
  const StepFunction u = family.margin.flatten();
  const std::uint64_t cells = std::uint64_t{1} << family.plan.grid_depth;
  for (std::uint64_t i = 0; i < cells; ++i) {
    const BitString x =
        BitString::from_cell_index(family.plan.grid_depth, i);
    const BitSource oracle = BitSource::from_word(x);
    const Rational h = family.budget_at(oracle);
    const LayeredFunction member = family.family_at(oracle);
    if (member.declared_integral() != h) integrals_ok = false;
    if (h == evaluate(u, x)) {
      const LayeredFunction plain = section(family.base, x);
      if (member.flatten().values() != plain.flatten().values()) {
        identity_ok = false;
      }
    }
  }
  push(out, "member-integral", "integral(member) = h(X) at every cell",
       integrals_ok ? "holds" : "deviates", integrals_ok);
  push(out, "full-budget-identity",
       "h(X) = u(X) implies member = section exactly",
       identity_ok ? "holds" : "deviates", identity_ok);
}

}  // namespace

std::vector<CheckRecord> check_object(const LoadedObject& object) {
  std::vector<CheckRecord> out;
  if (object.martingale) check_martingale(*object.martingale, out);
  if (object.multiplicative) check_multiplicative(*object.multiplicative, out);
  if (object.schnorr) check_schnorr(*object.schnorr, out);
  if (object.layered) check_layered(*object.layered, out);
  if (object.source) check_source(*object.source, out);
  if (object.cauchy) check_cauchy(*object.cauchy, out);
  if (object.plan) check_plan(*object.plan, out);
  if (object.uniform_schnorr) check_uniform_schnorr(*object.uniform_schnorr, out);
  if (object.uniform_family) check_uniform_family(*object.uniform_family, out);
  return out;
}

}  // namespace randkit
