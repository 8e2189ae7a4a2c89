// tools/randkit_main.cpp -- command-line surface: generate fixtures, check
// serialized objects, convert between kinds, run the layering pipeline, bet
// strategies against bit sources, and split strategies over interleaved
// coordinates.
//
// Exit codes: 0 ok, 2 parse/usage error, 4 budget exhausted, 3 any other
// invariant violation (including failed check records).
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "randkit/errors.hpp"
#include "randkit/generate.hpp"
#include "randkit/layering.hpp"
#include "randkit/martingale.hpp"
#include "randkit/serialize.hpp"
#include "randkit/tests.hpp"

namespace {

using namespace randkit;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  return quoted + "\"";
}

void print_row(const std::vector<std::string>& cells, bool csv) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) std::cout << (csv ? "," : " | ");
    std::cout << (csv ? csv_escape(cells[i]) : cells[i]);
  }
  std::cout << "\n";
}

// Returns overall pass; one line per record.
bool print_records(const std::vector<CheckRecord>& records, bool csv) {
  bool all_ok = true;
  for (const auto& r : records) {
    print_row({r.ok ? "ok" : "FAIL", r.name, r.expected, r.actual}, csv);
    all_ok = all_ok && r.ok;
  }
  return all_ok;
}

void update_manifest(const std::string& out_path, const std::string& kind,
                     const std::string& provenance) {
  namespace fs = std::filesystem;
  const fs::path path(out_path);
  const fs::path dir = path.parent_path().empty() ? "." : path.parent_path();
  const fs::path manifest = dir / "manifest.json";
  nlohmann::json j;
  if (fs::exists(manifest)) {
    try {
      j = nlohmann::json::parse(read_file(manifest.string()));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("manifest is not valid JSON: " + std::string(e.what()));
    }
  }
  j["files"][path.filename().string()] = {{"kind", kind},
                                          {"provenance", provenance}};
  write_file(manifest.string(), j.dump(2) + "\n");
}

void emit(const std::string& out, const std::string& content,
          const std::string& kind, const std::string& provenance) {
  if (out.empty()) {
    std::cout << content;
  } else {
    write_file(out, content);
    update_manifest(out, kind, provenance);
  }
}

int cmd_gen(const std::string& kind, std::uint64_t seed, unsigned depth,
            std::size_t levels, const std::string& out) {
  std::string content;
  if (kind == "martingale") {
    content = serialize_martingale(gen_martingale(seed, depth));
  } else if (kind == "schnorr-test") {
    content = serialize_schnorr_test(gen_schnorr_test(seed, levels));
  } else if (kind == "layered") {
    content = serialize_layered(gen_layered(seed, depth, levels));
  } else {
    content = serialize_source(gen_source(seed));
  }
  std::string provenance = "gen " + kind + " --seed " + std::to_string(seed);
  if (kind == "martingale" || kind == "layered") {
    provenance += " --depth " + std::to_string(depth);
  }
  if (kind == "schnorr-test" || kind == "layered") {
    provenance += " --levels " + std::to_string(levels);
  }
  emit(out, content, kind, provenance);
  return 0;
}

int cmd_check(const std::string& file, bool csv) {
  const LoadedObject object = load_object(read_file(file));
  return print_records(check_object(object), csv) ? 0 : 3;
}

// Conversion matrix; each arm re-verifies what the construction promises.
int cmd_convert(const std::string& file, const std::string& to,
                std::int64_t horizon_flag, std::size_t levels,
                const std::string& out, bool csv) {
  const LoadedObject object = load_object(read_file(file));
  std::vector<CheckRecord> records;
  std::string content;

  if (object.schnorr && to == "layered") {
    const IntegralTest t = schnorr_to_integral(*object.schnorr);
    const StepFunction flat = t.body.flatten();
    bool counts_ok = true;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << flat.depth()); ++i) {
      const BitString x = BitString::from_cell_index(flat.depth(), i);
      if (flat.cell_value(i) !=
          Rational(static_cast<long>(object.schnorr->membership_count(x)))) {
        counts_ok = false;
      }
    }
    records.push_back({"membership-count",
                       "t(X) = number of levels covering X, all cells",
                       counts_ok ? "holds" : "deviates", counts_ok});
    content = serialize_layered(t.body);
  } else if (object.layered && to == "schnorr-test") {
    const std::size_t horizon =
        horizon_flag >= 0 ? static_cast<std::size_t>(horizon_flag)
                          : saturation_horizon(*object.layered);
    const LayeringPlan plan = build_layering(*object.layered, horizon);
    const PlanCheck check = verify_plan(plan);
    records.push_back({"plan", "all layering invariants hold",
                       check.pass ? "holds" : "fails", check.pass});
    LoadedObject emitted;
    emitted.schnorr = plan.emitted_test;
    for (auto& r : check_object(emitted)) records.push_back(std::move(r));
    content = serialize_schnorr_test(plan.emitted_test);
  } else if (object.martingale && to == "schnorr-test") {
    const SchnorrTest t = martingale_to_test(*object.martingale, levels);
    for (std::size_t n = 1; n <= t.level_count(); ++n) {
      const Rational cap = object.martingale->root() *
                           Rational::pow2(-static_cast<long>(n));
      const bool ok = t.level_measure(n) <= cap;
      records.push_back({"capital-bound[" + std::to_string(n) + "]",
                         "mu(U_n) <= d(root) * 2^-n = " + cap.str(),
                         t.level_measure(n).str(), ok});
    }
    content = serialize_schnorr_test(t);
  } else if (object.schnorr && to == "martingale") {
    const Martingale d = test_to_martingale(*object.schnorr);
    Rational total;
    for (std::size_t n = 1; n <= object.schnorr->level_count(); ++n) {
      total = total + object.schnorr->level_measure(n);
    }
    records.push_back({"root-capital", total.str(), d.root().str(),
                       d.root() == total});
    records.push_back({"fairness", "valid strategy",
                       validate(d) ? "valid" : "invalid", validate(d)});
    content = serialize_martingale(d);
  } else if (object.martingale && to == "martingale-multiplicative") {
    const MultiplicativeMartingale m = to_multiplicative(*object.martingale);
    const Martingale back = from_multiplicative(m);
    const bool ok = back.nodes() == object.martingale->nodes();
    records.push_back({"round-trip", "ratio form rebuilds the table exactly",
                       ok ? "holds" : "deviates", ok});
    content = serialize_multiplicative(m);
  } else if (object.multiplicative && to == "martingale") {
    const Martingale d = from_multiplicative(*object.multiplicative);
    records.push_back({"fairness", "valid strategy",
                       validate(d) ? "valid" : "invalid", validate(d)});
    content = serialize_martingale(d);
  } else {
    throw ParseError("unsupported conversion from '" + object.kind +
                     "' to '" + to + "'");
  }

  const bool all_ok = print_records(records, csv);
  emit(out, content, to,
       "convert " + std::filesystem::path(file).filename().string() +
           " --to " + to);
  return all_ok ? 0 : 3;
}

int cmd_keylemma(const std::string& file, std::int64_t horizon_flag,
                 const std::string& out, bool csv) {
  const LoadedObject object = load_object(read_file(file));
  if (!object.layered) {
    throw ParseError("keylemma needs a layered-function file");
  }
  const std::size_t horizon =
      horizon_flag >= 0 ? static_cast<std::size_t>(horizon_flag)
                        : saturation_horizon(*object.layered);
  const LayeringPlan plan = build_layering(*object.layered, horizon);

  print_row({"m", "k_m", "c_m", "mu(V_m)", "mu(U_m)"}, csv);
  for (std::size_t m = 0; m <= plan.horizon; ++m) {
    print_row({std::to_string(m), std::to_string(plan.partial_sum_indices[m]),
               m == 0 ? "-" : plan.cut_level(m).str(),
               m == 0 ? "-" : plan.exceedance_measure(m).str(),
               plan.u_measures[m].str()},
              csv);
  }
  print_row({"saturated",
             plan.saturated ? "at n = " + std::to_string(*plan.saturation_index)
                            : "no (horizon too small)"},
            csv);

  const PlanCheck check = verify_plan(plan);
  std::vector<CheckRecord> records;
  for (const auto& r : check.records) {
    records.push_back({r.name, "holds", r.detail, r.ok});
  }
  const bool all_ok = print_records(records, csv);
  emit(out, serialize_plan(plan), "layering-plan",
       "keylemma " + std::filesystem::path(file).filename().string() +
           " --horizon " + std::to_string(horizon));
  return all_ok ? 0 : 3;
}

int cmd_run(const std::string& file, const std::string& source_spec,
            std::size_t steps, bool csv) {
  const LoadedObject object = load_object(read_file(file));
  const BitSource source = BitSource::parse_spec(source_spec);
  if (object.martingale) {
    const CapitalTrajectory traj = run(*object.martingale, source, steps);
    print_row({"step", "prefix", "capital"}, csv);
    for (std::size_t k = 0; k < traj.capitals.size(); ++k) {
      print_row({std::to_string(k), source.prefix(k).str(),
                 traj.capitals[k].str()},
                csv);
    }
    return 0;
  }
  if (object.layered) {
    const EvalResult r = evaluate(*object.layered, source, steps);
    print_row({"value", "level"}, csv);
    print_row({r.value.str(), std::to_string(r.level)}, csv);
    return 0;
  }
  throw ParseError("run needs a martingale or layered-function file");
}

int cmd_split(const std::string& file, const std::string& oracle_spec,
              std::int64_t depth_flag, const std::string& out, bool csv) {
  const LoadedObject object = load_object(read_file(file));
  if (!object.martingale) {
    throw ParseError("split needs a martingale file");
  }
  const Martingale& d = *object.martingale;
  const unsigned out_depth = depth_flag >= 0
                                 ? static_cast<unsigned>(depth_flag)
                                 : d.depth() / 2;
  const BitSource oracle = BitSource::parse_spec(oracle_spec);

  // the oracle is the interleaved environment: even positions feed the odd
  // split and vice versa
  const Martingale even_side =
      split_van_lambalgen(d, Side::even, odd_part(oracle), out_depth);
  const Martingale odd_side =
      split_van_lambalgen(d, Side::odd, even_part(oracle), out_depth);

  std::vector<CheckRecord> records;
  records.push_back({"even-valid", "valid strategy",
                     validate(even_side) ? "valid" : "invalid",
                     validate(even_side)});
  records.push_back({"odd-valid", "valid strategy",
                     validate(odd_side) ? "valid" : "invalid",
                     validate(odd_side)});

  // diagonal identity along the supplied environment
  const BitString a = even_part(oracle).prefix(out_depth);
  const BitString b = odd_part(oracle).prefix(out_depth);
  const bool diag_ok = even_side.at(a) * odd_side.at(b) ==
                       d.at(interleave_word(a, b));
  records.push_back({"oracle-identity",
                     "d0(a) * d1(b) = d(a interleaved b) on the environment",
                     diag_ok ? "holds" : "deviates", diag_ok});

  // exhaustive identity over every prefix pair, each side conditioned on the
  // other's word
  const std::uint64_t words = std::uint64_t{1} << out_depth;
  std::uint64_t pass_count = 0;
  for (std::uint64_t i = 0; i < words; ++i) {
    const BitString aw = BitString::from_cell_index(out_depth, i);
    for (std::uint64_t k = 0; k < words; ++k) {
      const BitString bw = BitString::from_cell_index(out_depth, k);
      const Martingale d0 = split_van_lambalgen(
          d, Side::even, BitSource::from_word(bw), out_depth);
      const Martingale d1 = split_van_lambalgen(
          d, Side::odd, BitSource::from_word(aw), out_depth);
      if (d0.at(aw) * d1.at(bw) == d.at(interleave_word(aw, bw))) {
        ++pass_count;
      }
    }
  }
  const bool product_ok = pass_count == words * words;
  records.push_back(
      {"product-identity", "exact for all pairs",
       (product_ok ? "pass (" : "FAIL (") + std::to_string(pass_count) + "/" +
           std::to_string(words * words) + " pairs)",
       product_ok});

  const bool all_ok = print_records(records, csv);
  const std::string stem =
      std::filesystem::path(file).filename().string();
  if (out.empty()) {
    std::cout << serialize_martingale(even_side);
    std::cout << serialize_martingale(odd_side);
  } else {
    emit(out + ".even.json", serialize_martingale(even_side), "martingale",
         "split " + stem + " --oracle " + oracle_spec + " (even side)");
    emit(out + ".odd.json", serialize_martingale(odd_side), "martingale",
         "split " + stem + " --oracle " + oracle_spec + " (odd side)");
  }
  return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-arithmetic toolkit for coverage tests, betting "
               "strategies, and layered integral tests on finite bit grids"};
  app.require_subcommand(1);

  std::string kind, file, out, to_kind, source_spec, oracle_spec;
  std::string format = "table";
  std::uint64_t seed = 1;
  unsigned depth = 4;
  std::size_t levels = 3;
  std::size_t steps = 16;
  std::int64_t horizon = -1;
  std::int64_t split_depth = -1;

  auto add_format = [&format](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"table", "csv"}));
  };

  CLI::App* gen = app.add_subcommand("gen", "generate a deterministic fixture");
  gen->add_option("kind", kind, "martingale | schnorr-test | layered | source")
      ->required()
      ->check(CLI::IsMember({"martingale", "schnorr-test", "layered", "source"}));
  gen->add_option("--seed", seed, "fixture seed (default 1)");
  gen->add_option("--depth", depth, "grid depth (martingale, layered)");
  gen->add_option("--levels", levels,
                  "level count (schnorr-test) or layer count (layered)");
  gen->add_option("-o,--output", out, "output file (stdout when absent)");

  CLI::App* check = app.add_subcommand("check", "re-verify a serialized object");
  check->add_option("file", file, "object file")->required();
  add_format(check);

  CLI::App* convert = app.add_subcommand("convert", "convert between kinds");
  convert->add_option("file", file, "object file")->required();
  convert->add_option("--to", to_kind, "target kind")->required();
  convert->add_option("--horizon", horizon,
                      "layering horizon (default: saturation)");
  convert->add_option("--levels", levels, "emitted level count (martingale)");
  convert->add_option("-o,--output", out, "output file (stdout when absent)");
  add_format(convert);

  CLI::App* keylemma =
      app.add_subcommand("keylemma", "build and verify a layering plan");
  keylemma->add_option("file", file, "layered-function file")->required();
  keylemma->add_option("--horizon", horizon,
                       "layering horizon (default: saturation)");
  keylemma->add_option("-o,--output", out, "plan file (stdout when absent)");
  add_format(keylemma);

  CLI::App* run_cmd =
      app.add_subcommand("run", "bet a strategy along a bit source, or "
                                "evaluate a layered function at one");
  run_cmd->add_option("file", file, "martingale or layered-function file")
      ->required();
  run_cmd->add_option("--source", source_spec,
                      "bit source, e.g. periodic:01 | rational:3/7 | "
                      "prng:seed=42 | word:0110")
      ->required();
  run_cmd->add_option("--steps", steps, "steps to bet / evaluation budget");
  add_format(run_cmd);

  CLI::App* split = app.add_subcommand(
      "split", "split a strategy over interleaved coordinates");
  split->add_option("file", file, "martingale file")->required();
  split->add_option("--oracle", oracle_spec, "interleaved environment source")
      ->required();
  split->add_option("--depth", split_depth,
                    "output depth (default: half the input depth)");
  split->add_option("-o,--output", out,
                    "output prefix; writes <prefix>.even.json and "
                    "<prefix>.odd.json");
  add_format(split);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const bool csv = format == "csv";
  try {
    if (gen->parsed()) return cmd_gen(kind, seed, depth, levels, out);
    if (check->parsed()) return cmd_check(file, csv);
    if (convert->parsed()) {
      return cmd_convert(file, to_kind, horizon, levels, out, csv);
    }
    if (keylemma->parsed()) return cmd_keylemma(file, horizon, out, csv);
    if (run_cmd->parsed()) return cmd_run(file, source_spec, steps, csv);
    if (split->parsed()) {
      return cmd_split(file, oracle_spec, split_depth, out, csv);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
