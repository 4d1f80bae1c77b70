#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "negot/engine.hpp"
#include "negot/expected_cost.hpp"
#include "negot/genkill.hpp"
#include "negot/invariance.hpp"
#include "negot/io.hpp"
#include "negot/max_plus.hpp"
#include "negot/oracle.hpp"

using namespace negot;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitUnsound = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitEngine = 4;

std::size_t config_cap(std::size_t cli_value) {
  if (cli_value) return cli_value;
  if (const char* env = std::getenv("NEGOT_MAX_CONFIGS"))
    return static_cast<std::size_t>(std::strtoull(env, nullptr, 10));
  return kDefaultMaxConfigs;
}

Diagram load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_diagram(ss.str());
}

std::vector<Loc> parse_locs(const Diagram& d, const std::string& csv) {
  std::vector<Loc> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto l = d.loc_by_name(item);
    if (!l) throw std::runtime_error("unknown location " + item);
    out.push_back(*l);
  }
  return out;
}

struct FrameworkChoice {
  std::string id;      // expected-cost | worst-time | genkill
  std::string variant; // may-forward | must-forward | may-backward | must-backward
  std::string gens, kills, loc;
};

struct BuiltFramework {
  std::unique_ptr<Framework> fw;
  bool negate = false; // genkill must-variants: property holds iff undetected
};

BuiltFramework build_framework(const Diagram& d, const FrameworkChoice& c) {
  BuiltFramework b;
  if (c.id == "expected-cost") {
    b.fw = std::make_unique<ExpectedCostFramework>();
  } else if (c.id == "worst-time") {
    b.fw = std::make_unique<MaxPlusFramework>(d.nprocs());
  } else if (c.id == "genkill") {
    if (c.loc.empty()) throw std::runtime_error("genkill requires --loc");
    auto l = d.loc_by_name(c.loc);
    if (!l) throw std::runtime_error("unknown location " + c.loc);
    GKVariant v = GKVariant::MayForward;
    if (c.variant == "must-forward") v = GKVariant::MustForward;
    else if (c.variant == "may-backward") v = GKVariant::MayBackward;
    else if (c.variant == "must-backward") v = GKVariant::MustBackward;
    else if (!c.variant.empty() && c.variant != "may-forward")
      throw std::runtime_error("unknown variant " + c.variant);
    auto cg = compile_genkill_variant(d, parse_locs(d, c.gens),
                                      parse_locs(d, c.kills), *l, v);
    b.negate = cg.negate;
    b.fw = std::make_unique<GenKillFramework>(d, cg.spec);
  } else {
    throw std::runtime_error("unknown framework " + c.id);
  }
  return b;
}

void add_framework_opts(CLI::App* cmd, FrameworkChoice& c) {
  cmd->add_option("--framework", c.id, "expected-cost | worst-time | genkill")
      ->required();
  cmd->add_option("--variant", c.variant,
                  "genkill variant (may/must x forward/backward)");
  cmd->add_option("--gen", c.gens, "comma-separated gen locations");
  cmd->add_option("--kill", c.kills, "comma-separated kill locations");
  cmd->add_option("--loc", c.loc, "focus location (node.outcome)");
}

std::string soundness_name(SoundStatus s) {
  switch (s) {
    case SoundStatus::Sound: return "sound";
    case SoundStatus::Unsound: return "unsound";
    default: return "inconclusive";
  }
}

int run_check(const std::string& file, std::size_t cap) {
  Diagram d = load(file);
  auto det = is_deterministic(d);
  auto sv = check_soundness(d, cap);
  std::cout << "diagram: " << d.name << "\n";
  std::cout << "deterministic: " << (det.deterministic ? "true" : "false")
            << "\n";
  std::cout << "soundness: " << soundness_name(sv.status) << "\n";
  if (sv.status == SoundStatus::Unsound) {
    std::cout << "witness:";
    for (Loc l : sv.witness) std::cout << ' ' << d.loc_name(l);
    std::cout << "\n";
    return kExitUnsound;
  }
  if (sv.status == SoundStatus::LimitExceeded) return kExitInconclusive;
  return kExitOk;
}

json value_json(const Diagram& d, const Framework& fw,
                const BuiltFramework& bf, const std::any& value) {
  json v;
  v["shown"] = fw.show_val(value);
  auto num_den = [](const Rat& r) {
    return numerator(r).str() + "/" + denominator(r).str();
  };
  if (auto* ec = std::any_cast<ECPair>(&value)) {
    v["mass"] = num_den(ec->mass);
    v["cost"] = num_den(ec->cost);
    v["decimal"] = show_decimal(ec->cost);
    v["infinite"] = ec->infinite;
  } else if (auto* mp = std::any_cast<MPVec>(&value)) {
    json times = json::array();
    for (const auto& t : *mp) times.push_back(show_mp(t));
    v["per_process"] = times;
    v["makespan"] = show_mp(makespan(*mp));
  } else if (auto* gk = dynamic_cast<const GenKillFramework*>(&fw)) {
    bool det = gk->detects(value);
    v["detected"] = det;
    v["property_holds"] = bf.negate ? !det : det;
  }
  (void)d;
  return v;
}

int run_analyze(const std::string& file, const FrameworkChoice& choice,
                bool oracle_check, bool as_json, std::size_t cap) {
  Diagram d = load(file);
  json rep;
  rep["version"] = 1;
  rep["diagram"] = d.name;
  rep["framework"] = choice.id;
  auto det = is_deterministic(d);
  rep["deterministic"] = det.deterministic;
  auto sv = check_soundness(d, cap);
  rep["soundness"] = soundness_name(sv.status);
  rep["config_cap"] = cap;
  int code = kExitOk;
  if (!det.deterministic || sv.status != SoundStatus::Sound) {
    code = !det.deterministic || sv.status == SoundStatus::Unsound
               ? kExitUnsound
               : kExitInconclusive;
  } else {
    BuiltFramework bf = build_framework(d, choice);
    try {
      auto res = compute_mop(d, *bf.fw);
      rep["result"] = value_json(d, *bf.fw, bf, res.value);
      rep["transformer"] = bf.fw->show_xf(res.xf);
      rep["steps"] = res.trace.steps.size();
      if (oracle_check) {
        auto ov = brute_mop(d, *bf.fw, scheduler_by_id(d), {}, cap);
        rep["oracle"] = {{"checked", true},
                         {"value", value_json(d, *bf.fw, bf, ov)},
                         {"agree", bf.fw->val_equal(res.value, ov)}};
        if (!bf.fw->val_equal(res.value, ov)) code = kExitEngine;
      }
    } catch (const EngineError& e) {
      rep["error"] = e.what();
      std::cerr << "engine failure: " << e.what() << "\n"
                << "hint: run 'check' with a higher NEGOT_MAX_CONFIGS; the "
                   "reduction only succeeds on sound deterministic input\n";
      code = kExitEngine;
    }
  }
  if (as_json) {
    std::cout << rep.dump(2) << "\n";
  } else {
    std::cout << "diagram: " << d.name << "\nframework: " << choice.id << "\n";
    std::cout << "deterministic: " << (det.deterministic ? "true" : "false")
              << "\nsoundness: " << soundness_name(sv.status) << "\n";
    if (rep.contains("result")) {
      std::cout << "result: " << rep["result"]["shown"].get<std::string>()
                << "\n";
      if (rep["result"].contains("decimal"))
        std::cout << "decimal: " << rep["result"]["decimal"].get<std::string>()
                  << "\n";
      if (rep["result"].contains("makespan"))
        std::cout << "makespan: "
                  << rep["result"]["makespan"].get<std::string>() << "\n";
      if (rep["result"].contains("property_holds"))
        std::cout << "property holds: "
                  << (rep["result"]["property_holds"].get<bool>() ? "true"
                                                                  : "false")
                  << "\n";
      std::cout << "reduction steps: " << rep["steps"].get<std::size_t>()
                << "\n";
    }
    if (rep.contains("oracle"))
      std::cout << "oracle agreement: "
                << (rep["oracle"]["agree"].get<bool>() ? "yes" : "NO") << "\n";
  }
  return code;
}

int run_decompose(const std::string& file, const std::string& node,
                  const std::string& location, const std::string& emit,
                  std::size_t cap) {
  Diagram d = load(file);
  Subnegotiation sub;
  if (!node.empty()) {
    Nid n = d.node_by_name(node);
    if (n < 0) throw std::runtime_error("unknown node " + node);
    Config i = initial_config_of_node(d, n, cap);
    std::cout << "I(" << node << "):";
    for (Pid p = 0; p < d.nprocs(); ++p)
      std::cout << ' ' << d.nodes[i.at[p][0]].name;
    std::cout << "\n";
    Config f = final_config_of_node(d, n, cap);
    std::cout << "F(" << node << "):";
    for (Pid p = 0; p < d.nprocs(); ++p)
      std::cout << ' ' << d.nodes[f.at[p][0]].name;
    std::cout << "\n";
    sub = subnegotiation_of_node(d, n, cap);
  } else if (!location.empty()) {
    auto l = d.loc_by_name(location);
    if (!l) throw std::runtime_error("unknown location " + location);
    Config f = final_config_of_location(d, *l, cap);
    std::cout << "F(" << location << "):";
    for (Pid p = 0; p < d.nprocs(); ++p)
      std::cout << ' ' << d.nodes[f.at[p][0]].name;
    std::cout << "\n";
    sub = subnegotiation_of_location(d, *l, cap);
  } else {
    throw CLI::ValidationError("decompose", "need --node or --location");
  }
  const char* kinds[] = {"one-trace", "replication", "general"};
  std::cout << "class: " << kinds[static_cast<int>(classify(sub))] << "\n";
  if (emit == "dot")
    std::cout << emit_dot(sub);
  else
    std::cout << render_diagram(sub.d);
  return kExitOk;
}

int run_oracle(const std::string& file, const FrameworkChoice& choice,
               const std::string& sched_csv, int max_len, std::size_t cap) {
  Diagram d = load(file);
  PriorityScheduler s = scheduler_by_id(d);
  if (!sched_csv.empty()) {
    std::vector<std::string> names;
    std::stringstream ss(sched_csv);
    std::string item;
    while (std::getline(ss, item, ',')) names.push_back(item);
    s = scheduler_prefer(d, names);
  }
  auto rs = enumerate_runs(d, s, max_len);
  std::cout << "runs: " << rs.runs.size()
            << (rs.truncated ? " (truncated)" : "") << "\n";
  BuiltFramework bf = build_framework(d, choice);
  auto v = brute_mop(d, *bf.fw, s, {}, cap);
  std::cout << "oracle value: " << bf.fw->show_val(v) << "\n";
  return kExitOk;
}

int run_invariance(const std::string& file, const FrameworkChoice& choice,
                   const std::string& mode, unsigned seed, int count) {
  Diagram d = load(file);
  BuiltFramework bf = build_framework(d, choice);
  auto m = mode == "sampled" ? InvarianceMode::Sampled : InvarianceMode::Exact;
  auto v = check_invariance(d, *bf.fw, m, count, seed);
  if (v.invariant) {
    std::cout << "invariant: yes\n";
    return kExitOk;
  }
  std::cout << "invariant: NO\n";
  if (v.witness)
    std::cout << "witness pair: " << d.loc_name(v.witness->first) << " , "
              << d.loc_name(v.witness->second) << "\n";
  return kExitUnsound;
}

int run_trace(const std::string& file, const FrameworkChoice& choice,
              const std::string& dir) {
  Diagram d = load(file);
  BuiltFramework bf = build_framework(d, choice);
  auto res = compute_mop(d, *bf.fw);
  for (std::size_t i = 0; i < res.trace.steps.size(); ++i) {
    const auto& st = res.trace.steps[i];
    std::cout << i << ": "
              << (st.kind == ReductionStep::Kind::Location ? "location "
                                                           : "node ")
              << st.pivot << " -> " << bf.fw->show_xf(st.xf) << "\n";
  }
  std::cout << "final: " << bf.fw->show_val(res.value) << "\n";
  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < res.trace.snapshots.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "stage-%03zu.dot", i);
      std::ofstream out(std::filesystem::path(dir) / name);
      out << emit_dot(res.trace, static_cast<int>(i));
    }
    std::cout << "wrote " << res.trace.snapshots.size() << " stages to " << dir
              << "\n";
  }
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"static analysis toolkit for negotiation diagrams"};
  app.require_subcommand(1);

  std::string file, node, location, emit = "text", sched_csv, dir;
  std::string mode = "exact";
  std::size_t cli_cap = 0;
  int max_len = -1, count = 32;
  unsigned seed = 1;
  bool oracle_check = false, as_json = false;
  FrameworkChoice choice;

  auto* check = app.add_subcommand("check", "determinism + soundness");
  check->add_option("file", file)->required();
  check->add_option("--max-configs", cli_cap);

  auto* analyze = app.add_subcommand("analyze", "run the reduction engine");
  analyze->add_option("file", file)->required();
  add_framework_opts(analyze, choice);
  analyze->add_flag("--oracle-check", oracle_check);
  analyze->add_flag("--json", as_json);
  analyze->add_option("--max-configs", cli_cap);

  auto* decompose = app.add_subcommand("decompose", "extract a subnegotiation");
  decompose->add_option("file", file)->required();
  decompose->add_option("--node", node);
  decompose->add_option("--location", location);
  decompose->add_option("--emit", emit, "dot | text");

  auto* oracle = app.add_subcommand("oracle", "brute-force reference run");
  oracle->add_option("file", file)->required();
  add_framework_opts(oracle, choice);
  oracle->add_option("--scheduler", sched_csv, "priority node list");
  oracle->add_option("--max-len", max_len);

  auto* invariance = app.add_subcommand("invariance", "commutation check");
  invariance->add_option("file", file)->required();
  add_framework_opts(invariance, choice);
  invariance->add_option("--mode", mode, "exact | sampled");
  invariance->add_option("--seed", seed);
  invariance->add_option("--count", count);

  auto* trace = app.add_subcommand("trace", "reduction trace + DOT stages");
  trace->add_option("file", file)->required();
  add_framework_opts(trace, choice);
  trace->add_option("--emit-stages", dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::size_t cap = config_cap(cli_cap);
    if (check->parsed()) return run_check(file, cap);
    if (analyze->parsed())
      return run_analyze(file, choice, oracle_check, as_json, cap);
    if (decompose->parsed())
      return run_decompose(file, node, location, emit, cap);
    if (oracle->parsed())
      return run_oracle(file, choice, sched_csv, max_len, cap);
    if (invariance->parsed())
      return run_invariance(file, choice, mode, seed, count);
    if (trace->parsed()) return run_trace(file, choice, dir);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const EngineError& e) {
    std::cerr << "engine failure: " << e.what() << "\n";
    return kExitEngine;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
