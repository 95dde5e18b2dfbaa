// anonmet: classify quantum states as anonymous-metrology resources, compute
// the associated figures of merit, and simulate the three-party protocol.
//
// Exit codes: 0 success, 2 input error, 3 state-invariant violation,
// 4 inconclusive result under --strict.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anonmet/report_json.hpp"

using namespace anonmet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitInconclusive = 4;

struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  double tol = 1e-10;
  std::uint64_t seed = 1;
  int search_bound = 3;
  int grid_points = 256;
  bool json = false;
  bool strict = false;
};

void apply_tolerance(double base) {
  if (base <= 0 || base > 1e-2) throw InputError("--tol must be in (0, 1e-2]");
  const double f = base / 1e-10;
  Tolerances& t = tol();
  t.herm = base;
  t.trace = base;
  t.norm = base;
  t.eig = base;
  t.psd = 1e-9 * f;
  t.freq = 1e-8 * f;
  t.hold = 1e-9 * f;
  t.fail = std::max(1e-6 * f, 100.0 * t.hold);
}

struct StateInput {
  std::string file;
  std::string catalog;
  std::vector<std::string> params;
};

StateSpec parse_spec(const StateInput& in) {
  StateSpec spec;
  spec.name = in.catalog;
  for (const std::string& p : in.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw InputError("--param expects key=value, got '" + p + "'");
    try {
      spec.parameters[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
    } catch (const std::exception&) {
      throw InputError("--param value in '" + p + "' is not a number");
    }
  }
  return spec;
}

DensityMatrix resolve_state(const StateInput& in) {
  if (in.file.empty() == in.catalog.empty()) {
    throw InputError("provide exactly one of --state FILE or --catalog NAME");
  }
  if (!in.catalog.empty()) {
    try {
      return make_state(parse_spec(in));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  std::ifstream f(in.file);
  if (!f) throw LoadError("cannot open '" + in.file + "'");
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw LoadError("parse error in '" + in.file + "': " + e.what(), static_cast<long>(e.byte));
  }
  try {
    return state_from_json(j);
  } catch (const std::invalid_argument& e) {
    throw InvariantViolation(std::string("state in '") + in.file + "' violates invariants: " + e.what());
  }
}

HermitianOperator parse_generator(const std::string& spec, int dim) {
  if (spec.rfind("proj", 0) == 0) {
    const int level = std::stoi(spec.substr(4));
    if (level < 0 || level >= dim) throw InputError("projector level out of range in '" + spec + "'");
    Matrix m = Matrix::Zero(dim, dim);
    m(level, level) = 1.0;
    return HermitianOperator(m);
  }
  if (spec.rfind("diag:", 0) == 0) {
    std::vector<double> entries;
    std::stringstream ss(spec.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) entries.push_back(std::stod(item));
    if (static_cast<int>(entries.size()) != dim) {
      throw InputError("diagonal generator in '" + spec + "' does not match dimension " + std::to_string(dim));
    }
    Matrix m = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) m(k, k) = entries[k];
    return HermitianOperator(m);
  }
  throw InputError("unrecognized generator spec '" + spec + "' (use projK or diag:...)");
}

// Pair specs: "proj1" (both sides), "diag:h0,h1,...:g0,g1,...", or a JSON
// file holding h_a and g_b matrices.
HamiltonianPair parse_pair(const std::string& spec, const Dims& dims) {
  if (dims.size() != 2) throw InputError("Hamiltonian pairs need a bipartite state");
  try {
    if (spec.rfind("proj", 0) == 0) {
      return HamiltonianPair{parse_generator(spec, dims[0]), parse_generator(spec, dims[1])};
    }
    if (spec.rfind("diag:", 0) == 0) {
      const auto second = spec.find(':', 5);
      if (second == std::string::npos) throw InputError("pair spec needs two diagonals: diag:h...:g...");
      return HamiltonianPair{parse_generator("diag:" + spec.substr(5, second - 5), dims[0]),
                             parse_generator("diag:" + spec.substr(second + 1), dims[1])};
    }
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("bad generator numbers: ") + e.what());
  }
  std::ifstream f(spec);
  if (!f) throw LoadError("cannot open pair file '" + spec + "'");
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw LoadError("parse error in '" + spec + "': " + e.what(), static_cast<long>(e.byte));
  }
  return pair_from_json(j);
}

void emit(const GlobalOptions& g, const Json& j, const std::string& table) {
  if (g.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << table;
  }
}

//---------------------------------------------------------------------------
// Commands
//---------------------------------------------------------------------------

int cmd_classify(const GlobalOptions& g, const StateInput& in, int random_bases) {
  const DensityMatrix rho = resolve_state(in);
  if (rho.subsystems() != 2) throw InputError("classify handles bipartite states");
  SearchOptions opts;
  opts.spectrum_bound = g.search_bound;
  opts.seed = g.seed;
  opts.random_basis_draws = random_bases;
  ClassificationReport report = classify(rho, opts);

  if (in.catalog == "werner") {
    const StateSpec spec = parse_spec(in);
    const double a = spec.parameters.count("a") ? spec.parameters.at("a") : 0.0;
    if (a > 0.5) report.notes.push_back("steerable regime (a > 1/2)");
    if (a > 1.0 / std::sqrt(2.0)) report.notes.push_back("Bell-nonlocal regime (a > 1/sqrt(2))");
  }

  emit(g, to_json(report), render(report));
  const bool inconclusive = report.wa.degenerate_caveat || report.sa.degenerate_caveat || !report.classical.conclusive;
  if (g.strict && inconclusive) return kExitInconclusive;
  return kExitOk;
}

int cmd_modes(const GlobalOptions& g, const StateInput& in, const std::string& gen_spec,
              const std::string& side_name, bool show_matrices) {
  const DensityMatrix rho = resolve_state(in);
  if (rho.subsystems() != 2) throw InputError("modes handles bipartite states");
  const Side side = side_name == "B" ? Side::B : Side::A;
  const int dim = rho.dims()[side == Side::A ? 0 : 1];
  const HermitianOperator h = parse_generator(gen_spec, dim);

  const ModeDecomposition d = mode_decompose(rho, h, side);
  Matrix sum = Matrix::Zero(rho.dim(), rho.dim());
  for (const auto& [omega, m] : d.modes) sum += m;
  const double completeness = max_abs(sum - rho.mat());

  emit(g, modes_to_json(d, completeness), render_modes(d, completeness, show_matrices));
  return kExitOk;
}

int cmd_merit(const GlobalOptions& g, const StateInput& in, const std::string& pair_spec, bool optimize,
              double delta, const std::string& direction, int restarts, int steps) {
  const DensityMatrix rho = resolve_state(in);
  const MeritDirection dir = direction == "min" ? MeritDirection::Minimize : MeritDirection::Maximize;
  const ThetaGrid grid{g.grid_points, 4};

  if (optimize) {
    MeritOptimizerOptions opts;
    opts.direction = dir;
    opts.seed = g.seed;
    opts.delta = delta;
    opts.restarts = restarts;
    opts.steps = steps;
    const StateMerit sm = state_merit(rho, opts);
    Json j;
    j["schema_version"] = 1;
    j["report"] = "state_merit";
    j["direction"] = direction == "min" ? "min" : "max";
    j["merit"] = std::isinf(sm.value) ? Json("inf") : Json(sm.value);
    j["h_a"] = matrix_to_json(sm.best_pair[0]);
    j["g_b"] = matrix_to_json(sm.best_pair[1]);
    std::ostringstream table;
    table << "state merit (" << (dir == MeritDirection::Maximize ? "max" : "min")
          << " over unit-norm generator pairs)\n  merit: " << (std::isinf(sm.value) ? "inf" : std::to_string(sm.value))
          << "\n";
    emit(g, j, table.str());
    return kExitOk;
  }

  if (pair_spec.empty()) throw InputError("merit needs --pair SPEC or --optimize");
  const HamiltonianPair pair = parse_pair(pair_spec, rho.dims());
  try {
    const MeritReport r = figure_of_merit(rho, pair, delta, grid);
    emit(g, to_json(r, dir), render(r, dir));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return kExitOk;
}

int cmd_simulate(const GlobalOptions& g, const StateInput& in, const std::string& pair_spec,
                 const std::string& encoder_name, double theta, int copies) {
  const DensityMatrix rho = resolve_state(in);
  const HamiltonianPair pair = parse_pair(pair_spec, rho.dims());
  const Encoder encoder = encoder_name == "B" ? Encoder::B : Encoder::A;
  try {
    const ProtocolTranscript t = run_protocol(rho, pair, encoder, theta, copies, g.seed, 1024);
    emit(g, to_json(t), render(t));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return kExitOk;
}

int cmd_robustness(const GlobalOptions& g, double epsilon, std::vector<int> copies) {
  if (copies.empty()) copies = {1, 2, 3, 4};
  try {
    const RobustnessReport r = robustness_bounds(epsilon, copies);
    emit(g, to_json(r), render(r));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return kExitOk;
}

int cmd_attack(const GlobalOptions& g, const StateInput& in, const std::string& pair_spec, double theta) {
  const DensityMatrix rho = resolve_state(in);
  const HamiltonianPair pair = parse_pair(pair_spec, rho.dims());
  try {
    const AttackResult r = purification_attack(rho, pair, theta, ThetaGrid{g.grid_points, 4});
    emit(g, to_json(r), render(r));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return kExitOk;
}

int cmd_save(const StateInput& in, const std::string& out_path) {
  if (in.catalog.empty()) throw InputError("save needs --catalog NAME");
  const StateSpec spec = parse_spec(in);
  DensityMatrix rho = resolve_state(in);
  save_state(out_path, rho, spec);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anonymous-metrology resource classifier and protocol simulator"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--tol", g.tol, "base validation tolerance (default 1e-10)")->envname("ANONMET_TOL");
  app.add_option("--seed", g.seed, "seed for all randomized steps")->envname("ANONMET_SEED");
  app.add_option("--search-bound", g.search_bound, "integer spectrum bound for witness searches")
      ->envname("ANONMET_SEARCH_BOUND");
  app.add_option("--grid-points", g.grid_points, "theta grid resolution")->envname("ANONMET_GRID_POINTS");
  app.add_flag("--json", g.json, "emit machine-readable JSON")->envname("ANONMET_JSON");
  app.add_flag("--strict", g.strict, "exit 4 when any verdict is inconclusive");

  const auto add_state_options = [](CLI::App* cmd, StateInput* in) {
    cmd->fallthrough();  // global flags may follow the subcommand
    cmd->add_option("--state", in->file, "state file (JSON)");
    cmd->add_option("--catalog", in->catalog, "catalog state name");
    cmd->add_option("--param", in->params, "catalog parameter key=value (repeatable)");
  };

  StateInput classify_in;
  int classify_random_bases = 0;
  CLI::App* classify_cmd = app.add_subcommand("classify", "WA/SA witnesses and correlation hierarchy");
  add_state_options(classify_cmd, &classify_in);
  classify_cmd->add_option("--random-bases", classify_random_bases,
                           "extra random basis draws inside degenerate eigenspaces");

  StateInput modes_in;
  std::string modes_gen = "proj1", modes_side = "A";
  bool modes_show = false;
  CLI::App* modes_cmd = app.add_subcommand("modes", "mode decomposition for a local generator");
  add_state_options(modes_cmd, &modes_in);
  modes_cmd->add_option("--hamiltonian", modes_gen, "generator spec (projK or diag:...)");
  modes_cmd->add_option("--side", modes_side, "A or B")->check(CLI::IsMember({"A", "B"}));
  modes_cmd->add_flag("--show-matrices", modes_show, "print mode matrices");

  StateInput merit_in;
  std::string merit_pair, merit_direction = "max";
  bool merit_optimize = false;
  double merit_delta = 0.1;
  int merit_restarts = 20, merit_steps = 200;
  CLI::App* merit_cmd = app.add_subcommand("merit", "QFI, copy budget, figure of merit");
  add_state_options(merit_cmd, &merit_in);
  merit_cmd->add_option("--pair", merit_pair, "generator pair (proj1, diag:h:g, or file)");
  merit_cmd->add_flag("--optimize", merit_optimize, "optimize over unit-norm generator pairs");
  merit_cmd->add_option("--delta", merit_delta, "guessing-advantage budget in (0, 1/2)");
  merit_cmd->add_option("--direction", merit_direction, "min or max")->check(CLI::IsMember({"min", "max"}));
  merit_cmd->add_option("--restarts", merit_restarts, "optimizer restarts");
  merit_cmd->add_option("--steps", merit_steps, "optimizer coordinate steps per restart");

  StateInput sim_in;
  std::string sim_pair = "proj1", sim_encoder = "A";
  double sim_theta = 1.0;
  int sim_copies = 100;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "run the three-party protocol");
  add_state_options(sim_cmd, &sim_in);
  sim_cmd->add_option("--pair", sim_pair, "generator pair");
  sim_cmd->add_option("--encoder", sim_encoder, "A or B")->check(CLI::IsMember({"A", "B"}));
  sim_cmd->add_option("--theta", sim_theta, "true parameter in [0, 2pi)");
  sim_cmd->add_option("--copies", sim_copies, "number of transmitted copies");

  double rob_epsilon = 0.0;
  std::vector<int> rob_copies;
  CLI::App* rob_cmd = app.add_subcommand("robustness", "closeness-to-ideal guessing bounds");
  rob_cmd->fallthrough();
  rob_cmd->add_option("--epsilon", rob_epsilon, "verified trace distance to the ideal state")->required();
  rob_cmd->add_option("--copies", rob_copies, "copy counts (comma separated)")->delimiter(',');

  StateInput attack_in;
  std::string attack_pair = "proj1";
  double attack_theta = 1.0;
  CLI::App* attack_cmd = app.add_subcommand("attack", "purification attack leak");
  add_state_options(attack_cmd, &attack_in);
  attack_cmd->add_option("--pair", attack_pair, "generator pair");
  attack_cmd->add_option("--theta", attack_theta, "encoding parameter");

  StateInput save_in;
  std::string save_out;
  CLI::App* save_cmd = app.add_subcommand("save", "write a catalog state to a state file");
  add_state_options(save_cmd, &save_in);
  save_cmd->add_option("--out", save_out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    apply_tolerance(g.tol);
    if (classify_cmd->parsed()) return cmd_classify(g, classify_in, classify_random_bases);
    if (modes_cmd->parsed()) return cmd_modes(g, modes_in, modes_gen, modes_side, modes_show);
    if (merit_cmd->parsed()) {
      return cmd_merit(g, merit_in, merit_pair, merit_optimize, merit_delta, merit_direction,
                       merit_restarts, merit_steps);
    }
    if (sim_cmd->parsed()) return cmd_simulate(g, sim_in, sim_pair, sim_encoder, sim_theta, sim_copies);
    if (rob_cmd->parsed()) return cmd_robustness(g, rob_epsilon, rob_copies);
    if (attack_cmd->parsed()) return cmd_attack(g, attack_in, attack_pair, attack_theta);
    if (save_cmd->parsed()) return cmd_save(save_in, save_out);
    std::cerr << "no subcommand selected\n";
    return kExitInput;
  } catch (const InvariantViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const LoadError& e) {
    std::cerr << "error: " << e.what();
    if (e.position >= 0) std::cerr << " (byte " << e.position << ")";
    std::cerr << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
