#include "anonmet/report_json.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace anonmet {

namespace {

Json finite_or_token(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string verdict_reason(VerdictReason r) {
  switch (r) {
    case VerdictReason::WitnessFound: return "witness_found";
    case VerdictReason::ClassicalExcluded: return "excluded_classical_form";
    case VerdictReason::SeparableExcluded: return "excluded_separable";
    case VerdictReason::SearchExhausted: return "search_exhausted";
  }
  return "unknown";
}

std::string encoder_name(Encoder e) { return e == Encoder::A ? "A" : "B"; }

std::string fmt(double v, int prec = 10) {
  std::ostringstream os;
  if (std::isinf(v)) {
    os << (v > 0 ? "inf" : "-inf");
  } else {
    os << std::setprecision(prec) << v;
  }
  return os.str();
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw LoadError("matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j.at(0).is_array() ? j.at(0).size() : 0;
  if (cols == 0) throw LoadError("matrix rows must be non-empty arrays");
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const Json& row = j.at(r);
    if (!row.is_array() || row.size() != cols) throw LoadError("matrix rows have inconsistent lengths");
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& e = row.at(c);
      if (!e.is_array() || e.size() != 2 || !e.at(0).is_number() || !e.at(1).is_number()) {
        throw LoadError("matrix entries must be [re, im] number pairs");
      }
      m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

Json state_to_json(const DensityMatrix& rho, const std::optional<StateSpec>& meta) {
  Json j;
  j["format"] = "anonmet-state";
  j["version"] = 1;
  j["dims"] = rho.dims();
  j["matrix"] = matrix_to_json(rho.mat());
  if (meta) {
    Json m;
    m["name"] = meta->name;
    m["parameters"] = meta->parameters;
    j["metadata"] = std::move(m);
  }
  return j;
}

DensityMatrix state_from_json(const Json& j) {
  if (!j.is_object()) throw LoadError("state file must be a JSON object");
  if (!j.contains("dims") || !j.contains("matrix")) throw LoadError("state file needs 'dims' and 'matrix'");
  Dims dims;
  for (const Json& d : j.at("dims")) {
    if (!d.is_number_integer()) throw LoadError("dims must be integers");
    const int v = d.get<int>();
    if (v < 2) throw LoadError("subsystem dimensions must be >= 2");
    dims.push_back(v);
  }
  if (dims.empty()) throw LoadError("dims must be non-empty");
  const Matrix m = matrix_from_json(j.at("matrix"));
  return DensityMatrix(dims, m);  // invariant failures surface with residuals
}

void save_state(const std::string& path, const DensityMatrix& rho, const std::optional<StateSpec>& meta) {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot open '" + path + "' for writing");
  out << state_to_json(rho, meta).dump(2) << "\n";
}

DensityMatrix load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw LoadError(std::string("parse error in '") + path + "': " + e.what(), static_cast<long>(e.byte));
  }
  return state_from_json(j);
}

Json pair_to_json(const HamiltonianPair& pair) {
  Json j;
  j["h_a"] = matrix_to_json(pair.h_a.mat());
  j["g_b"] = matrix_to_json(pair.g_b.mat());
  return j;
}

HamiltonianPair pair_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("h_a") || !j.contains("g_b")) {
    throw LoadError("Hamiltonian pair file needs 'h_a' and 'g_b'");
  }
  return HamiltonianPair{HermitianOperator(matrix_from_json(j.at("h_a"))),
                         HermitianOperator(matrix_from_json(j.at("g_b")))};
}

//---------------------------------------------------------------------------
// Report serialization
//---------------------------------------------------------------------------

Json to_json(const ClassificationReport& r) {
  Json j;
  j["schema_version"] = 1;
  j["report"] = "classification";

  Json wa;
  wa["aligned_discord"] = r.wa.found;
  wa["reason"] = verdict_reason(r.wa.reason);
  wa["degenerate_caveat"] = r.wa.degenerate_caveat;
  if (r.wa.witness) wa["witness"] = pair_to_json(*r.wa.witness);
  j["wa"] = std::move(wa);

  Json sa;
  sa["aligned_entanglement"] = r.sa.found;
  sa["reason"] = verdict_reason(r.sa.reason);
  sa["degenerate_caveat"] = r.sa.degenerate_caveat;
  if (r.sa.witness) sa["witness"] = pair_to_json(*r.sa.witness);
  j["sa"] = std::move(sa);

  Json ppt;
  ppt["entangled"] = r.ppt.npt;
  ppt["min_pt_eigenvalue"] = r.ppt.min_pt_eigenvalue;
  ppt["conclusive"] = r.ppt.conclusive;
  j["ppt"] = std::move(ppt);

  Json cl;
  cl["cc"] = r.classical.cc;
  cl["cq"] = r.classical.cq;
  cl["qc"] = r.classical.qc;
  cl["conclusive"] = r.classical.conclusive;
  j["classical"] = std::move(cl);

  j["notes"] = r.notes;
  return j;
}

Json to_json(const MeritReport& r, MeritDirection direction) {
  Json j;
  j["schema_version"] = 1;
  j["report"] = "merit";
  j["qfi_a"] = r.qfi_a;
  j["qfi_b"] = r.qfi_b;
  j["avg_qfi"] = r.avg_qfi;
  j["min_fidelity"] = r.min_fidelity;
  j["argmin_theta"] = r.argmin_theta;
  j["delta"] = r.delta;
  j["n_delta"] = finite_or_token(r.copy_budget);
  j["merit"] = finite_or_token(r.merit);
  j["direction"] = direction == MeritDirection::Maximize ? "max" : "min";
  j["direction_note"] =
      "merit optimization direction is configurable; both conventions appear in use, default is max";
  return j;
}

Json to_json(const ProtocolTranscript& t) {
  Json j;
  j["schema_version"] = 1;
  j["report"] = "protocol_transcript";
  j["encoder"] = encoder_name(t.encoder);
  j["theta_true"] = t.theta_true;
  j["n_copies"] = t.n_copies;
  j["seed"] = t.seed;
  j["theta_estimate"] = t.theta_estimate;
  j["estimate_stderr"] = finite_or_token(t.estimate_stderr);
  j["flat_likelihood"] = t.flat_likelihood;
  j["charlie_guess"] = encoder_name(t.charlie_guess);
  j["charlie_guess_prob_bound"] = t.charlie_guess_prob_bound;
  j["helstrom_optimal_prob"] = t.helstrom_optimal_prob;
  return j;
}

Json to_json(const RobustnessReport& r) {
  Json j;
  j["schema_version"] = 1;
  j["report"] = "robustness";
  j["epsilon"] = r.epsilon;
  j["wa_guess_bound"] = r.wa_guess_bound;
  j["sa_guess_bound"] = r.sa_guess_bound;
  Json mc = Json::array();
  for (const auto& [n, bound] : r.multicopy_bounds) {
    mc.push_back(Json{{"copies", n}, {"trace_distance_bound", bound}});
  }
  j["multicopy_bounds"] = std::move(mc);
  return j;
}

Json to_json(const AttackResult& r) {
  Json j;
  j["schema_version"] = 1;
  j["report"] = "purification_attack";
  j["applicable"] = r.applicable;
  j["leak"] = r.leak;
  j["max_leak"] = r.max_leak;
  j["sa_safe"] = r.sa_safe;
  return j;
}

Json modes_to_json(const ModeDecomposition& d, double completeness_residual) {
  Json j;
  j["schema_version"] = 1;
  j["report"] = "modes";
  j["generator_spectrum"] = std::vector<double>(
      d.generator_spectrum.data(), d.generator_spectrum.data() + d.generator_spectrum.size());
  Json rows = Json::array();
  for (const auto& [omega, m] : d.modes) {
    Json row;
    row["omega"] = omega;
    row["norm"] = std::sqrt(m.squaredNorm());
    row["matrix"] = matrix_to_json(m);
    rows.push_back(std::move(row));
  }
  j["modes"] = std::move(rows);
  j["completeness_residual"] = completeness_residual;
  return j;
}

//---------------------------------------------------------------------------
// Human-readable tables
//---------------------------------------------------------------------------

namespace {

std::string render_operator(const Matrix& m) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (r) os << "; ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << " ";
      const Complex v = m(r, c);
      if (std::abs(v.imag()) < 1e-12) {
        os << fmt(v.real(), 4);
      } else {
        os << fmt(v.real(), 4) << (v.imag() >= 0 ? "+" : "") << fmt(v.imag(), 4) << "i";
      }
    }
  }
  os << "]";
  return os.str();
}

}  // namespace

std::string render(const ClassificationReport& r) {
  std::ostringstream os;
  os << "classification\n";
  os << "  aligned discord (WA):      " << (r.wa.found ? "yes" : "no") << "  [" << verdict_reason(r.wa.reason)
     << (r.wa.degenerate_caveat ? ", degenerate marginal" : "") << "]\n";
  if (r.wa.witness) {
    os << "    witness H_A = " << render_operator(r.wa.witness->h_a.mat())
       << ", G_B = " << render_operator(r.wa.witness->g_b.mat()) << "\n";
  }
  os << "  aligned entanglement (SA): " << (r.sa.found ? "yes" : "no") << "  [" << verdict_reason(r.sa.reason)
     << (r.sa.degenerate_caveat ? ", degenerate marginal" : "") << "]\n";
  if (r.sa.witness) {
    os << "    witness H_A = " << render_operator(r.sa.witness->h_a.mat())
       << ", G_B = " << render_operator(r.sa.witness->g_b.mat()) << "\n";
  }
  os << "  entangled (PPT test):      " << (r.ppt.npt ? "yes" : (r.ppt.conclusive ? "no" : "undetermined"))
     << "  [min PT eigenvalue " << fmt(r.ppt.min_pt_eigenvalue, 6) << "]\n";
  os << "  classical forms:           cc=" << (r.classical.cc ? "yes" : "no")
     << " cq=" << (r.classical.cq ? "yes" : "no") << " qc=" << (r.classical.qc ? "yes" : "no")
     << (r.classical.conclusive ? "" : "  (inconclusive)") << "\n";
  for (const std::string& n : r.notes) os << "  note: " << n << "\n";
  return os.str();
}

std::string render(const MeritReport& r, MeritDirection direction) {
  std::ostringstream os;
  os << "figure of merit (" << (direction == MeritDirection::Maximize ? "max" : "min") << " convention)\n";
  os << "  QFI side A:        " << fmt(r.qfi_a) << "\n";
  os << "  QFI side B:        " << fmt(r.qfi_b) << "\n";
  os << "  average QFI:       " << fmt(r.avg_qfi) << "\n";
  os << "  min fidelity:      " << fmt(r.min_fidelity) << "  (argmin theta " << fmt(r.argmin_theta, 6) << ")\n";
  os << "  n_delta (delta=" << fmt(r.delta, 3) << "): " << fmt(r.copy_budget) << "\n";
  os << "  merit:             " << fmt(r.merit) << "\n";
  return os.str();
}

std::string render(const ProtocolTranscript& t) {
  std::ostringstream os;
  os << "protocol transcript\n";
  os << "  encoder:                 " << encoder_name(t.encoder) << "\n";
  os << "  theta (true):            " << fmt(t.theta_true) << "\n";
  os << "  copies / seed:           " << t.n_copies << " / " << t.seed << "\n";
  os << "  theta estimate:          " << fmt(t.theta_estimate)
     << (t.flat_likelihood ? "  (flat likelihood: state carries no theta)" : "") << "\n";
  os << "  estimate stderr:         " << fmt(t.estimate_stderr) << "\n";
  os << "  Charlie's guess:         " << encoder_name(t.charlie_guess) << "\n";
  os << "  optimal guess (1 copy):  " << fmt(t.helstrom_optimal_prob) << "\n";
  os << "  optimal guess (all):     " << fmt(t.charlie_guess_prob_bound) << "\n";
  return os.str();
}

std::string render(const RobustnessReport& r) {
  std::ostringstream os;
  os << "robustness bounds (epsilon = " << fmt(r.epsilon, 6) << ")\n";
  os << "  WA guess bound: " << fmt(r.wa_guess_bound) << "\n";
  os << "  SA guess bound: " << fmt(r.sa_guess_bound) << "\n";
  for (const auto& [n, bound] : r.multicopy_bounds) {
    os << "  " << n << " copies: trace-distance bound " << fmt(bound) << "\n";
  }
  return os.str();
}

std::string render(const AttackResult& r) {
  std::ostringstream os;
  os << "purification attack\n";
  if (!r.applicable) {
    os << "  not applicable: the pair does not encode on this state\n";
    return os.str();
  }
  os << "  leak at requested theta: " << fmt(r.leak) << "\n";
  os << "  max leak over grid:      " << fmt(r.max_leak) << "\n";
  os << "  safe against holder of a purification: " << (r.sa_safe ? "yes" : "no") << "\n";
  return os.str();
}

std::string render_modes(const ModeDecomposition& d, double completeness_residual, bool show_matrices) {
  std::ostringstream os;
  os << "mode decomposition (generator spectrum:";
  for (Eigen::Index k = 0; k < d.generator_spectrum.size(); ++k) os << " " << fmt(d.generator_spectrum(k), 6);
  os << ")\n";
  os << "  omega        norm\n";
  for (const auto& [omega, m] : d.modes) {
    os << "  " << std::left << std::setw(12) << fmt(omega, 6) << fmt(std::sqrt(m.squaredNorm())) << "\n";
    if (show_matrices) {
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        os << "    ";
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
          os << "(" << fmt(m(r, c).real(), 4) << "," << fmt(m(r, c).imag(), 4) << ") ";
        }
        os << "\n";
      }
    }
  }
  os << "  completeness residual: " << fmt(completeness_residual) << "\n";
  return os.str();
}

}  // namespace anonmet
