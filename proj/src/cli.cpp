#include "cohwit/cli.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "cohwit/estimation.hpp"
#include "cohwit/states.hpp"
#include "cohwit/witness.hpp"

namespace cohwit::cli {

const char* to_string(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::detected: return "detected";
    case Status::not_detected: return "not_detected";
    case Status::certified: return "certified";
    case Status::rejected: return "rejected";
  }
  return "unknown";
}

int exit_code(Status s) {
  return (s == Status::rejected || s == Status::not_detected) ? 1 : 0;
}

std::string format12(double x) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.12g", x);
  return buf.data();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in.read(buf.data(), buf.size()) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[md[i] >> 4];
    hex += kHex[md[i] & 0xf];
  }
  return hex;
}

void Report::add_input(std::string name, const std::filesystem::path& path) {
  inputs.push_back({std::move(name), path.string(), sha256_file(path)});
}

namespace {

std::string render(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return format12(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(x);
        } else {
          return x;
        }
      },
      v);
}

}  // namespace

std::string Report::text() const {
  std::ostringstream os;
  os << "command: " << command << '\n';
  for (const auto& in : inputs) {
    os << "input." << in.name << ": " << in.path << " sha256=" << in.sha256 << '\n';
  }
  for (const auto& [k, t] : tolerances) os << "tol." << k << ": " << format12(t) << '\n';
  for (const auto& [k, v] : outputs) os << k << ": " << render(v) << '\n';
  os << "status: " << to_string(status) << '\n';
  for (const auto& w : warnings) os << "warning: " << w << '\n';
  return os.str();
}

io::json Report::to_json() const {
  io::json doc;
  doc["command"] = command;
  doc["inputs"] = io::json::array();
  for (const auto& in : inputs) {
    doc["inputs"].push_back({{"name", in.name}, {"path", in.path}, {"sha256", in.sha256}});
  }
  doc["tolerances"] = io::json::object();
  for (const auto& [k, t] : tolerances) doc["tolerances"][k] = t;
  doc["outputs"] = io::json::object();
  for (const auto& [k, v] : outputs) {
    std::visit([&, key = k](const auto& x) { doc["outputs"][key] = x; }, v);
  }
  doc["status"] = to_string(status);
  doc["warnings"] = warnings;
  return doc;
}

namespace {

using std::filesystem::path;

Reference load_measurement(const path& p, double tol = tol::kStructure) {
  return io::measurement_from_json(io::read_json_file(p), tol);
}

ProjectorSet require_projectors(const Reference& ref) {
  if (const auto* p = std::get_if<ProjectorSet>(&ref)) return *p;
  throw InvalidParameter("block kind requires a measurement file of kind \"projectors\"");
}

Reference reference_for_kind(const Reference& ref, const std::string& kind) {
  if (kind == "block") return require_projectors(ref);
  if (const auto* p = std::get_if<ProjectorSet>(&ref)) return p->as_povm();
  return ref;
}

DensityMatrix load_state(const path& p) { return DensityMatrix(io::matrix_from_json(io::read_json_file(p))); }

HermitianOperator load_operator(const path& p) {
  return HermitianOperator(io::matrix_from_json(io::read_json_file(p)));
}

const char* to_string(CertificationBasis b) {
  return b == CertificationBasis::construction ? "construction" : "dephased_psd";
}

// Witness document: a matrix document plus the witness bookkeeping. Readers
// that only need the operator can treat it as a plain matrix file.
io::json witness_to_json(const Witness& w, const std::optional<HermitianOperator>& source_op) {
  io::json doc = io::matrix_to_json(w.op.matrix());
  doc["reference_kind"] = cohwit::to_string(w.kind());
  doc["certified"] = w.certified;
  doc["dephased_min_eigenvalue"] = w.dephased_min_eigenvalue;
  doc["certification_basis"] = to_string(w.basis);
  if (w.source) doc["source_pure"] = io::vector_to_json(w.source->amplitudes());
  if (source_op) doc["source_operator"] = io::matrix_to_json(source_op->matrix());
  return doc;
}

// Rebuilds the witness against `ref`. Constructed witnesses are reconstructed
// from their recorded source and must match the stored operator; bare
// operators are certified from the spectrum of their dephasing.
Witness load_witness(const path& p, const Reference& ref, double tol) {
  const io::json doc = io::read_json_file(p);
  HermitianOperator w(io::matrix_from_json(doc));
  std::optional<Witness> rebuilt;
  if (doc.contains("source_pure")) {
    rebuilt = witness_from_pure(PureState(io::vector_from_json(doc["source_pure"])), ref);
  } else if (doc.contains("source_operator")) {
    rebuilt = construct_witness(HermitianOperator(io::matrix_from_json(doc["source_operator"])), ref);
  }
  if (!rebuilt) return certify_witness(w, ref, tol);
  const double diff = (rebuilt->op.matrix() - w.matrix()).norm();
  if (diff > tol::kPsd) {
    throw InvalidOperator("witness operator does not match its recorded source under this "
                          "reference (||difference||_F = " + format12(diff) + ")");
  }
  return *rebuilt;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "phi,expectation,detection_value\n";
  for (const auto& r : rows) {
    os << format12(r.phi) << ',' << format12(r.expectation) << ',' << format12(r.detection_value)
       << '\n';
  }
}

Report make_report(std::string command) {
  Report r;
  r.command = std::move(command);
  return r;
}

struct Invocation {
  std::string command;
  std::function<Report()> action;
  // Set by commands that write their primary output to `out` themselves.
  bool raw_output = false;
};

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherence witnesses for block and POVM measurements, and QFI under degenerate "
               "Hamiltonians"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "Emit the report as a JSON document");

  Invocation inv;
  std::string csv_text;

  // state make ---------------------------------------------------------------
  auto* state = app.add_subcommand("state", "State factory")->require_subcommand(1);
  struct {
    std::string kind, amplitudes, measurement, out;
    int n = 0;
    double p = 1.0, tol = tol::kPsd;
    long long dim = 0;
    std::uint64_t seed = 0;
    bool as_vector = false;
  } sm;
  auto* make = state->add_subcommand("make", "Write a state as a matrix file");
  make->add_option("--kind", sm.kind, "pure|wstate|noisy_wstate|maximally_mixed|random|random_block_incoherent")
      ->required();
  make->add_option("--n", sm.n, "Number of qubits (W kinds)");
  make->add_option("--p", sm.p, "Mixing weight (noisy_wstate)");
  make->add_option("--seed", sm.seed, "Seed (random kinds)");
  make->add_option("--dim", sm.dim, "Dimension (maximally_mixed, random)");
  make->add_option("--amplitudes", sm.amplitudes, "Vector file (pure)")->check(CLI::ExistingFile);
  make->add_option("--measurement", sm.measurement, "Projector file (random_block_incoherent)")
      ->check(CLI::ExistingFile);
  make->add_flag("--as-vector", sm.as_vector, "Write the state vector (pure, wstate)");
  make->add_option("--tol", sm.tol, "PSD tolerance for the validity report")->check(CLI::NonNegativeNumber);
  make->add_option("--out", sm.out, "Output file")->required();
  make->callback([&] {
    inv.command = "state make";
    inv.action = [&] {
      Report r = make_report(inv.command);
      r.tolerances = {{"psd", sm.tol}};
      StateSpec spec;
      spec.kind = parse_state_kind(sm.kind);
      spec.qubits = sm.n;
      spec.dim = static_cast<Index>(sm.dim);
      spec.p = sm.p;
      spec.seed = sm.seed;
      if (!sm.amplitudes.empty()) {
        r.add_input("amplitudes", sm.amplitudes);
        const ComplexVector v = io::vector_from_json(io::read_json_file(sm.amplitudes));
        spec.amplitudes.assign(v.data(), v.data() + v.size());
      }
      if (!sm.measurement.empty()) {
        r.add_input("measurement", sm.measurement);
        spec.reference = require_projectors(load_measurement(sm.measurement));
      }
      if (sm.as_vector) {
        std::optional<PureState> psi;
        if (spec.kind == StateKind::pure) psi = pure_from_amplitudes(spec.amplitudes);
        if (spec.kind == StateKind::wstate) psi = w_state(spec.qubits);
        if (!psi) throw InvalidParameter("--as-vector applies to kinds pure and wstate only");
        io::write_json_file(sm.out, io::vector_to_json(psi->amplitudes()));
        r.set("dim", static_cast<long long>(psi->dim()));
        r.set("norm", psi->amplitudes().norm());
        return r;
      }
      const DensityMatrix rho = make_state(spec);
      io::write_json_file(sm.out, io::matrix_to_json(rho.matrix()));
      const double lmin = min_eigenvalue(rho.op());
      r.set("kind", std::string(to_string(spec.kind)));
      r.set("dim", static_cast<long long>(rho.dim()));
      r.set("trace", rho.matrix().trace().real());
      r.set("purity", trace_product(rho.matrix(), rho.matrix()).real());
      r.set("min_eigenvalue", lmin);
      r.set("psd", lmin >= -sm.tol);
      return r;
    };
  });

  // measure validate | wstate-family -----------------------------------------
  auto* measure = app.add_subcommand("measure", "Measurement references")->require_subcommand(1);
  struct {
    std::string file, out;
    int n = 0;
    double tol = tol::kStructure;
  } ms;
  auto* validate = measure->add_subcommand("validate", "Check a measurement file");
  validate->add_option("--file", ms.file, "Measurement file")->required()->check(CLI::ExistingFile);
  validate->add_option("--tol", ms.tol, "Structural tolerance")->check(CLI::NonNegativeNumber);
  validate->callback([&] {
    inv.command = "measure validate";
    inv.action = [&] {
      Report r = make_report(inv.command);
      r.tolerances = {{"structure", ms.tol}};
      r.add_input("measurement", ms.file);
      const Reference ref = load_measurement(ms.file, ms.tol);
      r.set("kind", std::string(kind_of(ref) == ReferenceKind::block ? "projectors" : "povm"));
      r.set("dim", static_cast<long long>(dim_of(ref)));
      if (const auto* p = std::get_if<ProjectorSet>(&ref)) {
        r.set("operators", static_cast<long long>(p->size()));
        for (std::size_t s = 0; s < p->size(); ++s) {
          r.set("rank." + std::to_string(s), static_cast<long long>(p->ranks()[s]));
        }
      } else {
        const auto& e = std::get<PovmSet>(ref);
        r.set("operators", static_cast<long long>(e.size()));
        r.set("projective", e.is_projective(ms.tol));
      }
      return r;
    };
  });
  auto* family = measure->add_subcommand("wstate-family", "Write the W-state projector family");
  family->add_option("--n", ms.n, "Number of qubits")->required();
  family->add_option("--out", ms.out, "Output file")->required();
  family->add_option("--tol", ms.tol, "Structural tolerance")->check(CLI::NonNegativeNumber);
  family->callback([&] {
    inv.command = "measure wstate-family";
    inv.action = [&] {
      Report r = make_report(inv.command);
      r.tolerances = {{"structure", ms.tol}};
      const ProjectorSet p = wstate_projector_family(ms.n);
      io::write_json_file(ms.out, io::measurement_to_json(p));
      r.set("dim", static_cast<long long>(p.dim()));
      r.set("operators", static_cast<long long>(p.size()));
      for (std::size_t s = 0; s < p.size(); ++s) {
        r.set("rank." + std::to_string(s), static_cast<long long>(p.ranks()[s]));
      }
      return r;
    };
  });

  // dephase ------------------------------------------------------------------
  struct {
    std::string kind, state, measurement, out;
    double tol = tol::kTrace;
  } dp;
  auto* deph = app.add_subcommand("dephase", "Apply the block or POVM dephasing map");
  deph->add_option("--kind", dp.kind, "block|povm")->required()->check(CLI::IsMember({"block", "povm"}));
  deph->add_option("--state", dp.state, "Input matrix file")->required()->check(CLI::ExistingFile);
  deph->add_option("--measurement", dp.measurement, "Measurement file")->required()->check(CLI::ExistingFile);
  deph->add_option("--out", dp.out, "Output matrix file")->required();
  deph->add_option("--tol", dp.tol, "Trace-preservation tolerance")->check(CLI::NonNegativeNumber);
  deph->callback([&] {
    inv.command = "dephase";
    inv.action = [&] {
      Report r = make_report(inv.command);
      r.tolerances = {{"trace", dp.tol}};
      r.add_input("state", dp.state);
      r.add_input("measurement", dp.measurement);
      const ComplexMatrix in = io::matrix_from_json(io::read_json_file(dp.state));
      require_square_finite(in, "input matrix");
      const Reference ref = reference_for_kind(load_measurement(dp.measurement), dp.kind);
      const ComplexMatrix outm = dephase(in, ref);
      io::write_json_file(dp.out, io::matrix_to_json(outm));
      const double tr_in = in.trace().real();
      const double tr_out = outm.trace().real();
      r.set("kind", dp.kind);
      r.set("trace_in", tr_in);
      r.set("trace_out", tr_out);
      r.set("trace_preserved", std::abs(tr_out - tr_in) <= dp.tol);
      if (hermiticity_error(in) <= tol::kHermiticity) {
        r.set("min_eigenvalue_out", min_eigenvalue(HermitianOperator::symmetrized(outm)));
      }
      if (std::abs(tr_out - tr_in) > dp.tol) {
        r.warnings.push_back("dephasing changed the trace; output is not renormalized");
      }
      return r;
    };
  });

  // witness build | certify | eval -------------------------------------------
  auto* witness = app.add_subcommand("witness", "Coherence witnesses")->require_subcommand(1);
  struct {
    std::string measurement, op, pure, out, witness, state, violating_out;
    double tol = tol::kPsd;
  } wt;
  auto* build = witness->add_subcommand("build", "Construct W = dephase(A) - A");
  build->add_option("--measurement", wt.measurement, "Measurement file")->required()->check(CLI::ExistingFile);
  auto* op_opt = build->add_option("--operator", wt.op, "Hermitian operator file A")->check(CLI::ExistingFile);
  auto* pure_opt = build->add_option("--pure", wt.pure, "State vector file phi (A = |phi><phi|)")
                       ->check(CLI::ExistingFile);
  op_opt->excludes(pure_opt);
  build->add_option("--out", wt.out, "Witness output file")->required();
  build->add_option("--tol", wt.tol, "PSD tolerance")->check(CLI::NonNegativeNumber);
  build->callback([&] {
    inv.command = "witness build";
    inv.action = [&] {
      Report r = make_report(inv.command);
      r.tolerances = {{"psd", wt.tol}};
      r.add_input("measurement", wt.measurement);
      const Reference ref = load_measurement(wt.measurement);
      std::optional<Witness> w;
      std::optional<HermitianOperator> source_op;
      if (!wt.pure.empty()) {
        r.add_input("pure", wt.pure);
        w = witness_from_pure(PureState(io::vector_from_json(io::read_json_file(wt.pure))), ref);
      } else if (!wt.op.empty()) {
        r.add_input("operator", wt.op);
        source_op = load_operator(wt.op);
        w = construct_witness(*source_op, ref);
      } else {
        throw InvalidParameter("witness build needs --operator or --pure");
      }
      io::write_json_file(wt.out, witness_to_json(*w, source_op));
      r.set("reference_kind", std::string(cohwit::to_string(w->kind())));
      r.set("dim", static_cast<long long>(w->op.dim()));
      r.set("certified", w->certified);
      r.set("dephased_min_eigenvalue", w->dephased_min_eigenvalue);
      r.set("certification_basis", std::string(to_string(w->basis)));
      if (w->basis == CertificationBasis::construction) {
        r.warnings.push_back("dephased witness is not PSD under this non-projective POVM; "
                             "status rests on the zero-mean construction");
      }
      r.status = w->certified ? Status::certified : Status::rejected;
      return r;
    };
  });

  auto* certify = witness->add_subcommand("certify", "Decide whether an operator is a witness");
  certify->add_option("--witness", wt.witness, "Operator file")->required()->check(CLI::ExistingFile);
  certify->add_option("--measurement", wt.measurement, "Measurement file")->required()->check(CLI::ExistingFile);
  certify->add_option("--violating-out", wt.violating_out, "Write the violating state here when rejected");
  certify->add_option("--tol", wt.tol, "PSD tolerance")->check(CLI::NonNegativeNumber);
  certify->callback([&] {
    inv.command = "witness certify";
    inv.action = [&] {
      Report r = make_report(inv.command);
      r.tolerances = {{"psd", wt.tol}};
      r.add_input("witness", wt.witness);
      r.add_input("measurement", wt.measurement);
      const Reference ref = load_measurement(wt.measurement);
      const HermitianOperator op = load_operator(wt.witness);
      const Witness w = certify_witness(op, ref, wt.tol);
      r.set("reference_kind", std::string(cohwit::to_string(w.kind())));
      r.set("certified", w.certified);
      r.set("dephased_min_eigenvalue", w.dephased_min_eigenvalue);
      r.status = w.certified ? Status::certified : Status::rejected;
      if (w.certified) return r;
      if (const auto* p = std::get_if<ProjectorSet>(&ref)) {
        const auto delta = violating_state(op, *p, wt.tol);
        if (delta) {
          r.set("violating_expectation", trace_product(delta->matrix(), op.matrix()).real());
          if (!wt.violating_out.empty()) {
            io::write_json_file(wt.violating_out, io::matrix_to_json(delta->matrix()));
          }
        }
      } else {
        const auto cert = violating_certificate(op, std::get<PovmSet>(ref), wt.tol);
        if (cert) {
          r.set("violating_expectation", cert->expectation);
          r.set("certificate_trace", cert->trace);
          r.set("certificate_max_cross_norm", cert->max_cross_norm);
          r.set("certificate_verified_incoherent", cert->verified_incoherent);
          if (!cert->verified_incoherent) {
            r.warnings.push_back("non-projective POVM: the certificate's incoherence is "
                                 "asserted by the converse argument, not verified; a negative "
                                 "dephased spectrum does not prove W fails as a witness");
          }
          if (!wt.violating_out.empty()) {
            io::write_json_file(wt.violating_out, io::matrix_to_json(cert->state));
          }
        }
      }
      return r;
    };
  });

  auto* eval = witness->add_subcommand("eval", "Evaluate Tr(rho W)");
  eval->add_option("--witness", wt.witness, "Witness file")->required()->check(CLI::ExistingFile);
  eval->add_option("--measurement", wt.measurement, "Measurement file")->required()->check(CLI::ExistingFile);
  eval->add_option("--state", wt.state, "Density matrix file")->required()->check(CLI::ExistingFile);
  eval->add_option("--tol", wt.tol, "Detection and PSD tolerance")->check(CLI::NonNegativeNumber);
  eval->callback([&] {
    inv.command = "witness eval";
    inv.action = [&] {
      Report r = make_report(inv.command);
      r.tolerances = {{"psd", wt.tol}, {"detection", wt.tol}};
      r.add_input("witness", wt.witness);
      r.add_input("measurement", wt.measurement);
      r.add_input("state", wt.state);
      const Reference ref = load_measurement(wt.measurement);
      const Witness w = load_witness(wt.witness, ref, wt.tol);
      const DetectionResult d = evaluate(w, load_state(wt.state), wt.tol);
      r.set("expectation", d.expectation);
      r.set("detection_value", d.detection_value);
      r.set("detected", d.detected);
      r.set("certified", w.certified);
      r.set("dephased_min_eigenvalue", w.dephased_min_eigenvalue);
      if (d.fidelity_dephased) r.set("fidelity_dephased", *d.fidelity_dephased);
      if (d.fidelity_raw) r.set("fidelity_raw", *d.fidelity_raw);
      r.status = d.detected ? Status::detected : Status::not_detected;
      return r;
    };
  });

  // incoherent check ---------------------------------------------------------
  auto* incoherent = app.add_subcommand("incoherent", "Incoherence certification")->require_subcommand(1);
  struct {
    std::string kind, state, measurement;
    double tol = tol::kIncoherence;
  } ic;
  auto* check = incoherent->add_subcommand("check", "Check a state against a reference");
  check->add_option("--kind", ic.kind, "block|povm")->required()->check(CLI::IsMember({"block", "povm"}));
  check->add_option("--state", ic.state, "Density matrix file")->required()->check(CLI::ExistingFile);
  check->add_option("--measurement", ic.measurement, "Measurement file")->required()->check(CLI::ExistingFile);
  check->add_option("--tol", ic.tol, "Cross-norm tolerance")->check(CLI::NonNegativeNumber);
  check->callback([&] {
    inv.command = "incoherent check";
    inv.action = [&] {
      Report r = make_report(inv.command);
      r.tolerances = {{"incoherence", ic.tol}};
      r.add_input("state", ic.state);
      r.add_input("measurement", ic.measurement);
      const DensityMatrix rho = load_state(ic.state);
      const Reference ref = reference_for_kind(load_measurement(ic.measurement), ic.kind);
      const IncoherenceReport rep =
          ic.kind == "block" ? check_block_incoherent(rho, std::get<ProjectorSet>(ref), ic.tol)
                             : check_povm_incoherent(rho, std::get<PovmSet>(ref), ic.tol);
      r.set("kind", ic.kind);
      r.set("incoherent", rep.incoherent);
      r.set("max_cross_norm", rep.max_cross_norm);
      r.set("residual", rep.residual);
      // Coherence is what this command detects.
      r.status = rep.incoherent ? Status::not_detected : Status::detected;
      return r;
    };
  });

  // estimate blocks | qfi | sweep --------------------------------------------
  auto* estimate = app.add_subcommand("estimate", "Parameter estimation")->require_subcommand(1);
  struct {
    std::string hamiltonian, state, witness, measurement, out;
    double tol = tol::kIncoherence, group_tol = tol::kGrouping, null_tol = tol::kNullSpace;
    double phi_start = 0.0, phi_end = 0.0;
    int phi_steps = 0;
  } es;
  auto add_hamiltonian_opts = [&](CLI::App* sub) {
    sub->add_option("--hamiltonian", es.hamiltonian, "Hamiltonian matrix file")->required()->check(CLI::ExistingFile);
    sub->add_option("--group-tol", es.group_tol, "Eigenvalue grouping tolerance")->check(CLI::PositiveNumber);
  };
  auto report_levels = [](Report& r, const DegenerateHamiltonian& h) {
    r.set("levels", static_cast<long long>(h.levels().size()));
    for (std::size_t s = 0; s < h.levels().size(); ++s) {
      r.set("level." + std::to_string(s) + ".energy", h.levels()[s].energy);
      r.set("level." + std::to_string(s) + ".degeneracy",
            static_cast<long long>(h.levels()[s].degeneracy));
    }
  };

  auto* blocks = estimate->add_subcommand("blocks", "Write the eigenspace projectors of H");
  add_hamiltonian_opts(blocks);
  blocks->add_option("--out", es.out, "Measurement output file")->required();
  blocks->add_option("--tol", es.group_tol, "Eigenvalue grouping tolerance")->check(CLI::PositiveNumber);
  blocks->callback([&] {
    inv.command = "estimate blocks";
    inv.action = [&] {
      Report r = make_report(inv.command);
      r.tolerances = {{"grouping", es.group_tol}};
      r.add_input("hamiltonian", es.hamiltonian);
      const DegenerateHamiltonian h = group_eigenspaces(load_operator(es.hamiltonian), es.group_tol);
      io::write_json_file(es.out, io::measurement_to_json(hamiltonian_blocks(h)));
      report_levels(r, h);
      r.set("reconstruction_error", h.reconstruction_error());
      return r;
    };
  });

  auto* qfi_cmd = estimate->add_subcommand("qfi", "Quantum Fisher information of U rho U^dagger");
  add_hamiltonian_opts(qfi_cmd);
  qfi_cmd->add_option("--state", es.state, "Input density matrix file")->required()->check(CLI::ExistingFile);
  qfi_cmd->add_option("--null-tol", es.null_tol, "Support cutoff on c_m + c_n")->check(CLI::NonNegativeNumber);
  qfi_cmd->add_option("--tol", es.tol, "Block-coherence tolerance for estimability")->check(CLI::NonNegativeNumber);
  qfi_cmd->callback([&] {
    inv.command = "estimate qfi";
    inv.action = [&] {
      Report r = make_report(inv.command);
      r.tolerances = {{"estimability", es.tol}, {"grouping", es.group_tol}, {"null_space", es.null_tol}};
      r.add_input("hamiltonian", es.hamiltonian);
      r.add_input("state", es.state);
      const DegenerateHamiltonian h = group_eigenspaces(load_operator(es.hamiltonian), es.group_tol);
      const DensityMatrix rho = load_state(es.state);
      const QfiResult q = qfi(rho, h, es.null_tol);
      const Estimability e = is_estimable(rho, h, es.tol);
      r.set("qfi", q.value);
      r.set("skipped_pairs", static_cast<long long>(q.skipped_pairs));
      r.set("estimable", e.estimable);
      r.set("off_block_norm", e.off_block_norm);
      report_levels(r, h);
      return r;
    };
  });

  auto* sweep_cmd = estimate->add_subcommand("sweep", "Witness expectation along a phi grid (CSV)");
  add_hamiltonian_opts(sweep_cmd);
  sweep_cmd->add_option("--state", es.state, "Input density matrix file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--witness", es.witness, "Witness file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--measurement", es.measurement, "Reference (default: eigenspaces of H)")
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--phi-start", es.phi_start, "First phi (radians)")->required();
  sweep_cmd->add_option("--phi-end", es.phi_end, "Last phi (radians, inclusive)")->required();
  sweep_cmd->add_option("--phi-steps", es.phi_steps, "Number of grid points")->required()->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--out", es.out, "Write the CSV here and print a report instead");
  sweep_cmd->add_option("--tol", es.tol, "PSD tolerance for witness certification")->check(CLI::NonNegativeNumber);
  sweep_cmd->callback([&] {
    inv.command = "estimate sweep";
    inv.raw_output = es.out.empty();
    inv.action = [&] {
      Report r = make_report(inv.command);
      r.tolerances = {{"psd", es.tol}, {"grouping", es.group_tol}};
      r.add_input("hamiltonian", es.hamiltonian);
      r.add_input("state", es.state);
      r.add_input("witness", es.witness);
      const DegenerateHamiltonian h = group_eigenspaces(load_operator(es.hamiltonian), es.group_tol);
      Reference ref = hamiltonian_blocks(h);
      if (!es.measurement.empty()) {
        r.add_input("measurement", es.measurement);
        ref = load_measurement(es.measurement);
      }
      const Witness w = load_witness(es.witness, ref, es.tol);
      const auto grid = phi_grid(es.phi_start, es.phi_end, es.phi_steps);
      const auto rows = sweep(load_state(es.state), h, w, grid);
      std::ostringstream csv;
      write_csv(csv, rows);
      csv_text = csv.str();
      if (!es.out.empty()) {
        std::ofstream f(es.out, std::ios::binary);
        if (!f) throw FormatError("cannot write " + es.out);
        f << csv_text;
      }
      r.set("rows", static_cast<long long>(rows.size()));
      if (!rows.empty()) {
        const auto [lo, hi] = std::minmax_element(
            rows.begin(), rows.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.expectation < b.expectation; });
        r.set("expectation_min", lo->expectation);
        r.set("expectation_max", hi->expectation);
        r.set("expectation_variation", hi->expectation - lo->expectation);
      }
      return r;
    };
  });

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }
  if (!inv.action) {
    err << "error: no command given\n";
    return kInputError;
  }

  Report report;
  try {
    report = inv.action();
  } catch (const Error& e) {
    Report fail = make_report(inv.command);
    fail.status = Status::rejected;
    fail.set("error", std::string(e.what()));
    if (const auto* m = dynamic_cast<const InvalidMeasurement*>(&e)) {
      fail.set("invariant", m->invariant());
      if (m->index()) fail.set("operator_index", static_cast<long long>(*m->index()));
    }
    out << (as_json ? io::canonical(fail.to_json()) : fail.text());
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  if (inv.raw_output) {
    out << csv_text;
  } else {
    out << (as_json ? io::canonical(report.to_json()) : report.text());
  }
  return exit_code(report.status);
}

}  // namespace cohwit::cli
