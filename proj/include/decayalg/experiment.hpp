#pragma once

// Batch experiments over random locally nuclear operators, plus the report
// checker behind `decayalg verify-report`.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "decayalg/blocking_kernel.hpp"
#include "decayalg/cd_operator.hpp"
#include "decayalg/serialize.hpp"
#include "decayalg/weights.hpp"

namespace decayalg {

struct EnvelopeProfile {
  enum class Kind { exponential, polynomial, custom } kind = Kind::exponential;
  double rate = 1.0;       // exponential: beta_m ~ exp(-rate |m|)
  double power = 2.0;      // polynomial:  beta_m ~ (1 + |m|)^-power
  double amplitude = 1.0;  // prefactor when no l1 target is given
  std::optional<double> l1_target;  // rescale so that sum_m beta_m equals this
  std::vector<std::pair<LatticeIndex, double>> table;  // custom
};

struct WienerSettings {
  std::string symbol = "2+u";             // Laurent polynomial in u (c = 1)
  std::optional<FiniteSeq> sequence;      // overrides symbol when present
  std::size_t grid = 1024;
  Coord out_radius = 40;
  std::optional<double> residual_cap;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  int c = 1;
  Coord N = 16;
  Coord W = 2;
  std::size_t d = 4;
  std::size_t q = 2;
  std::size_t block_rank = 4;
  int trials = 1;
  Boundary boundary = Boundary::circulant;
  Weight weight;
  EnvelopeProfile profile;
  WienerSettings wiener;
  std::string output_dir = ".";

  /// Throws Error(InvalidArgument) describing the first violated constraint.
  void validate() const;
};

ExperimentConfig config_from_json(const json& j);
json to_json(const ExperimentConfig& cfg);

/// The prescribed envelope beta on the band [-W,W]^c.
Envelope profile_envelope(const ExperimentConfig& cfg);

/// Random rank-(block_rank) blocks with trace_norm(b_km) = beta_m r_km,
/// r_km uniform in [0.5, 1]; deterministic in (seed, trial).
CDOperator generate_operator(const ExperimentConfig& cfg, int trial);

struct TrialRecord {
  int trial = 0;
  std::string status = "ok";  // "ok" or the ErrorKind name
  std::string safety;         // "neumann" or "spectral"
  double safety_value = 0.0;  // ||beta||_1, or sigma_min(1 + T) for the spectral check
  double residual = 0.0;
  double condition = 0.0;
  std::optional<double> slope;
  double final_shell_fraction = 0.0;
  double weighted_total = 0.0;
  bool domination_ok = true;
  std::vector<EnvelopeRow> envelope;
};

struct ExperimentReport {
  std::string kind;  // "inverse_closedness"
  ExperimentConfig config;
  std::vector<TrialRecord> records;
  std::optional<double> median_slope;
  double max_residual = 0.0;
  int failed_trials = 0;
};

ExperimentReport run_inverse_closedness(const ExperimentConfig& cfg);

/// Recomputes the aggregate fields from the records.
void recompute_aggregates(ExperimentReport& report);

json to_json(const ExperimentReport& report);

/// Writes report.json and, for csv format, envelope_trial_NNN.csv per trial.
void write_report(const ExperimentReport& report, const std::string& out_dir, bool csv);

struct CoefficientRow {
  Coord k = 0;
  cplx value;
  std::optional<cplx> closed_form;
};

struct PartialSumRow {
  Coord radius = 0;
  double sum = 0.0;
  double increment = 0.0;
};

struct WienerReport {
  std::string status = "ok";
  FiniteSeq input;
  double min_modulus = 0.0;
  double residual = 0.0;
  std::optional<double> closed_form_error;  // max |b_k - closed form|
  std::vector<CoefficientRow> coefficients;
  std::vector<PartialSumRow> partial_sums;  // sum_{|m| <= r} g(m) |b_m|
};

/// Parses expressions such as "2+u", "1-u", "3+u+u^-1", "0.5*u^2 - 2i".
FiniteSeq parse_laurent_symbol(const std::string& expr);

/// Closed-form inverse coefficients of a two-term symbol alpha + beta u^s
/// (s = +-1), when |alpha| != |beta|; nullopt otherwise.
std::optional<cplx> geometric_inverse_coefficient(const FiniteSeq& a, Coord k);

/// Weighted partial sums of an inverse, by shell radius.
std::vector<PartialSumRow> weighted_partial_sums(const FiniteSeq& b, const Weight& g);

WienerReport run_wiener(const ExperimentConfig& cfg);
json to_json(const WienerReport& report);
void write_wiener_report(const WienerReport& report, const std::string& out_dir, bool csv);

struct KernelTrial {
  int trial = 0;
  double relative_error = 0.0;
};

struct KernelReport {
  std::vector<KernelTrial> trials;
  double max_relative_error = 0.0;
};

/// Generates one operator with local dimension q^c, assembles its kernel from
/// SVD factorisations and compares kernel quadrature with blockwise
/// application on `trials` random grid functions.
KernelReport run_kernel(const ExperimentConfig& cfg, Kernel* kernel_out = nullptr);
json to_json(const KernelReport& report);

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Checks aggregates against the per-trial records, the envelope-table
/// arithmetic and the recorded domination flags.
VerifyResult verify_report(const json& report);

/// Worker count: DECAYALG_THREADS if set (>= 1), else hardware concurrency.
unsigned worker_count();

}  // namespace decayalg
