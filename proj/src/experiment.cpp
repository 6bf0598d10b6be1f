#include "decayalg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "decayalg/error.hpp"
#include "decayalg/rng.hpp"

namespace decayalg {

// --------------------------------------------------------------- config I/O

void ExperimentConfig::validate() const {
  const auto check = [](bool ok, const std::string& what) { require(ok, ErrorKind::InvalidArgument, what); };
  check(c >= 1 && c <= 3, "c must be in 1..3");
  check(N >= 0, "N must be >= 0");
  check(W >= 0, "W must be >= 0");
  check(boundary == Boundary::dirichlet ? W <= 2 * N : W <= N, "band radius too large for the window");
  check(d >= 1, "d must be >= 1");
  check(q >= 1, "q must be >= 1");
  check(block_rank >= 1 && block_rank <= d, "block_rank must satisfy 1 <= block_rank <= d");
  check(trials >= 1, "trials must be >= 1");
  if (profile.kind == EnvelopeProfile::Kind::exponential) check(profile.rate > 0.0, "exponential rate must be > 0");
  if (profile.kind == EnvelopeProfile::Kind::polynomial) check(profile.power >= 0.0, "polynomial power must be >= 0");
  if (profile.l1_target) check(*profile.l1_target >= 0.0, "l1 target must be >= 0");
  check(profile.amplitude >= 0.0, "amplitude must be >= 0");
  for (const auto& [m, beta] : profile.table) {
    check(m.dim() == c, "custom table offset has wrong dimension");
    check(beta >= 0.0, "custom table values must be >= 0");
  }
}

ExperimentConfig config_from_json(const json& j) {
  require(j.is_object(), ErrorKind::InvalidArgument, "config must be a JSON object");
  try {
    ExperimentConfig cfg;
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.c = j.value("c", 1);
    cfg.N = j.value("N", Coord{16});
    cfg.W = j.value("W", Coord{2});
    cfg.d = j.value("d", std::size_t{4});
    cfg.q = j.value("q", std::size_t{2});
    cfg.block_rank = j.value("block_rank", cfg.d);
    cfg.trials = j.value("trials", 1);
    cfg.boundary = boundary_from_string(j.value("boundary", std::string("circulant")));
    if (j.contains("weight")) cfg.weight = weight_from_json(j.at("weight"));
    cfg.output_dir = j.value("output_dir", std::string("."));
    if (j.contains("envelope_profile")) {
      const json& p = j.at("envelope_profile");
      const std::string kind = p.value("kind", std::string("exponential"));
      if (kind == "exponential")
        cfg.profile.kind = EnvelopeProfile::Kind::exponential;
      else if (kind == "polynomial")
        cfg.profile.kind = EnvelopeProfile::Kind::polynomial;
      else if (kind == "custom")
        cfg.profile.kind = EnvelopeProfile::Kind::custom;
      else
        fail(ErrorKind::InvalidArgument, "unknown envelope profile '" + kind + "'");
      cfg.profile.rate = p.value("rate", 1.0);
      cfg.profile.power = p.value("power", 2.0);
      cfg.profile.amplitude = p.value("amplitude", 1.0);
      if (p.contains("l1_norm")) cfg.profile.l1_target = p.at("l1_norm").get<double>();
      if (p.contains("table"))
        for (const auto& e : p.at("table"))
          cfg.profile.table.emplace_back(lattice_index_from_json(e.at("m")), e.at("beta").get<double>());
    }
    if (j.contains("wiener")) {
      const json& w = j.at("wiener");
      cfg.wiener.symbol = w.value("symbol", cfg.wiener.symbol);
      if (w.contains("sequence")) cfg.wiener.sequence = finite_seq_from_json(w.at("sequence"));
      cfg.wiener.grid = w.value("grid", cfg.wiener.grid);
      cfg.wiener.out_radius = w.value("out_radius", cfg.wiener.out_radius);
      if (w.contains("residual_cap")) cfg.wiener.residual_cap = w.at("residual_cap").get<double>();
    }
    return cfg;
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Format) fail(ErrorKind::InvalidArgument, e.what());
    throw;
  }
}

json to_json(const ExperimentConfig& cfg) {
  json profile;
  switch (cfg.profile.kind) {
    case EnvelopeProfile::Kind::exponential: profile["kind"] = "exponential"; profile["rate"] = cfg.profile.rate; break;
    case EnvelopeProfile::Kind::polynomial: profile["kind"] = "polynomial"; profile["power"] = cfg.profile.power; break;
    case EnvelopeProfile::Kind::custom: {
      profile["kind"] = "custom";
      json table = json::array();
      for (const auto& [m, beta] : cfg.profile.table) table.push_back({{"m", to_json(m)}, {"beta", beta}});
      profile["table"] = table;
      break;
    }
  }
  profile["amplitude"] = cfg.profile.amplitude;
  if (cfg.profile.l1_target) profile["l1_norm"] = *cfg.profile.l1_target;

  json wiener = {{"symbol", cfg.wiener.symbol}, {"grid", cfg.wiener.grid}, {"out_radius", cfg.wiener.out_radius}};
  if (cfg.wiener.sequence) wiener["sequence"] = to_json(*cfg.wiener.sequence);
  if (cfg.wiener.residual_cap) wiener["residual_cap"] = *cfg.wiener.residual_cap;

  return {{"format_version", kFormatVersion},
          {"seed", cfg.seed},
          {"c", cfg.c},
          {"N", cfg.N},
          {"W", cfg.W},
          {"d", cfg.d},
          {"q", cfg.q},
          {"block_rank", cfg.block_rank},
          {"trials", cfg.trials},
          {"boundary", to_string(cfg.boundary)},
          {"weight", to_json(cfg.weight)},
          {"envelope_profile", profile},
          {"wiener", wiener},
          {"output_dir", cfg.output_dir}};
}

// ---------------------------------------------------------------- generator

Envelope profile_envelope(const ExperimentConfig& cfg) {
  const Window band(cfg.c, cfg.W);
  Envelope env{band, std::vector<double>(band.size(), 0.0)};
  const IndexNorm kind = cfg.weight.index_norm();
  for (std::size_t i = 0; i < band.size(); ++i) {
    const double r = norm(band.index(i), kind);
    switch (cfg.profile.kind) {
      case EnvelopeProfile::Kind::exponential: env.values[i] = std::exp(-cfg.profile.rate * r); break;
      case EnvelopeProfile::Kind::polynomial: env.values[i] = std::pow(1.0 + r, -cfg.profile.power); break;
      case EnvelopeProfile::Kind::custom: break;
    }
  }
  if (cfg.profile.kind == EnvelopeProfile::Kind::custom) {
    for (const auto& [m, beta] : cfg.profile.table)
      if (band.contains(m)) env.values[band.linear(m)] = beta;
  }
  double scale = cfg.profile.amplitude;
  if (cfg.profile.l1_target) {
    const double total = env.l1();
    scale = total > 0.0 ? *cfg.profile.l1_target / total : 0.0;
  }
  for (double& v : env.values) v *= scale;
  return env;
}

CDOperator generate_operator(const ExperimentConfig& cfg, int trial) {
  cfg.validate();
  const Envelope beta = profile_envelope(cfg);
  Rng rng(cfg.seed, static_cast<std::uint64_t>(trial));
  CDOperator t(cfg.c, cfg.N, cfg.W, cfg.d, cfg.boundary);
  std::vector<cplx> y(cfg.d), a(cfg.d);
  for (std::size_t k = 0; k < t.window().size(); ++k) {
    for (std::size_t m = 0; m < t.band().size(); ++m) {
      // The same number of draws per block regardless of beta keeps trials
      // replayable when only the profile changes.
      const double r = rng.uniform(0.5, 1.0);
      DenseBlock b(cfg.d);
      for (std::size_t i = 0; i < cfg.block_rank; ++i) {
        for (auto& v : y) v = rng.complex_normal();
        for (auto& v : a) v = rng.complex_normal();
        b += DenseBlock::outer(y, a);
      }
      const double target = beta.values[m] * r;
      const double tn = trace_norm(b);
      if (target > 0.0 && tn > 0.0)
        b *= target / tn;
      else
        b = DenseBlock(cfg.d);
      t.set_block(t.window().index(k), t.band().index(m), std::move(b));
    }
  }
  return t;
}

// ------------------------------------------------------------------ threads

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DECAYALG_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

namespace {

// Runs fn(i) for i in [0, count) on up to worker_count() threads. Results are
// written by index, so scheduling never affects output order.
template <class Fn>
void parallel_for(int count, Fn&& fn) {
  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max(count, 1)));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string trial_name(const std::string& prefix, int trial, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%03d", trial);
  return prefix + buf + ext;
}

json to_json(const EnvelopeRow& r) {
  return {{"m", to_json(r.m)},
          {"beta", r.beta},
          {"weight", r.weight},
          {"weighted_beta", r.weighted_beta},
          {"cumsum", r.cumsum}};
}

}  // namespace

// ------------------------------------------------------ inverse closedness

ExperimentReport run_inverse_closedness(const ExperimentConfig& cfg) {
  cfg.validate();
  require(cfg.boundary == Boundary::circulant, ErrorKind::InvalidArgument,
          "inverse-closedness experiments require the circulant boundary");
  ExperimentReport report;
  report.kind = "inverse_closedness";
  report.config = cfg;
  report.records.resize(static_cast<std::size_t>(cfg.trials));
  const double beta_l1 = profile_envelope(cfg).l1();
  const IndexNorm kind = cfg.weight.index_norm();

  parallel_for(cfg.trials, [&](int trial) {
    TrialRecord rec;
    rec.trial = trial;
    try {
      const CDOperator t = generate_operator(cfg, trial);
      if (beta_l1 < 1.0) {
        rec.safety = "neumann";
        rec.safety_value = beta_l1;
      } else {
        rec.safety = "spectral";
        DenseBlock a = densify(plus_identity(t));
        const auto s = singular_values(a);
        rec.safety_value = s.empty() ? 0.0 : s.back();
      }
      const InverseOnePlus inv = invert_one_plus(t, cfg.weight);
      rec.residual = inv.residual;
      rec.condition = inv.condition;
      rec.envelope = inv.envelope_report;
      rec.slope = envelope_decay_slope(rec.envelope, kind);
      rec.final_shell_fraction = final_shell_fraction(rec.envelope, kind);
      rec.weighted_total = rec.envelope.empty() ? 0.0 : rec.envelope.back().cumsum;
      rec.domination_ok = domination_excess(inv.envelope, inv.t1, NormKind::nuclear()) <= 0.0;
    } catch (const Error& e) {
      rec.status = std::string(to_string(e.kind()));
    }
    report.records[static_cast<std::size_t>(trial)] = std::move(rec);
  });

  recompute_aggregates(report);
  return report;
}

void recompute_aggregates(ExperimentReport& report) {
  std::vector<double> slopes;
  report.max_residual = 0.0;
  report.failed_trials = 0;
  for (const auto& r : report.records) {
    if (r.status != "ok") {
      ++report.failed_trials;
      continue;
    }
    report.max_residual = std::max(report.max_residual, r.residual);
    if (r.slope) slopes.push_back(*r.slope);
  }
  report.median_slope = slopes.empty() ? std::nullopt : std::optional<double>(median(slopes));
}

json to_json(const ExperimentReport& report) {
  json records = json::array();
  for (const auto& r : report.records) {
    json env = json::array();
    for (const auto& row : r.envelope) env.push_back(to_json(row));
    records.push_back({{"trial", r.trial},
                       {"status", r.status},
                       {"safety", r.safety},
                       {"safety_value", r.safety_value},
                       {"residual", r.residual},
                       {"condition_estimate", r.condition},
                       {"slope", r.slope ? json(*r.slope) : json(nullptr)},
                       {"final_shell_fraction", r.final_shell_fraction},
                       {"weighted_total", r.weighted_total},
                       {"domination_ok", r.domination_ok},
                       {"envelope", env}});
  }
  json cfg = to_json(report.config);
  cfg.erase("output_dir");  // a location, not a parameter; reruns elsewhere stay byte-identical
  return {{"format_version", kFormatVersion},
          {"kind", report.kind},
          {"config", cfg},
          {"records", records},
          {"aggregates",
           {{"median_slope", report.median_slope ? json(*report.median_slope) : json(nullptr)},
            {"max_residual", report.max_residual},
            {"failed_trials", report.failed_trials}}}};
}

void write_report(const ExperimentReport& report, const std::string& out_dir, bool csv) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream os(std::filesystem::path(out_dir) / "report.json");
    os << to_json(report).dump(2) << "\n";
  }
  if (!csv) return;
  for (const auto& r : report.records) {
    if (r.status != "ok") continue;
    std::ofstream os(std::filesystem::path(out_dir) / trial_name("envelope_trial_", r.trial, ".csv"));
    write_envelope_csv(os, r.envelope, report.config.c);
  }
}

// ------------------------------------------------------------------- Wiener

FiniteSeq parse_laurent_symbol(const std::string& expr) {
  std::string s;
  for (char ch : expr)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  require(!s.empty(), ErrorKind::InvalidArgument, "empty symbol expression");

  std::vector<std::pair<Coord, cplx>> terms;
  std::size_t pos = 0;
  const auto bad = [&](const std::string& why) {
    fail(ErrorKind::InvalidArgument, "symbol '" + expr + "': " + why + " at position " + std::to_string(pos));
  };
  while (pos < s.size()) {
    double sign = 1.0;
    while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      if (s[pos] == '-') sign = -sign;
      ++pos;
    }
    if (pos >= s.size()) bad("dangling sign");
    cplx coef = 1.0;
    bool have_coef = false;
    if (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.') {
      const char* begin = s.c_str() + pos;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      pos += static_cast<std::size_t>(end - begin);
      coef = v;
      have_coef = true;
    }
    if (pos < s.size() && s[pos] == 'i') {
      coef *= cplx(0.0, 1.0);
      have_coef = true;
      ++pos;
    }
    if (pos < s.size() && s[pos] == '*') {
      if (!have_coef) bad("'*' without coefficient");
      ++pos;
    }
    Coord power = 0;
    if (pos < s.size() && s[pos] == 'u') {
      ++pos;
      power = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        const bool braced = pos < s.size() && (s[pos] == '{' || s[pos] == '(');
        if (braced) ++pos;
        const char* begin = s.c_str() + pos;
        char* end = nullptr;
        const long long e = std::strtoll(begin, &end, 10);
        if (end == begin) bad("missing exponent");
        pos += static_cast<std::size_t>(end - begin);
        if (braced) {
          if (pos >= s.size() || (s[pos] != '}' && s[pos] != ')')) bad("unclosed exponent");
          ++pos;
        }
        power = e;
      }
    } else if (!have_coef) {
      bad("expected a number or 'u'");
    }
    if (pos < s.size() && s[pos] != '+' && s[pos] != '-') bad("unexpected character");
    terms.emplace_back(power, sign * coef);
  }

  Coord radius = 0;
  for (const auto& [p, v] : terms) radius = std::max<Coord>(radius, p < 0 ? -p : p);
  FiniteSeq a(1, radius);
  for (const auto& [p, v] : terms) a.add(LatticeIndex{p}, v);
  return a;
}

namespace {

cplx ipow(cplx z, Coord n) {
  cplx r = 1.0;
  for (Coord i = 0; i < n; ++i) r *= z;
  return r;
}

}  // namespace

std::optional<cplx> geometric_inverse_coefficient(const FiniteSeq& a, Coord k) {
  if (a.dim() != 1) return std::nullopt;
  std::vector<std::pair<Coord, cplx>> nz;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    if (a.values()[i] != cplx{}) nz.emplace_back(a.window().index(i)[0], a.values()[i]);
  if (nz.size() == 1) {
    const auto [p, v] = nz[0];
    return k == -p ? 1.0 / v : cplx{};
  }
  if (nz.size() != 2) return std::nullopt;
  cplx alpha{}, beta{};
  Coord s = 0;
  bool has_zero = false;
  for (const auto& [p, v] : nz) {
    if (p == 0) {
      alpha = v;
      has_zero = true;
    } else {
      beta = v;
      s = p;
    }
  }
  if (!has_zero || (s != 1 && s != -1) || std::abs(alpha) == std::abs(beta)) return std::nullopt;
  if (std::abs(alpha) > std::abs(beta)) {
    // 1/(alpha + beta u^s) = sum_{n>=0} alpha^-1 (-beta/alpha)^n u^{sn}
    if (k * s < 0) return cplx{};
    const Coord n = k * s;
    return ipow(-beta / alpha, n) / alpha;
  }
  // = sum_{n>=0} beta^-1 (-alpha/beta)^n u^{-s(n+1)}
  const Coord n = -k * s - 1;
  if (n < 0) return cplx{};
  return ipow(-alpha / beta, n) / beta;
}

std::vector<PartialSumRow> weighted_partial_sums(const FiniteSeq& b, const Weight& g) {
  std::vector<PartialSumRow> rows;
  const auto order = shell_order(b.window(), g.index_norm());
  double total = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double r = norm(order[i], g.index_norm());
    double shell = 0.0;
    for (; i < order.size() && norm(order[i], g.index_norm()) == r; ++i) shell += g(order[i]) * std::abs(b[order[i]]);
    total += shell;
    rows.push_back({static_cast<Coord>(std::llround(r)), total, shell});
  }
  return rows;
}

WienerReport run_wiener(const ExperimentConfig& cfg) {
  WienerReport rep;
  rep.input = cfg.wiener.sequence ? *cfg.wiener.sequence : parse_laurent_symbol(cfg.wiener.symbol);
  try {
    const WienerInverse inv = wiener_inverse(rep.input, cfg.wiener.grid, cfg.wiener.out_radius, cfg.wiener.residual_cap);
    rep.min_modulus = inv.min_modulus;
    rep.residual = inv.residual;
    bool closed = rep.input.dim() == 1 && geometric_inverse_coefficient(rep.input, 0).has_value();
    double err = 0.0;
    for (std::size_t i = 0; i < inv.inverse.values().size(); ++i) {
      const LatticeIndex k = inv.inverse.window().index(i);
      CoefficientRow row{k[0], inv.inverse.values()[i], std::nullopt};
      if (closed) {
        row.closed_form = geometric_inverse_coefficient(rep.input, k[0]);
        err = std::max(err, std::abs(row.value - *row.closed_form));
      }
      if (rep.input.dim() == 1) rep.coefficients.push_back(row);
    }
    if (closed) rep.closed_form_error = err;
    rep.partial_sums = weighted_partial_sums(inv.inverse, cfg.weight);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SymbolVanishes && e.kind() != ErrorKind::AliasBudgetExceeded) throw;
    rep.status = std::string(to_string(e.kind()));
    rep.min_modulus = invertibility_test(rep.input, cfg.wiener.grid, 0.0).min_modulus;
  }
  return rep;
}

json to_json(const WienerReport& report) {
  json coefs = json::array();
  for (const auto& r : report.coefficients) {
    json row = {{"k", r.k}, {"re", r.value.real()}, {"im", r.value.imag()}};
    if (r.closed_form) {
      row["closed_re"] = r.closed_form->real();
      row["closed_im"] = r.closed_form->imag();
    }
    coefs.push_back(row);
  }
  json sums = json::array();
  for (const auto& r : report.partial_sums)
    sums.push_back({{"radius", r.radius}, {"sum", r.sum}, {"increment", r.increment}});
  return {{"format_version", kFormatVersion},
          {"kind", "wiener"},
          {"status", report.status},
          {"input", to_json(report.input)},
          {"min_modulus", report.min_modulus},
          {"residual", report.residual},
          {"closed_form_error", report.closed_form_error ? json(*report.closed_form_error) : json(nullptr)},
          {"coefficients", coefs},
          {"partial_sums", sums}};
}

void write_wiener_report(const WienerReport& report, const std::string& out_dir, bool csv) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream os(std::filesystem::path(out_dir) / "wiener_report.json");
    os << to_json(report).dump(2) << "\n";
  }
  if (!csv || report.status != "ok") return;
  {
    std::ofstream os(std::filesystem::path(out_dir) / "wiener_coefficients.csv");
    os << "k,re,im,closed_re,closed_im\n";
    for (const auto& r : report.coefficients) {
      os << r.k << "," << format_double(r.value.real()) << "," << format_double(r.value.imag()) << ",";
      if (r.closed_form) os << format_double(r.closed_form->real()) << "," << format_double(r.closed_form->imag());
      else os << ",";
      os << "\n";
    }
  }
  std::ofstream os(std::filesystem::path(out_dir) / "wiener_partial_sums.csv");
  os << "radius,sum,increment\n";
  for (const auto& r : report.partial_sums)
    os << r.radius << "," << format_double(r.sum) << "," << format_double(r.increment) << "\n";
}

// ------------------------------------------------------------------- kernel

KernelReport run_kernel(const ExperimentConfig& cfg, Kernel* kernel_out) {
  ExperimentConfig kc = cfg;
  kc.d = 1;
  for (int i = 0; i < cfg.c; ++i) kc.d *= cfg.q;
  kc.block_rank = std::min(cfg.block_rank, kc.d);
  const CDOperator t = generate_operator(kc, 0);
  const Kernel kern = assemble_kernel(factorize_blocks(t), cfg.q);

  KernelReport rep;
  rep.trials.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(cfg.trials, [&](int trial) {
    Rng rng(cfg.seed, 0x100000000ULL + static_cast<std::uint64_t>(trial));
    GridFunction x(cfg.c, cfg.N, cfg.q);
    for (auto& v : x.values()) v = rng.complex_normal();
    const GridFunction via_kernel = apply_kernel(kern, x);
    const GridFunction via_blocks = unblock(apply(t, block(x)), cfg.q);
    double diff = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < x.values().size(); ++i) {
      diff += std::norm(via_kernel.values()[i] - via_blocks.values()[i]);
      ref += std::norm(via_blocks.values()[i]);
    }
    rep.trials[static_cast<std::size_t>(trial)] = {trial, ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff)};
  });
  for (const auto& tr : rep.trials) rep.max_relative_error = std::max(rep.max_relative_error, tr.relative_error);
  if (kernel_out) *kernel_out = kern;
  return rep;
}

json to_json(const KernelReport& report) {
  json trials = json::array();
  for (const auto& t : report.trials) trials.push_back({{"trial", t.trial}, {"relative_error", t.relative_error}});
  return {{"format_version", kFormatVersion},
          {"kind", "kernel"},
          {"trials", trials},
          {"max_relative_error", report.max_relative_error}};
}

// ------------------------------------------------------------------- verify

VerifyResult verify_report(const json& report) {
  VerifyResult v;
  const auto problem = [&](const std::string& what) {
    v.ok = false;
    v.problems.push_back(what);
  };
  try {
    if (report.value("kind", std::string()) != "inverse_closedness") {
      problem("unsupported report kind");
      return v;
    }
    ExperimentReport rebuilt;
    for (const auto& r : report.at("records")) {
      TrialRecord rec;
      rec.trial = r.at("trial").get<int>();
      rec.status = r.at("status").get<std::string>();
      rec.residual = r.at("residual").get<double>();
      if (!r.at("slope").is_null()) rec.slope = r.at("slope").get<double>();
      if (rec.status == "ok" && !r.at("domination_ok").get<bool>())
        problem("trial " + std::to_string(rec.trial) + ": envelope does not dominate its blocks");
      double cum = 0.0;
      for (const auto& row : r.at("envelope")) {
        const double beta = row.at("beta").get<double>();
        const double weight = row.at("weight").get<double>();
        const double wb = row.at("weighted_beta").get<double>();
        cum += wb;
        if (beta < 0.0) problem("trial " + std::to_string(rec.trial) + ": negative envelope value");
        if (wb != weight * beta) problem("trial " + std::to_string(rec.trial) + ": weighted_beta != weight * beta");
        if (row.at("cumsum").get<double>() != cum)
          problem("trial " + std::to_string(rec.trial) + ": cumsum column is not the running sum");
      }
      rebuilt.records.push_back(std::move(rec));
    }
    recompute_aggregates(rebuilt);
    const json& agg = report.at("aggregates");
    if (agg.at("max_residual").get<double>() != rebuilt.max_residual) problem("aggregate max_residual mismatch");
    if (agg.at("failed_trials").get<int>() != rebuilt.failed_trials) problem("aggregate failed_trials mismatch");
    const json& ms = agg.at("median_slope");
    if (ms.is_null() != !rebuilt.median_slope.has_value() ||
        (!ms.is_null() && ms.get<double>() != *rebuilt.median_slope))
      problem("aggregate median_slope mismatch");
  } catch (const json::exception& e) {
    problem(std::string("malformed report: ") + e.what());
  }
  return v;
}

}  // namespace decayalg
