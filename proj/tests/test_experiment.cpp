#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "decayalg/error.hpp"
#include "decayalg/experiment.hpp"
#include "support.hpp"

using namespace dtest;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.seed = 7;
  cfg.N = 6;
  cfg.W = 2;
  cfg.d = 3;
  cfg.block_rank = 2;
  cfg.trials = 3;
  cfg.weight = Weight(0.5, 0.5, 0, 0);
  cfg.profile.l1_target = 0.5;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("decayalg_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("experiment") {
  TEST_CASE("config validation") {
    ExperimentConfig cfg = small_config();
    CHECK_NOTHROW(cfg.validate());
    cfg.block_rank = 4;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = small_config();
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = small_config();
    cfg.profile.rate = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = small_config();
    cfg.W = 7;
    CHECK_THROWS_AS(cfg.validate(), Error);
  }

  TEST_CASE("config json round trip") {
    ExperimentConfig cfg = small_config();
    cfg.profile.kind = EnvelopeProfile::Kind::custom;
    cfg.profile.table = {{LatticeIndex{1}, 0.25}, {LatticeIndex{-1}, 0.125}};
    cfg.boundary = Boundary::circulant;
    const json j = to_json(cfg);
    CHECK(j.at("format_version") == kFormatVersion);
    const ExperimentConfig back = config_from_json(json::parse(j.dump()));
    CHECK(to_json(back) == j);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"envelope_profile":{"kind":"zigzag"}})")), Error);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"N":"sixteen"})")), Error);
    CHECK_THROWS_AS(config_from_json(json::parse("[]")), Error);
  }

  TEST_CASE("profile envelopes") {
    ExperimentConfig cfg = small_config();
    const Envelope e = profile_envelope(cfg);
    CHECK(e.l1() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(e[{1}] / e[{0}] == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    cfg.profile.kind = EnvelopeProfile::Kind::polynomial;
    cfg.profile.power = 2;
    cfg.profile.l1_target.reset();
    cfg.profile.amplitude = 3;
    const Envelope p = profile_envelope(cfg);
    CHECK(p[{2}] == doctest::Approx(3.0 / 9.0).epsilon(1e-14));
  }

  TEST_CASE("generated blocks follow the prescribed trace norms") {
    ExperimentConfig cfg = small_config();
    cfg.block_rank = cfg.d;
    const CDOperator t = generate_operator(cfg, 0);
    const Envelope beta = profile_envelope(cfg);
    for (std::size_t k = 0; k < t.window().size(); ++k)
      for (std::size_t m = 0; m < t.band().size(); ++m) {
        const DenseBlock* b = t.find_block(k, m);
        REQUIRE(b);
        const double ratio = trace_norm(*b) / beta.values[m];
        CHECK(ratio >= 0.5 - 1e-12);
        CHECK(ratio <= 1.0 + 1e-12);
      }
    CHECK(domination_excess(beta, t, NormKind::nuclear()) <= 1e-12 * beta.values[beta.band.linear({0})]);

    cfg.block_rank = 1;
    const CDOperator r1 = generate_operator(cfg, 1);
    const auto s = singular_values(*r1.find_block(0, 0));
    CHECK(s[1] <= 1e-12 * s[0]);
  }

  TEST_CASE("generation is deterministic in (seed, trial)") {
    const ExperimentConfig cfg = small_config();
    CHECK(to_json(generate_operator(cfg, 2)).dump() == to_json(generate_operator(cfg, 2)).dump());
    CHECK_FALSE(generate_operator(cfg, 1) == generate_operator(cfg, 2));
    ExperimentConfig other = cfg;
    other.seed = 8;
    CHECK_FALSE(generate_operator(cfg, 1) == generate_operator(other, 1));
  }

  TEST_CASE("custom all-zero table gives the zero operator and no slopes") {
    ExperimentConfig cfg = small_config();
    cfg.profile.kind = EnvelopeProfile::Kind::custom;
    cfg.profile.l1_target.reset();
    cfg.profile.table = {{LatticeIndex{0}, 0.0}};
    const CDOperator t = generate_operator(cfg, 0);
    for (std::size_t k = 0; k < t.window().size(); ++k)
      for (std::size_t m = 0; m < t.band().size(); ++m) CHECK((!t.find_block(k, m) || t.find_block(k, m)->is_zero()));
    const ExperimentReport rep = run_inverse_closedness(cfg);
    for (const auto& r : rep.records) {
      CHECK(r.status == "ok");
      CHECK_FALSE(r.slope.has_value());
      CHECK(r.residual == 0.0);
    }
    CHECK_FALSE(rep.median_slope.has_value());
    CHECK(to_json(rep).at("aggregates").at("median_slope").is_null());
  }

  TEST_CASE("inverse closedness at desk scale") {
    ExperimentConfig cfg = small_config();
    cfg.N = 16;
    cfg.d = 4;
    cfg.block_rank = 4;
    cfg.trials = 4;
    const ExperimentReport rep = run_inverse_closedness(cfg);
    REQUIRE(rep.records.size() == 4);
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
      const auto& r = rep.records[i];
      CHECK(r.trial == static_cast<int>(i));
      CHECK(r.status == "ok");
      CHECK(r.safety == "neumann");
      CHECK(r.safety_value == doctest::Approx(0.5));
      CHECK(r.residual <= 1e-9);
      REQUIRE(r.slope.has_value());
      CHECK(*r.slope < -0.3);
      CHECK(r.domination_ok);
      CHECK(r.envelope.size() == 33);
    }
    CHECK(verify_report(to_json(rep)).ok);
  }

  TEST_CASE("spectral fallback when the crude bound fails") {
    ExperimentConfig cfg = small_config();
    cfg.profile.l1_target = 1.5;
    cfg.trials = 2;
    const ExperimentReport rep = run_inverse_closedness(cfg);
    for (const auto& r : rep.records) {
      CHECK(r.safety == "spectral");
      if (r.status == "ok") CHECK(r.safety_value > 0.0);
    }
  }

  TEST_CASE("aggregates skip failed trials") {
    ExperimentReport rep;
    for (int i = 0; i < 4; ++i) {
      TrialRecord r;
      r.trial = i;
      r.residual = 1e-15 * (i + 1);
      r.slope = -1.0 - i;
      rep.records.push_back(r);
    }
    rep.records[3].status = "NumericallySingular";
    rep.records[3].residual = 1.0;
    recompute_aggregates(rep);
    CHECK(rep.failed_trials == 1);
    CHECK(rep.max_residual == doctest::Approx(3e-15).epsilon(1e-12));
    CHECK(*rep.median_slope == -2.0);
  }

  TEST_CASE("reports are identical across worker counts") {
    ExperimentConfig cfg = small_config();
    cfg.trials = 5;
    setenv("DECAYALG_THREADS", "1", 1);
    CHECK(worker_count() == 1);
    const std::string one = to_json(run_inverse_closedness(cfg)).dump();
    setenv("DECAYALG_THREADS", "4", 1);
    const std::string four = to_json(run_inverse_closedness(cfg)).dump();
    unsetenv("DECAYALG_THREADS");
    CHECK(one == four);
  }

  TEST_CASE("report files") {
    ExperimentConfig cfg = small_config();
    const fs::path a = scratch("report_a"), b = scratch("report_b");
    write_report(run_inverse_closedness(cfg), a.string(), true);
    write_report(run_inverse_closedness(cfg), b.string(), true);
    for (int t = 0; t < cfg.trials; ++t) {
      const std::string name = "envelope_trial_00" + std::to_string(t) + ".csv";
      REQUIRE(fs::exists(a / name));
      CHECK(slurp(a / name) == slurp(b / name));
    }
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    const json rep = json::parse(slurp(a / "report.json"));
    CHECK(rep.at("format_version") == kFormatVersion);
    CHECK(verify_report(rep).ok);
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("verify_report catches tampering") {
    const json good = to_json(run_inverse_closedness(small_config()));
    CHECK(verify_report(good).ok);

    json bad = good;
    bad["aggregates"]["max_residual"] = 1.0;
    CHECK_FALSE(verify_report(bad).ok);

    bad = good;
    bad["records"][0]["envelope"][1]["cumsum"] = 42.0;
    CHECK_FALSE(verify_report(bad).ok);

    bad = good;
    bad["records"][1]["domination_ok"] = false;
    CHECK_FALSE(verify_report(bad).ok);

    bad = good;
    bad["records"][2]["slope"] = -100.0;
    CHECK_FALSE(verify_report(bad).ok);

    CHECK_FALSE(verify_report(json::parse(R"({"kind":"inverse_closedness"})")).ok);
  }

  TEST_CASE("laurent symbol parser") {
    const FiniteSeq a = parse_laurent_symbol("2+u");
    CHECK(a[{0}] == cplx(2.0));
    CHECK(a[{1}] == cplx(1.0));
    const FiniteSeq b = parse_laurent_symbol("3 + u + u^{-1}");
    CHECK(b.radius() == 1);
    CHECK(b[{-1}] == cplx(1.0));
    const FiniteSeq c = parse_laurent_symbol("0.5*u^2 - 2i");
    CHECK(c[{2}] == cplx(0.5));
    CHECK(c[{0}] == cplx(0, -2));
    const FiniteSeq d = parse_laurent_symbol("1-u");
    CHECK(d[{1}] == cplx(-1.0));
    const FiniteSeq e = parse_laurent_symbol("-u^-3 + 1e-1u^(2)");
    CHECK(e[{-3}] == cplx(-1.0));
    CHECK(e[{2}] == cplx(0.1));
    CHECK(parse_laurent_symbol("u + u")[{1}] == cplx(2.0));
    for (const char* bad : {"", "2+", "2+x", "u^", "u^{2", "*u", "2u3", "i^2"}) CHECK_THROWS_AS(parse_laurent_symbol(bad), Error);
  }

  TEST_CASE("geometric closed forms") {
    const FiniteSeq a = parse_laurent_symbol("2+u");
    CHECK(*geometric_inverse_coefficient(a, 0) == cplx(0.5));
    CHECK(*geometric_inverse_coefficient(a, 3) == cplx(-1.0 / 16));
    CHECK(*geometric_inverse_coefficient(a, -1) == cplx{});
    // |beta| > |alpha|: 1/(1 + 2u) = sum_n (1/2)(-1/2)^n u^{-(n+1)}
    const FiniteSeq b = parse_laurent_symbol("1+2u");
    CHECK(*geometric_inverse_coefficient(b, -1) == cplx(0.5));
    CHECK(*geometric_inverse_coefficient(b, -2) == cplx(-0.25));
    CHECK(*geometric_inverse_coefficient(b, 0) == cplx{});
    CHECK(*geometric_inverse_coefficient(parse_laurent_symbol("4u^-2"), 2) == cplx(0.25));
    CHECK_FALSE(geometric_inverse_coefficient(parse_laurent_symbol("3+u+u^-1"), 0).has_value());
    CHECK_FALSE(geometric_inverse_coefficient(parse_laurent_symbol("1+u"), 0).has_value());
    CHECK_FALSE(geometric_inverse_coefficient(parse_laurent_symbol("2+u^2"), 0).has_value());
  }

  TEST_CASE("wiener runs") {
    ExperimentConfig cfg;
    cfg.weight = Weight::polynomial(2);
    cfg.wiener.symbol = "2+u";
    const WienerReport r = run_wiener(cfg);
    CHECK(r.status == "ok");
    REQUIRE(r.closed_form_error.has_value());
    CHECK(*r.closed_form_error <= 1e-12);
    CHECK(r.coefficients.size() == 81);
    CHECK(r.partial_sums.size() == 41);
    // sum (1+k)^2 2^{-k-1} over k >= 0 is 6
    CHECK(r.partial_sums.back().sum == doctest::Approx(6.0).epsilon(1e-8));

    cfg.wiener.symbol = "1-u";
    const WienerReport v = run_wiener(cfg);
    CHECK(v.status == "SymbolVanishes");
    CHECK(v.coefficients.empty());

    cfg.wiener.symbol = "3+u+u^{-1}";
    cfg.wiener.grid = 2048;
    cfg.wiener.out_radius = 60;
    const WienerReport s = run_wiener(cfg);
    CHECK(s.residual <= 1e-10);
    CHECK_FALSE(s.closed_form_error.has_value());

    const json j = to_json(r);
    CHECK(j.at("format_version") == kFormatVersion);
    CHECK(j.at("coefficients").size() == 81);
  }

  TEST_CASE("kernel runs") {
    ExperimentConfig cfg;
    cfg.N = 3;
    cfg.q = 4;
    cfg.d = 4;
    cfg.block_rank = 4;
    cfg.trials = 5;
    Kernel k;
    const KernelReport rep = run_kernel(cfg, &k);
    CHECK(rep.trials.size() == 5);
    CHECK(rep.max_relative_error <= 1e-10);
    CHECK(k.samples_per_axis() == 4);
  }
}
