#include <gtest/gtest.h>

#include <sstream>

#include "qcft/experiments.hpp"

using namespace qcft;
namespace ex = qcft::experiments;

namespace {

ex::RawConfig parse(const std::string& text) {
  std::istringstream in(text);
  return ex::parse_config(in);
}

bool has_diag(const std::vector<std::string>& diags, const std::string& needle) {
  for (const auto& d : diags)
    if (d.find(needle) != std::string::npos) return true;
  return false;
}

std::string failing_checks(const ex::ResultRecord& r) {
  std::string out;
  for (const auto& c : r.checks)
    if (!c.pass) out += c.name + "=" + ex::fmt(c.value) + " ";
  return out;
}

}  // namespace

TEST(Config, ParsesCommentsWhitespaceAndOverrides) {
  const auto raw = parse("# header\nexperiment = dispersion  # trailing\n\n  n_sites=8\nn_sites = 12\n");
  EXPECT_EQ(raw.at("experiment"), "dispersion");
  EXPECT_EQ(raw.at("n_sites"), "12");
  EXPECT_EQ(ex::load_config(raw).n_sites, 12);
}

TEST(Config, MalformedLineReported) {
  EXPECT_THROW(parse("experiment dispersion\n"), ex::ConfigError);
}

TEST(Config, ExperimentDefaults) {
  EXPECT_EQ(ex::load_config(parse("experiment = dispersion")).n_sites, 64);
  const auto z = ex::load_config(parse("experiment = zitter"));
  EXPECT_EQ(z.n_sites, 256);
  EXPECT_EQ(z.boundary, Boundary::open);
  EXPECT_EQ(ex::load_config(parse("experiment = qcft2-compare")).kind, FieldKind::weyl);
}

TEST(Config, ValidationListsEveryViolation) {
  const auto diags = ex::validate(parse("experiment = trotter-sweep\nn_sites = 15\nmass_ratio = -0.1\nbogus = 1\nn_steps = 4, x\n"));
  EXPECT_TRUE(has_diag(diags, "width-parity rule"));
  EXPECT_TRUE(has_diag(diags, "mass_ratio: must be >= 0"));
  EXPECT_TRUE(has_diag(diags, "bogus: unknown key"));
  EXPECT_TRUE(has_diag(diags, "n_steps: cannot parse list item 'x'"));
  EXPECT_GE(diags.size(), 4u);
}

TEST(Config, SuperluminalVelocityRejected) {
  const auto diags = ex::validate(parse("experiment = lorentz\nbetas = 13/13, 5/13, 2/6\n"));
  EXPECT_TRUE(has_diag(diags, "causal-speed bound"));
  EXPECT_TRUE(has_diag(diags, "lowest terms"));
  EXPECT_THROW(ex::load_config(parse("experiment = lorentz\nbetas = 13/13\n")), ex::ConfigError);
}

TEST(Config, UnknownExperimentAndMissingExperiment) {
  EXPECT_TRUE(has_diag(ex::validate(parse("experiment = warp")), "unknown experiment"));
  EXPECT_TRUE(has_diag(ex::validate(parse("n_sites = 4")), "experiment: missing"));
}

TEST(Config, ZitterWindowAndClearanceRules) {
  const auto diags = ex::validate(parse("experiment = zitter\nn_sites = 64\nt_max = 10\n"));
  EXPECT_TRUE(has_diag(diags, "packet rule"));
  EXPECT_TRUE(has_diag(diags, "frequency rule"));
}

TEST(Output, FormattingAndCsv) {
  EXPECT_EQ(ex::fmt(0.1), "0.10000000000000001");
  EXPECT_EQ(ex::fmt(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(ex::fmt(2), "2");
  const ex::Table t{"x", {"a", "b"}, {{"1", "2"}, {"3", "4"}}};
  EXPECT_EQ(ex::write_csv(t), "a,b\n1,2\n3,4\n");
}

TEST(Output, ParallelMapPreservesOrder) {
  std::vector<int> items(17);
  std::iota(items.begin(), items.end(), 0);
  for (int threads : {1, 2, 5}) {
    const auto out = ex::parallel_map(items, threads, [](const int& i) { return i * i; });
    for (int i = 0; i < 17; ++i) EXPECT_EQ(out[static_cast<std::size_t>(i)], i * i);
  }
}

TEST(Runs, DispersionSmall) {
  const auto r = ex::run(ex::load_config(parse("experiment = dispersion\nn_sites = 16\n")));
  EXPECT_TRUE(r.pass()) << failing_checks(r);
  EXPECT_FALSE(r.tables.empty());
}

TEST(Runs, TrotterSweepSmallAndThreadIndependent) {
  const std::string text = "experiment = trotter-sweep\nn_sites = 6\nn_steps = 4, 8, 16\ncalibration_max_sites = 8\n";
  auto raw = parse(text);
  const auto a = ex::run(ex::load_config(raw));
  raw["threads"] = "3";
  const auto b = ex::run(ex::load_config(raw));
  EXPECT_TRUE(a.pass()) << failing_checks(a);
  ASSERT_EQ(a.metrics.size(), b.metrics.size());
  for (std::size_t i = 0; i < a.metrics.size(); ++i) EXPECT_EQ(a.metrics[i], b.metrics[i]);
  ASSERT_EQ(a.tables.size(), b.tables.size());
  for (std::size_t i = 0; i < a.tables.size(); ++i) EXPECT_EQ(ex::write_csv(a.tables[i]), ex::write_csv(b.tables[i]));
}

TEST(Runs, TrotterAtZeroTimeGivesZeros) {
  const auto r = ex::run(ex::load_config(parse("experiment = trotter-sweep\nn_sites = 6\nt = 0\nn_steps = 2, 4\ncalibration_max_sites = 6\n")));
  const auto* c = r.find_check("zero_time_identity");
  ASSERT_NE(c, nullptr);
  EXPECT_TRUE(c->pass);
}

TEST(Runs, LightconeSmall) {
  const auto r = ex::run(ex::load_config(
      parse("experiment = lightcone\nn_sites = 40\nlayers = 1, 2, 4, 8\nexact_t = 4\nexact_radii = 4, 6, 8\n")));
  EXPECT_TRUE(r.pass()) << failing_checks(r);
}

TEST(Runs, LorentzRestFrameGivesUnitGamma) {
  const auto r = ex::run(ex::load_config(parse("experiment = lorentz\nbetas = 0/1, 5/13\nseparations = 13\n")));
  EXPECT_TRUE(r.pass()) << failing_checks(r);
  const auto* c = r.find_check("rest_gamma_D13");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->value, 1.0);
  bool dump = false;
  for (const auto& [name, content] : r.text_files) dump |= name == "foliation_5_13.txt" && content.rfind("network ", 0) == 0;
  EXPECT_TRUE(dump);
}

TEST(Runs, MeasureGammaForFiveThirteenths) {
  for (int d : {13, 26, 52}) {
    const auto g = ex::measure_gamma({5, 13}, d);
    EXPECT_LE(std::abs(g.estimate - 13.0 / 12.0), 2.0 / d) << d;
    EXPECT_NE(g.boosted.tic_layers, g.boosted.tac_layers);
  }
}

TEST(Runs, SecondQuantizedComparisonSmall) {
  const auto r = ex::run(ex::load_config(parse("experiment = qcft2-compare\njw_max_qubits = 5\nweyl_sites = 6\ndirac_sites = 2\ntimes = 0, 1, 2\n")));
  EXPECT_TRUE(r.pass()) << failing_checks(r);
}

TEST(Runs, ConstantsReport) {
  const auto r = ex::run(ex::load_config(parse("experiment = constants")));
  const auto* lambda = r.find_check("compton_wavelength");
  ASSERT_NE(lambda, nullptr);
  EXPECT_TRUE(lambda->pass);
  EXPECT_NEAR(ex::electron_constants(1.054571817e-34, 9.1093837015e-31, 299792458.0).zitter_frequency, 1.5527e21, 0.0001e21);
  EXPECT_NE(ex::constants_text(r).find("compton_wavelength_m = "), std::string::npos);
}

TEST(Runs, NegativeMassConfigFailsBeforeRunning) {
  EXPECT_THROW(ex::load_config(parse("experiment = dispersion\nmass_ratio = -0.1\n")), ex::ConfigError);
}
