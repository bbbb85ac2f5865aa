#include "apde/cli.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "apde/gallery.hpp"
#include "apde/io.hpp"

namespace {

namespace fs = std::filesystem;
using apde::cli::ExperimentConfig;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("apde_cli_" + std::to_string(::testing::UnitTest::GetInstance()
                                             ->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()
                      ->current_test_info()
                      ->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    apde::io::write_json(dir_ / "burgers.json",
                         apde::io::to_json(apde::gallery::burgers_1d().spec()));
    apde::io::write_json(
        dir_ / "advection.json",
        apde::io::to_json(apde::gallery::linear_advection_1d().spec()));
    apde::io::write_json(dir_ / "sine.json",
                         apde::io::to_json(apde::gallery::sine_1d(0.5, 1.0)));
    apde::APSignal other(1);
    other.add_sine({2.0}, 0.4);
    apde::io::write_json(dir_ / "sine2.json", apde::io::to_json(other));
  }

  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, MinimalDecayConfigFillsDefaults) {
  apde::io::write_json(dir_ / "config.json",
                       {{"command", "decay"},
                        {"model", path("burgers.json")},
                        {"signal", path("sine.json")},
                        {"out", path("out")}});
  auto cfg = apde::cli::parse_config({"--config", path("config.json")});
  EXPECT_EQ(cfg.command, "decay");
  EXPECT_DOUBLE_EQ(cfg.cfl_convective, 0.4);
  EXPECT_DOUBLE_EQ(cfg.cfl_diffusive, 0.25);
  EXPECT_EQ(cfg.xi_nodes, 1024);
  EXPECT_DOUBLE_EQ(cfg.decay_threshold, 0.1);
  EXPECT_DOUBLE_EQ(cfg.persist_threshold, 0.9);
  EXPECT_EQ(cfg.seed, 0u);
  auto echo = cfg.resolved();
  EXPECT_EQ(echo["cfl_convective"], 0.4);
}

TEST_F(CliTest, UnknownKeyIsNamed) {
  apde::io::write_json(dir_ / "config.json",
                       {{"command", "decay"}, {"clf_convective", 0.4}});
  try {
    (void)apde::cli::parse_config({"--config", path("config.json")});
    FAIL() << "expected unknown-key error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("clf_convective"), std::string::npos);
  }
}

TEST_F(CliTest, NegativeEndTimeIsARangeError) {
  try {
    (void)apde::cli::parse_config({"simulate", "--model", path("burgers.json"),
                                   "--signal", path("sine.json"), "--end-time",
                                   "-1"});
    FAIL() << "expected range error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("end_time"), std::string::npos);
  }
}

TEST_F(CliTest, FlagsOverrideConfigFile) {
  apde::io::write_json(dir_ / "config.json",
                       {{"command", "decay"},
                        {"model", path("burgers.json")},
                        {"signal", path("sine.json")},
                        {"end_time", 3.0},
                        {"seed", 7}});
  auto cfg = apde::cli::parse_config(
      {"--config", path("config.json"), "--end-time", "0.5", "--seed", "11"});
  EXPECT_DOUBLE_EQ(cfg.end_time, 0.5);
  EXPECT_EQ(cfg.seed, 11u);
}

TEST_F(CliTest, DecayOnBurgersExitsZero) {
  ExperimentConfig cfg;
  cfg.command = "decay";
  cfg.model_path = path("burgers.json");
  cfg.signal_path = path("sine.json");
  cfg.grid_l = {1.0};
  cfg.refinement = {32, 64};
  cfg.end_time = 10.0;
  cfg.expect = "decays";
  cfg.out_dir = path("out_decay");
  EXPECT_EQ(apde::cli::dispatch(cfg), 0);
  EXPECT_TRUE(fs::exists(fs::path(cfg.out_dir) / "report.json"));
  EXPECT_TRUE(fs::exists(fs::path(cfg.out_dir) / "decay.csv"));
  auto report = apde::io::read_json(fs::path(cfg.out_dir) / "report.json");
  EXPECT_EQ(report.at("verdict"), "decays");
  EXPECT_EQ(report.at("config").at("seed"), 0);
  EXPECT_EQ(report.at("version"), std::string(apde::kVersion));
}

TEST_F(CliTest, AdvectionNegativeControlExitsOne) {
  ExperimentConfig cfg;
  cfg.command = "decay";
  cfg.model_path = path("advection.json");
  cfg.signal_path = path("sine.json");
  cfg.refinement = {64, 128, 256};
  cfg.end_time = 2.0;
  cfg.expect = "decays";  // wrong on purpose
  cfg.out_dir = path("out_adv");
  EXPECT_EQ(apde::cli::dispatch(cfg), 1);
  auto report = apde::io::read_json(fs::path(cfg.out_dir) / "report.json");
  EXPECT_EQ(report.at("verdict"), "persists");
}

TEST_F(CliTest, MissingModelFileThrows) {
  ExperimentConfig cfg;
  cfg.command = "nondegeneracy";
  cfg.model_path = path("nope.json");
  cfg.out_dir = path("out_missing");
  EXPECT_THROW((void)apde::cli::dispatch(cfg), std::runtime_error);
}

TEST_F(CliTest, SpectrumCommandWritesReport) {
  ExperimentConfig cfg;
  cfg.command = "spectrum";
  cfg.signal_path = path("sine.json");
  cfg.out_dir = path("out_spec");
  EXPECT_EQ(apde::cli::dispatch(cfg), 0);
  auto report = apde::io::read_json(fs::path(cfg.out_dir) / "report.json");
  EXPECT_EQ(report.at("term_count"), 2);
  EXPECT_TRUE(fs::exists(fs::path(cfg.out_dir) / "spectrum.csv"));
}

TEST_F(CliTest, SimulateWritesTrajectoryAndSnapshots) {
  ExperimentConfig cfg;
  cfg.command = "simulate";
  cfg.model_path = path("burgers.json");
  cfg.signal_path = path("sine.json");
  cfg.grid_n = {64};
  cfg.end_time = 0.2;
  cfg.field_stride = 16;
  cfg.out_dir = path("out_sim");
  EXPECT_EQ(apde::cli::dispatch(cfg), 0);
  EXPECT_TRUE(fs::exists(fs::path(cfg.out_dir) / "trajectory.csv"));
  EXPECT_TRUE(fs::exists(fs::path(cfg.out_dir) / "fields.bin"));
  auto sidecar = apde::io::read_json(fs::path(cfg.out_dir) / "fields.json");
  EXPECT_EQ(sidecar.at("cells")[0], 64);
  std::uintmax_t frames = sidecar.at("times").size();
  EXPECT_EQ(fs::file_size(fs::path(cfg.out_dir) / "fields.bin"),
            frames * 64 * sizeof(double));
}

TEST_F(CliTest, ContractionCommandPasses) {
  ExperimentConfig cfg;
  cfg.command = "contraction";
  cfg.model_path = path("burgers.json");
  cfg.signal_path = path("sine.json");
  cfg.signal_b_path = path("sine2.json");
  cfg.grid_n = {64};
  cfg.end_time = 0.2;
  cfg.out_dir = path("out_con");
  EXPECT_EQ(apde::cli::dispatch(cfg), 0);
  auto report = apde::io::read_json(fs::path(cfg.out_dir) / "report.json");
  EXPECT_EQ(report.at("verdict"), "pass");
}

TEST_F(CliTest, KineticProbeBoundsHold) {
  ExperimentConfig cfg;
  cfg.command = "kinetic-probe";
  cfg.model_path = path("burgers.json");
  cfg.sphere_samples = 60;
  cfg.ell_schedule = {0.04};
  cfg.delta = 1.0;
  cfg.out_dir = path("out_probe");
  EXPECT_EQ(apde::cli::dispatch(cfg), 0);
  EXPECT_TRUE(fs::exists(fs::path(cfg.out_dir) / "probe.csv"));
}

TEST_F(CliTest, RepeatedInvocationsAreBitIdentical) {
  ExperimentConfig cfg;
  cfg.command = "contraction";
  cfg.model_path = path("burgers.json");
  cfg.signal_path = path("sine.json");
  cfg.signal_b_path = path("sine2.json");
  cfg.grid_n = {64};
  cfg.end_time = 0.1;
  cfg.out_dir = path("out_det");
  cfg.seed = 3;
  EXPECT_EQ(apde::cli::dispatch(cfg), 0);
  std::string report1 = apde::io::read_text(fs::path(cfg.out_dir) / "report.json");
  std::string csv1 = apde::io::read_text(fs::path(cfg.out_dir) / "contraction.csv");
  EXPECT_EQ(apde::cli::dispatch(cfg), 0);
  EXPECT_EQ(report1,
            apde::io::read_text(fs::path(cfg.out_dir) / "report.json"));
  EXPECT_EQ(csv1,
            apde::io::read_text(fs::path(cfg.out_dir) / "contraction.csv"));
}

TEST_F(CliTest, GalleryCommandWritesModels) {
  ExperimentConfig cfg;
  cfg.command = "gallery";
  cfg.out_dir = path("out_gallery");
  EXPECT_EQ(apde::cli::dispatch(cfg), 0);
  EXPECT_TRUE(fs::exists(fs::path(cfg.out_dir) / "burgers1d.json"));
  EXPECT_TRUE(fs::exists(fs::path(cfg.out_dir) / "quasi_periodic_L100.json"));
  // Round-trip: the written model must validate on load.
  auto spec = apde::io::model_spec_from_json(
      apde::io::read_json(fs::path(cfg.out_dir) / "burgers1d.json"));
  EXPECT_NO_THROW((void)apde::Model::validate(spec));
}

TEST_F(CliTest, ModelJsonRoundTrip) {
  for (const apde::Model& m : apde::gallery::all_models()) {
    auto j = apde::io::to_json(m.spec());
    auto spec = apde::io::model_spec_from_json(j);
    apde::Model again = apde::Model::validate(spec);
    EXPECT_EQ(again.name(), m.name());
    EXPECT_EQ(again.dims(), m.dims());
  }
}

TEST_F(CliTest, SignalJsonRoundTrip) {
  auto sig = apde::gallery::quasi_periodic_1d();
  auto j = apde::io::to_json(sig);
  auto back = apde::io::signal_from_json(j, /*require_real=*/true);
  EXPECT_EQ(back.term_count(), sig.term_count());
  EXPECT_EQ(back.fourier_coefficient({1.0}), sig.fourier_coefficient({1.0}));
}

TEST_F(CliTest, FrequencySetJsonRoundTrip) {
  apde::FrequencySet fs(2);
  fs.insert({1.0, 0.5});
  fs.insert({-0.25, 2.0});
  auto back = apde::io::frequency_set_from_json(apde::io::to_json(fs));
  EXPECT_EQ(back.dims(), 2);
  EXPECT_EQ(back.size(), 2u);
  EXPECT_TRUE(back.contains({1.0, 0.5}));
  EXPECT_TRUE(back.contains({-0.25, 2.0}));
}

}  // namespace
