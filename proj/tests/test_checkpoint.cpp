#include <gtest/gtest.h>

#include "pluvia/checkpoint.hpp"
#include "pluvia/config.hpp"
#include "support.hpp"

using namespace pluvia;

namespace {

Checkpoint sample_checkpoint() {
    ModelConfig mc;
    mc.window_size = 6;
    mc.conv_filters = 3;
    mc.kernel_size = 2;
    mc.lstm1_units = 4;
    mc.lstm2_units = 3;
    mc.dense1_units = 3;
    mc.dense2_units = 2;
    mc.output_scale = 123.456;
    Checkpoint cp;
    cp.model = build_model(mc, 99);
    cp.training.seed = 99;
    cp.seed = 99;
    return cp;
}

}  // namespace

TEST(Checkpoint, SaveLoadSaveIsByteIdentical) {
    const Checkpoint cp = sample_checkpoint();
    const std::string once = checkpoint_to_json(cp);
    const Checkpoint reloaded = checkpoint_from_json(once);
    const std::string twice = checkpoint_to_json(reloaded);
    EXPECT_EQ(once, twice);
}

TEST(Checkpoint, ReloadedModelForwardsBitIdentically) {
    const Checkpoint cp = sample_checkpoint();
    Rng rng(4);
    Tensor window({6, 1});
    for (double& v : window.values()) v = rng.next_uniform(0, 1);
    const Tensor before = model_forward(cp.model, window);

    const Checkpoint reloaded = checkpoint_from_json(checkpoint_to_json(cp));
    const Tensor after = model_forward(reloaded.model, window);
    ASSERT_EQ(before.numel(), after.numel());
    for (std::size_t i = 0; i < before.numel(); ++i) EXPECT_EQ(before[i], after[i]);
    EXPECT_EQ(reloaded.model.config.output_scale, 123.456);
    EXPECT_EQ(reloaded.seed, 99u);
}

TEST(Checkpoint, InvalidJsonRejected) {
    EXPECT_THROW(checkpoint_from_json("not json"), DataError);
    EXPECT_THROW(checkpoint_from_json("{}"), DataError);
}

TEST(Checkpoint, WrongVersionRejected) {
    const Checkpoint cp = sample_checkpoint();
    std::string text = checkpoint_to_json(cp);
    const std::string needle = "\"format_version\": 1";
    text.replace(text.find(needle), needle.size(), "\"format_version\": 2");
    EXPECT_THROW(checkpoint_from_json(text), DataError);
}

TEST(Checkpoint, TamperedShapeRejected) {
    const Checkpoint cp = sample_checkpoint();
    std::string text = checkpoint_to_json(cp);
    const std::string needle = "\"shape\": [2, 1, 3]";
    ASSERT_NE(text.find(needle), std::string::npos);
    text.replace(text.find(needle), needle.size(), "\"shape\": [2, 1, 4]");
    EXPECT_THROW(checkpoint_from_json(text), DataError);
}

TEST(RunConfig, DefaultsAreReferenceConfiguration) {
    const RunConfig cfg = run_config_from_json("{}");
    EXPECT_EQ(cfg.split_fraction, 0.8);
    EXPECT_EQ(cfg.format, SeriesFormat::Long);
    EXPECT_EQ(cfg.model.window_size, 64u);
    EXPECT_EQ(cfg.model.conv_filters, 32u);
    EXPECT_EQ(cfg.model.kernel_size, 5u);
    EXPECT_EQ(cfg.model.lstm1_units, 64u);
    EXPECT_EQ(cfg.model.lstm2_units, 60u);
    EXPECT_TRUE(cfg.model.lstm2_return_sequences);
    EXPECT_EQ(cfg.model.dense1_units, 30u);
    EXPECT_EQ(cfg.model.dense2_units, 10u);
    EXPECT_EQ(cfg.model.output_scale, 0.0);  // auto
    EXPECT_EQ(cfg.training.batch_size, 256u);
    EXPECT_EQ(cfg.training.epochs, 50u);
    EXPECT_EQ(cfg.training.window_size, 64u);
    EXPECT_EQ(cfg.training.schedule.initial, 1e-8);
    EXPECT_EQ(cfg.training.schedule.factor, 10.0);
    EXPECT_EQ(cfg.training.schedule.period_epochs, 20u);
    EXPECT_TRUE(cfg.training.shuffle);
    EXPECT_FALSE(cfg.training.sequence_loss);
}

TEST(RunConfig, AllProblemsReportedAtOnce) {
    const std::string bad = R"({
        "split_fraction": 1.5,
        "training": {"batch_size": 0, "epochs": 0, "huber_delta": -1}
    })";
    try {
        run_config_from_json(bad);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("split_fraction"), std::string::npos);
        EXPECT_NE(msg.find("batch_size"), std::string::npos);
        EXPECT_NE(msg.find("epochs"), std::string::npos);
        EXPECT_NE(msg.find("huber_delta"), std::string::npos);
        EXPECT_NE(msg.find("4 problem"), std::string::npos);
    }
}

TEST(RunConfig, UnknownKeysRejected) {
    EXPECT_THROW(run_config_from_json(R"({"learning_rate": 0.1})"), ConfigError);
    EXPECT_THROW(run_config_from_json(R"({"model": {"pooling": true}})"), ConfigError);
}

TEST(RunConfig, WindowSizePropagatesToTraining) {
    const RunConfig cfg = run_config_from_json(R"({"model": {"window_size": 16}})");
    EXPECT_EQ(cfg.model.window_size, 16u);
    EXPECT_EQ(cfg.training.window_size, 16u);
}

TEST(RunConfig, PracticalScheduleParses) {
    const RunConfig cfg = run_config_from_json(
        R"({"training": {"lr_initial": 1e-3, "lr_factor": 1.0}})");
    EXPECT_EQ(cfg.training.schedule.initial, 1e-3);
    EXPECT_EQ(cfg.training.schedule.factor, 1.0);
}
