// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "lgt/config_space.hpp"

using namespace lgt;

namespace {

ConfigurationSpace clf_space() { return ConfigurationSpace::standard(TaskType::classification, 3); }

bool mentions(const ValidationResult& r, const std::string& field, const std::string& token) {
    for (const auto& v : r.violations)
        if (v.field.find(field) != std::string::npos &&
            (v.bound.find(token) != std::string::npos || v.message.find(token) != std::string::npos))
            return true;
    return false;
}

// Random deltas, including hostile ones (huge values, unknown fields,
// out-of-vocabulary names), for the apply_delta properties.
ConfigDelta random_delta(const ConfigurationSpace& space, SeededRng& rng) {
    ConfigDelta d;
    const int n = rng.uniform_int(1, 4);
    for (int i = 0; i < n; ++i) {
        ConfigChange ch;
        switch (rng.uniform_int(0, 5)) {
            case 0: {
                ch.kind = ConfigChange::Kind::set_numeric;
                const auto& f = space.numeric_fields[static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<int>(space.numeric_fields.size()) - 1))];
                ch.field = f.name;
                ch.value = rng.uniform(-10.0, 10.0) * (f.hi - f.lo) + f.lo;
                break;
            }
            case 1: {
                ch.kind = ConfigChange::Kind::scale_numeric;
                const auto& f = space.numeric_fields[static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<int>(space.numeric_fields.size()) - 1))];
                ch.field = f.name;
                ch.value = rng.uniform(-5.0, 5.0);
                break;
            }
            case 2: {
                ch.kind = ConfigChange::Kind::set_categorical;
                static const char* fields[] = {"loss", "optimizer", "scheduler", "activation", "engine"};
                static const char* values[] = {"focal", "adamw", "cosine", "tanh", "lion", "mse"};
                ch.field = fields[rng.uniform_int(0, 4)];
                ch.str_value = values[rng.uniform_int(0, 5)];
                break;
            }
            case 3: {
                ch.kind = ConfigChange::Kind::add_method;
                static const char* methods[] = {"noise", "scale", "duplication", "rotation", "banana"};
                ch.str_value = methods[rng.uniform_int(0, 4)];
                break;
            }
            case 4: {
                ch.kind = ConfigChange::Kind::set_numeric;
                ch.field = "warp_factor";  // unknown on purpose
                ch.value = rng.uniform(-1e6, 1e6);
                break;
            }
            default:
                ch.kind = ConfigChange::Kind::no_change;
        }
        d.changes.push_back(std::move(ch));
    }
    return d;
}

}  // namespace

TEST_SUITE("config_space") {

TEST_CASE("validate accepts in-bound configurations") {
    const auto space = clf_space();
    Configuration c = default_config(space, TaskType::classification);
    CHECK(validate(c, space).ok());

    c.arch.layer_widths = {64, 64, 64};  // 3 layers of 64
    c.hyper.learning_rate = 0.01;
    CHECK(validate(c, space).ok());
}

TEST_CASE("validate names field, value, and bound on violations") {
    const auto space = clf_space();
    Configuration c = default_config(space, TaskType::classification);

    c.hyper.learning_rate = 0.5;
    auto r = validate(c, space);
    CHECK_FALSE(r.ok());
    CHECK(mentions(r, "learning_rate", "0.1"));

    c = default_config(space, TaskType::classification);
    c.arch.layer_widths = {64, 64, 64, 64, 64, 64};  // 6 hidden layers
    r = validate(c, space);
    CHECK_FALSE(r.ok());
    CHECK(mentions(r, "layer_count", "5"));

    c = default_config(space, TaskType::classification);
    c.strategy.loss = LossKind::mse;  // task-incompatible
    CHECK_FALSE(validate(c, space).ok());

    c = default_config(space, TaskType::classification);
    c.feature.methods = {AugmentMethod::noise, AugmentMethod::noise};
    CHECK_FALSE(validate(c, space).ok());
}

TEST_CASE("apply_delta: scale within the trust region is exact") {
    const auto space = clf_space();
    Configuration c = default_config(space, TaskType::classification);
    ConfigDelta d;
    d.changes.push_back({ConfigChange::Kind::scale_numeric, "learning_rate", 2.0, ""});
    auto [next, report] = apply_delta(c, d, space);
    CHECK(next.hyper.learning_rate == 0.02);
    CHECK_FALSE(report.events.at(0).trust_region_capped);
    CHECK_FALSE(report.events.at(0).clamped);
}

TEST_CASE("apply_delta: no_change is the identity") {
    const auto space = clf_space();
    const Configuration c = default_config(space, TaskType::classification);
    auto [next, report] = apply_delta(c, ConfigDelta::none(), space);
    CHECK(next == c);
    CHECK(report.empty());
}

TEST_CASE("apply_delta: out-of-bound set is capped then clamped, and recorded") {
    const auto space = clf_space();
    Configuration c = default_config(space, TaskType::classification);
    ConfigDelta d;
    d.changes.push_back({ConfigChange::Kind::set_numeric, "learning_rate", 0.5, ""});
    auto [next, report] = apply_delta(c, d, space);
    // trust region (eps=1) caps 0.5 -> 0.02; no clamp needed after the cap
    CHECK(next.hyper.learning_rate == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(report.events.at(0).trust_region_capped);

    // a set directly at 0.5 from lr=0.09 caps to 0.18 and then clamps to 0.1
    c.hyper.learning_rate = 0.09;
    auto [next2, report2] = apply_delta(c, d, space);
    CHECK(next2.hyper.learning_rate == 0.1);
    CHECK(report2.events.at(0).trust_region_capped);
    CHECK(report2.events.at(0).clamped);
}

TEST_CASE("apply_delta: out-of-vocabulary degrades to a reported no-op") {
    const auto space = clf_space();
    const Configuration c = default_config(space, TaskType::classification);
    ConfigDelta d;
    d.changes.push_back({ConfigChange::Kind::set_categorical, "optimizer", 0.0, "lion"});
    d.changes.push_back({ConfigChange::Kind::set_numeric, "warp_factor", 3.0, ""});
    d.changes.push_back({ConfigChange::Kind::add_method, "", 0.0, "rotation"});  // image-only
    auto [next, report] = apply_delta(c, d, space);
    CHECK(next == c);
    CHECK(report.events.size() == 3);
    for (const auto& ev : report.events) CHECK(ev.dropped);
}

TEST_CASE("default_config matches its contract") {
    const auto space = clf_space();
    const Configuration c = default_config(space, TaskType::classification);
    CHECK(c.arch.layer_widths == std::vector<int>{64, 64});
    CHECK(c.arch.dropout == 0.2);
    CHECK(c.hyper.learning_rate == 0.01);
    CHECK(c.hyper.weight_decay == 0.0);
    CHECK(c.hyper.class_weights == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(c.strategy.loss == LossKind::cross_entropy);
    CHECK(c.strategy.optimizer == OptimizerKind::adam);
    CHECK(c.strategy.scheduler == SchedulerKind::constant);
    CHECK(c.feature.methods.empty());
    CHECK(validate(c, space).ok());

    const auto reg_space = ConfigurationSpace::standard(TaskType::regression, 0);
    const Configuration r = default_config(reg_space, TaskType::regression);
    CHECK(r.strategy.loss == LossKind::mse);
    CHECK(r.hyper.class_weights.empty());
    CHECK(validate(r, reg_space).ok());
}

TEST_CASE("sample_random: deterministic, always valid, log-uniform learning rate") {
    const auto space = clf_space();
    SeededRng rng1(42), rng2(42);
    CHECK(sample_random(space, rng1).canonical_string() ==
          sample_random(space, rng2).canonical_string());

    SeededRng rng(4242);
    std::vector<double> lrs;
    for (int i = 0; i < 1000; ++i) {
        const Configuration c = sample_random(space, rng);
        CHECK(validate(c, space).ok());
        lrs.push_back(c.hyper.learning_rate);
    }
    std::sort(lrs.begin(), lrs.end());
    CHECK(std::log10(lrs.back()) - std::log10(lrs.front()) >= 2.0);  // spans >= 2 decades

    // empirical quartiles of a log-uniform over [1e-4, 1e-1]: 10^-3.25, 10^-2.5, 10^-1.75
    const double q25 = std::log10(lrs[249]);
    const double q50 = std::log10(lrs[499]);
    const double q75 = std::log10(lrs[749]);
    CHECK(std::abs(q25 - (-3.25)) < 0.15);
    CHECK(std::abs(q50 - (-2.5)) < 0.15);
    CHECK(std::abs(q75 - (-1.75)) < 0.15);
}

TEST_CASE("enumerate_grid: counts, midpoints, log spacing") {
    const auto space = clf_space();

    auto grid = enumerate_grid(space, {{"learning_rate", 2}, {"hidden_width", 3}});
    CHECK(grid.size() == 6);
    for (const auto& c : grid) CHECK(validate(c, space).ok());

    grid = enumerate_grid(space, {{"weight_decay", 1}});
    REQUIRE(grid.size() == 1);
    CHECK(grid[0].hyper.weight_decay == doctest::Approx(0.05).epsilon(1e-12));

    grid = enumerate_grid(space, {{"learning_rate", 4}});
    REQUIRE(grid.size() == 4);
    const double expected[] = {1e-4, 1e-3, 1e-2, 1e-1};
    for (int i = 0; i < 4; ++i)
        CHECK(grid[static_cast<std::size_t>(i)].hyper.learning_rate ==
              doctest::Approx(expected[i]).epsilon(1e-9));

    CHECK_THROWS_AS((void)enumerate_grid(space, {{"warp_factor", 2}}), std::invalid_argument);
    CHECK_THROWS_AS((void)enumerate_grid(space, {{"learning_rate", 0}}), std::invalid_argument);

    // byte-stable enumeration under fixed inputs
    auto grid_a = enumerate_grid(space, {{"learning_rate", 3}, {"batch_size", 2}});
    auto grid_b = enumerate_grid(space, {{"learning_rate", 3}, {"batch_size", 2}});
    REQUIRE(grid_a.size() == grid_b.size());
    for (std::size_t i = 0; i < grid_a.size(); ++i)
        CHECK(grid_a[i].canonical_string() == grid_b[i].canonical_string());
}

TEST_CASE("property: grid size is the product of resolutions") {
    const auto space = clf_space();
    SeededRng rng(808);
    const std::vector<std::string> pool{"learning_rate", "weight_decay", "batch_size",
                                        "focal_gamma", "hidden_width", "noise_sigma"};
    for (int trial = 0; trial < 20; ++trial) {
        std::map<std::string, int> res;
        std::size_t expected = 1;
        const int n_fields = rng.uniform_int(1, 3);
        for (int f = 0; f < n_fields; ++f) {
            const int r = rng.uniform_int(1, 4);
            auto [it, inserted] =
                res.emplace(pool[static_cast<std::size_t>(rng.uniform_int(0, 5))], r);
            if (inserted) expected *= static_cast<std::size_t>(r);
        }
        CHECK(enumerate_grid(space, res).size() == expected);
    }
}

TEST_CASE("property: apply_delta output always validates and respects the trust region") {
    const auto space = clf_space();
    SeededRng rng(777);
    Configuration c = default_config(space, TaskType::classification);

    for (int trial = 0; trial < 500; ++trial) {
        const ConfigDelta d = random_delta(space, rng);
        auto [next, report] = apply_delta(c, d, space);
        CHECK(validate(next, space).ok());

        for (const auto& ev : report.events) {
            if (ev.dropped || (ev.action != "set" && ev.action != "scale")) continue;
            const NumericFieldSpec* f = space.find_numeric(ev.field);
            REQUIRE(f != nullptr);
            const double denom = std::max(std::abs(ev.old_value), (f->hi - f->lo) * 1e-6);
            // capped value (pre-clamp) obeys |new - old| <= eps * denom, with
            // 1e-9 relative slack for the rounding of old + copysign(step).
            CHECK(std::abs(ev.capped_value - ev.old_value) <=
                  f->trust_region * denom * (1.0 + 1e-9));
        }
        // walk the configuration forward sometimes, so properties hold along
        // trajectories rather than only from the default point
        if (trial % 3 == 0) c = next;
    }
}

TEST_CASE("configuration JSON round-trips") {
    const auto space = clf_space();
    SeededRng rng(31337);
    for (int i = 0; i < 50; ++i) {
        const Configuration c = sample_random(space, rng);
        const Configuration back = Configuration::from_json(c.to_json());
        CHECK(back == c);
        CHECK(back.canonical_string() == c.canonical_string());
    }
    const auto space_back = ConfigurationSpace::from_json(space.to_json());
    CHECK(space_back.to_json().dump() == space.to_json().dump());
}

}  // TEST_SUITE
