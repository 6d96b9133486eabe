#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "voipsim/engine.hpp"

using namespace voipsim;

TEST_CASE("events pop in time order") {
    Engine engine;
    engine.schedule(2.0, EventKind::SimulationEnd, 2);
    engine.schedule(1.0, EventKind::SimulationEnd, 1);

    std::vector<uint64_t> order;
    engine.run_until(480.0, [&](const Event& e) { order.push_back(e.a); });
    REQUIRE(order == std::vector<uint64_t>{1, 2});
}

TEST_CASE("equal-time events dispatch in scheduling order") {
    Engine engine;
    engine.schedule(5.0, EventKind::SimulationEnd, 'A');
    engine.schedule(5.0, EventKind::SimulationEnd, 'B');

    std::vector<uint64_t> order;
    engine.run_until(10.0, [&](const Event& e) { order.push_back(e.a); });
    REQUIRE(order == std::vector<uint64_t>{'A', 'B'});
}

TEST_CASE("scheduling in the past is rejected") {
    Engine engine;
    engine.schedule(3.0, EventKind::SimulationEnd);
    engine.run_until(3.0, [](const Event&) {});
    REQUIRE(engine.now() == 3.0);
    REQUIRE_THROWS_AS(engine.schedule(0.0, EventKind::SimulationEnd), ValidationError);
    REQUIRE_THROWS_AS(engine.schedule(-1.0, EventKind::SimulationEnd), ValidationError);
}

TEST_CASE("empty queue run ends at the requested time with zero dispatches") {
    Engine engine;
    const SimTime end = engine.run_until(480.0, [](const Event&) { FAIL("no events expected"); });
    REQUIRE(end == 480.0);
    REQUIRE(engine.dispatched() == 0);
}

TEST_CASE("a single early event still leaves the clock at the end time") {
    Engine engine;
    engine.schedule(100.0, EventKind::SimulationEnd);
    const SimTime end = engine.run_until(480.0, [](const Event&) {});
    REQUIRE(end == 480.0);
    REQUIRE(engine.dispatched() == 1);
}

TEST_CASE("events beyond the end time stay undispatched") {
    Engine engine;
    engine.schedule(100.0, EventKind::SimulationEnd, 1);
    engine.schedule(500.0, EventKind::SimulationEnd, 2);
    std::vector<uint64_t> seen;
    engine.run_until(480.0, [&](const Event& e) { seen.push_back(e.a); });
    REQUIRE(seen == std::vector<uint64_t>{1});
    REQUIRE(engine.pending() == 1);
}

TEST_CASE("clock monotone and tie-break total under random schedules") {
    std::mt19937_64 rng(20240811);
    for (int round = 0; round < 20; ++round) {
        Engine engine;
        std::uniform_real_distribution<double> when(0.0, 100.0);
        // a third of the events land on a coarse grid to force time ties
        for (int i = 0; i < 200; ++i) {
            double t = when(rng);
            if (i % 3 == 0) t = std::floor(t);
            engine.schedule(t, EventKind::SimulationEnd, static_cast<uint64_t>(i));
        }
        SimTime last_time = -1.0;
        uint64_t last_seq = 0;
        bool first = true;
        engine.run_until(200.0, [&](const Event& e) {
            REQUIRE(e.time >= last_time);
            if (!first && e.time == last_time) REQUIRE(e.seq > last_seq);
            last_time = e.time;
            last_seq = e.seq;
            first = false;
        });
        REQUIRE(engine.dispatched() == 200);
    }
}

TEST_CASE("identical schedules replay identical event sequences") {
    auto run = [] {
        Engine engine;
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> when(0.0, 50.0);
        for (int i = 0; i < 500; ++i) engine.schedule(when(rng), EventKind::SimulationEnd, i);
        std::vector<std::pair<double, uint64_t>> trace;
        engine.run_until(60.0, [&](const Event& e) { trace.emplace_back(e.time, e.seq); });
        return trace;
    };
    REQUIRE(run() == run());
}
