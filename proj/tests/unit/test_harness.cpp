#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "forage/harness.hpp"

using namespace forage;
namespace fs = std::filesystem;

namespace {

ScenarioConfig short_run(const std::string& name, double minutes, std::uint64_t seed) {
    auto c = scenario(name);
    c.duration_min = minutes;
    c.seed = seed;
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Harness, SummaryFromEventsMatchesLiveSummary) {
    for (const auto& name : scenario_names()) {
        const auto c = short_run(name, 240, 5);
        Simulation sim(c);
        sim.run();
        EXPECT_EQ(summarize(sim), summarize_events(sim.events(), c)) << name;
    }
}

TEST(Harness, SoloSummaryHasOneRobot) {
    const auto s = run(short_run("solo", 60, 1)).summary;
    ASSERT_EQ(s.robots.size(), 1u);
    EXPECT_EQ(s.scenario, "solo");
    EXPECT_EQ(s.seed, 1u);
    EXPECT_DOUBLE_EQ(s.robots[0].t_task + s.robots[0].t_recharging + s.robots[0].t_dead, 60.0);
}

TEST(Harness, ReplicationsAreSeedOrderedAndThreadIndependent) {
    auto c = short_run("bottleneck", 90, 11);
    c.replications = 4;
    const auto serial = run_replications(c, 1);
    const auto parallel = run_replications(c, 4);
    ASSERT_EQ(serial.size(), 4u);
    ASSERT_EQ(parallel.size(), 4u);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].summary.seed, 11 + i);
        EXPECT_EQ(serial[i].summary, parallel[i].summary);
        EXPECT_EQ(serial[i].events, parallel[i].events);
        auto single = c;
        single.seed = 11 + i;
        EXPECT_EQ(run(single).summary, serial[i].summary);
    }
}

TEST(Harness, OutputsAreByteIdenticalAcrossRuns) {
    const auto base = fs::temp_directory_path() / "forage_harness_test";
    fs::remove_all(base);
    const auto c = short_run("barrier-organism", 200, 2);
    write_outputs(base / "a", run(c));
    write_outputs(base / "b", run(c));
    for (const char* f : {"events.csv", "summary.json", "timeseries.csv", "config.resolved"}) {
        ASSERT_TRUE(fs::exists(base / "a" / f)) << f;
        EXPECT_EQ(slurp(base / "a" / f), slurp(base / "b" / f)) << f;
    }
    fs::remove_all(base);
}

TEST(Harness, EventsCsvHasHeaderAndOneLinePerEvent) {
    const auto r = run(short_run("solo", 120, 4));
    std::ostringstream os;
    write_events_csv(os, r.events);
    std::istringstream is(os.str());
    std::string line;
    int lines = 0;
    while (std::getline(is, line)) ++lines;
    EXPECT_EQ(lines, static_cast<int>(r.events.size()) + 1);
}

TEST(Harness, SummaryJsonCarriesHeadlineFields) {
    const auto r = run(short_run("bottleneck", 60, 3));
    std::ostringstream os;
    write_summary_json(os, r.summary);
    const auto text = os.str();
    for (const char* key : {"\"swarm_phi\"", "\"deaths\"", "\"robots\"", "\"strategy\""})
        EXPECT_NE(text.find(key), std::string::npos) << key;
}
