#include "bgm/error.hpp"
#include "bgm/parallel.hpp"
#include "bgm/rng.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <set>
#include <vector>

using namespace bgm;

TEST(Rng, DeriveSeedSeparatesPaths)
{
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 50; ++a) {
        for (std::uint64_t b = 0; b < 3; ++b) seen.insert(derive_seed(7, {a, b}));
    }
    EXPECT_EQ(seen.size(), 150u);
    EXPECT_EQ(derive_seed(7, {1, 2}), derive_seed(7, {1, 2}));
    EXPECT_NE(derive_seed(7, {1, 2}), derive_seed(7, {2, 1}));
    EXPECT_NE(derive_seed(7, {1}), derive_seed(8, {1}));
}

TEST(Parallel, VisitsEveryIndexOnce)
{
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(1000, 4, [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
    parallel_for(0, 4, [&](std::size_t) { FAIL(); });
}

TEST(Parallel, RethrowsLowestFailingIndex)
{
    try {
        parallel_for(100, 3, [](std::size_t i) {
            if (i == 70 || i == 30) throw Error(ErrorKind::SolverFailure, "test", "index " + std::to_string(i));
        });
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("index 30"), std::string::npos);
    }
}

TEST(Error, CarriesKindAndModule)
{
    const Error e(ErrorKind::RaggedRows, "cli_io", "row 3");
    EXPECT_EQ(e.kind(), ErrorKind::RaggedRows);
    EXPECT_EQ(e.module(), "cli_io");
    const std::string what = e.what();
    EXPECT_NE(what.find("cli_io"), std::string::npos);
    EXPECT_NE(what.find("RaggedRows"), std::string::npos);
    EXPECT_NE(what.find("row 3"), std::string::npos);
}
